"""Closed-form solutions used for initial data, boundary values and error measurement."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from invariant_schemes.errors import ConfigError, DomainError
from invariant_schemes.grid import TimeLevel
from invariant_schemes.models import Model


@dataclass(frozen=True)
class HeatExact:
    """``u = exp(c e^t - x²/4 + 1/2)`` solves ``u_t = u_xx + u ln u``; steady for ``c = 0``."""

    c: float = 0.0

    def log_u(self, x, t):
        return self.c * np.exp(t) - np.square(x) / 4.0 + 0.5

    def __call__(self, x, t):
        return np.exp(self.log_u(x, t))


@dataclass(frozen=True)
class BurgersExact:
    """``u = (x + c1) / (t (c2 + ln t))`` solves the spherical Burgers equation."""

    c1: float = 0.0
    c2: float = 1.0

    def __call__(self, x, t):
        t = np.asarray(t, dtype=float)
        if np.any(t <= 0.0):
            raise DomainError(f"Burgers solution needs t > 0, got {t}")
        denom = t * (self.c2 + np.log(t))
        if np.any(denom == 0.0):
            raise DomainError(f"Burgers solution has a pole at t = {math.exp(-self.c2)}")
        return (np.asarray(x, dtype=float) + self.c1) / denom


@dataclass(frozen=True)
class ConstantField:
    """A constant ``u``: ``u = 1`` solves the heat model, ``u = 0`` the Burgers model."""

    value: float

    def __call__(self, x, t):
        return np.broadcast_to(np.float64(self.value), np.broadcast(np.asarray(x), np.asarray(t)).shape).copy()


def heat_exact(sol: HeatExact, x, t):
    return sol(x, t)


def burgers_exact(sol: BurgersExact, x, t):
    return sol(x, t)


def node_count(x_min: float, x_max: float, h: float) -> int:
    """``floor((x_max - x_min) / h) + 1``, forgiving round-off just below an integer."""
    ratio = (x_max - x_min) / h
    return int(math.floor(ratio + 1e-9)) + 1


def initial_level(model, sol, x_min: float, x_max: float, h: float, t0: float) -> TimeLevel:
    """Uniform level ``x_min, x_min + h, ...`` holding the exact solution at ``t0``.

    The spacing ``h`` is kept exact, so the last node undershoots ``x_max`` when
    the interval is not a multiple of ``h``. Heat data must be positive.
    """
    if not x_max > x_min:
        raise ConfigError(f"empty interval [{x_min}, {x_max}]")
    if not h > 0.0:
        raise ConfigError(f"spatial step must be positive, got h = {h}")
    count = node_count(x_min, x_max, h)
    if count < 3:
        raise ConfigError(f"h = {h} leaves {count} node(s) on [{x_min}, {x_max}]; need at least 3")
    x = x_min + h * np.arange(count)
    u = np.asarray(sol(x, t0), dtype=float)
    if Model.parse(model) is Model.HEAT_LOG and np.any(u <= 0.0):
        raise DomainError("heat initial data must be positive")
    return TimeLevel(0, t0, x, u)
