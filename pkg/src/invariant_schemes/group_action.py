"""
Point symmetry groups, product frames and discrete invariants.

Heat equation with logarithmic source, ``u_t = u_xx + u ln u``::

    X = x + 2 l3 e^t + l2,   T = t + l1,   ln U = ln u - l3 e^t x - l3² e^{2t} + l4 e^t

Spherical Burgers equation, ``u_t + u/t + u u_x + u_xx = 0``::

    X = e^{l2} (x + l3 ln t) + l1,   T = e^{2 l2} t,   U = e^{-l2} (u + l3 / t)

A frame is the group element that moves a stencil onto a fixed cross-section;
invariantizing a function means evaluating it on the moved stencil. Every
invariant returned here is exactly invariant under the full group, which the
tests check by acting on stencils with random group elements.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import astuple, dataclass

from invariant_schemes.errors import DomainError
from invariant_schemes.grid import SCHEME_OFFSETS, Node, Stencil
from invariant_schemes.taylor_fd import central_first, central_second

_SPATIAL = ((-1, 0), (0, 0), (1, 0))


@dataclass(frozen=True)
class HeatGroupElement:
    """Parameters: time shift, space shift, Galilei-like boost, scaling of ``ln u``."""

    l1: float = 0.0
    l2: float = 0.0
    l3: float = 0.0
    l4: float = 0.0

    def params(self) -> tuple[float, ...]:
        return astuple(self)


@dataclass(frozen=True)
class BurgersGroupElement:
    """Parameters: space shift, scaling, logarithmic boost."""

    l1: float = 0.0
    l2: float = 0.0
    l3: float = 0.0

    def params(self) -> tuple[float, ...]:
        return astuple(self)


@dataclass(frozen=True)
class HeatDiscreteInvariants:
    I_d: float
    J_d: float
    iota_x01: float
    sigma: float
    tau: float
    g: float


@dataclass(frozen=True)
class BurgersDiscreteInvariants:
    """Discrete invariants of the Burgers stencil.

    ``I_d`` and ``iota_x01`` are true invariants. ``residual_form`` and
    ``mesh_form`` are the simplified coordinate expressions
    ``u_t + u/t + u u_x + u_xx`` and ``σ - u t ln(t01/t00)``; they vanish
    together with the invariants but are only relative invariants (scaling
    multiplies them by a power of ``e^{l2}``).
    """

    I_d: float
    iota_x01: float
    u_x_d: float
    u_xx_d: float
    u_t_d: float
    residual_form: float
    mesh_form: float


def _log_u(p: Node) -> float:
    if p.u <= 0.0:
        raise DomainError(f"ln u undefined at node {tuple(p.index)}: u = {p.u}")
    return math.log(p.u)


def heat_act(g: HeatGroupElement, p: Node) -> Node:
    et = math.exp(p.t)
    log_u = _log_u(p) - g.l3 * et * p.x - g.l3**2 * et * et + g.l4 * et
    return p.replace(x=p.x + 2.0 * g.l3 * et + g.l2, t=p.t + g.l1, u=math.exp(log_u))


def burgers_act(g: BurgersGroupElement, p: Node) -> Node:
    if p.t <= 0.0:
        raise DomainError(f"Burgers action needs t > 0, got t = {p.t} at {tuple(p.index)}")
    s = math.exp(g.l2)
    return p.replace(
        x=s * (p.x + g.l3 * math.log(p.t)) + g.l1,
        t=s * s * p.t,
        u=(p.u + g.l3 / p.t) / s,
    )


def act_on_stencil(act: Callable, g, st: Stencil) -> Stencil:
    """Product action: apply ``act(g, .)`` to every node of ``st``."""
    return st.map(lambda p: act(g, p))


def _check_flat(st: Stencil, offsets=_SPATIAL) -> None:
    t0 = st[0, 0].t
    for o in offsets:
        if st[o].t != t0:
            raise DomainError(f"spatial neighbours must share t (flat time); {o} has t = {st[o].t}, base {t0}")


def _spatial(st: Stencil, values: Callable[[Node], float]):
    xm, x0, xp = (st[o].x for o in _SPATIAL)
    fm, f0, fp = (values(st[o]) for o in _SPATIAL)
    return (xm, x0, xp, fm, f0, fp)


def heat_log_slope(st: Stencil) -> float:
    """Centred ``(ln u)_x`` at the base node."""
    st.require(_SPATIAL)
    return central_first(*_spatial(st, _log_u))


def heat_frame(st: Stencil) -> HeatGroupElement:
    """Frame sending ``x00, t00, ln u00`` and the centred ``(ln u)_x`` to zero."""
    st.require(_SPATIAL)
    _check_flat(st)
    p = st[0, 0]
    g = heat_log_slope(st)
    e = math.exp(-p.t)
    return HeatGroupElement(
        l1=-p.t,
        l2=-(p.x + 2.0 * g),
        l3=e * g,
        l4=e * (-_log_u(p) + p.x * g + g * g),
    )


def burgers_frame(p: Node) -> BurgersGroupElement:
    """Frame sending the node to ``(x, t, u) = (0, 1, 0)``."""
    if p.t <= 0.0:
        raise DomainError(f"Burgers frame needs t > 0, got t = {p.t}")
    root = math.sqrt(p.t)
    return BurgersGroupElement(
        l1=-(p.x - p.u * p.t * math.log(p.t)) / root,
        l2=math.log(1.0 / root),
        l3=-p.u * p.t,
    )


def _time_step(st: Stencil) -> tuple[float, float]:
    p00, p01 = st[0, 0], st[0, 1]
    tau = p01.t - p00.t
    if tau <= 0.0:
        raise DomainError(f"invalid time step tau = {tau}; need t01 > t00")
    return p01.x - p00.x, tau


def heat_invariants(st: Stencil) -> HeatDiscreteInvariants:
    """Discrete invariants of the heat stencil ``(-1,0), (0,0), (1,0), (0,1)``.

    ``I_d`` is the invariantized time derivative of ``ln u``, ``J_d`` the
    centred second difference of ``ln u`` and ``iota_x01`` the normalized
    position of the next-level node.
    """
    st.require(SCHEME_OFFSETS)
    _check_flat(st)
    sigma, tau = _time_step(st)
    g = heat_log_slope(st)
    J = central_second(*_spatial(st, _log_u))
    e = math.exp(tau)
    lu00, lu01 = _log_u(st[0, 0]), _log_u(st[0, 1])
    I = (lu01 - e * lu00) / tau - sigma / tau * e * g + (e - e * e) / tau * g * g
    return HeatDiscreteInvariants(
        I_d=I,
        J_d=J,
        iota_x01=sigma + 2.0 * (e - 1.0) * g,
        sigma=sigma,
        tau=tau,
        g=g,
    )


def burgers_invariants(st: Stencil) -> BurgersDiscreteInvariants:
    """Discrete invariants of the Burgers stencil ``(-1,0), (0,0), (1,0), (0,1)``.

    The invariants carry the normalization factors of the frame: ``I_d`` equals
    ``t00^{3/2}`` times the boosted time derivative plus ``u_xx``, and
    ``iota_x01 = (σ - u00 t00 ln(t01/t00)) / sqrt(t00)``.
    """
    st.require(SCHEME_OFFSETS)
    _check_flat(st)
    p00, p01 = st[0, 0], st[0, 1]
    if p00.t <= 0.0:
        raise DomainError(f"Burgers invariants need t > 0, got t00 = {p00.t}")
    sigma, tau = _time_step(st)
    spatial = _spatial(st, lambda p: p.u)
    u_x = central_first(*spatial)
    u_xx = central_second(*spatial)
    du = p01.u - p00.u
    u_t = (du - sigma * u_x) / tau

    log_ratio = math.log(p01.t / p00.t)
    mesh_form = sigma - p00.u * p00.t * log_ratio
    # time derivative after the boost that sends u00 to 0
    boosted_u_t = (du + p00.u * (1.0 - p00.t / p01.t) - mesh_form * u_x) / tau
    return BurgersDiscreteInvariants(
        I_d=p00.t**1.5 * (boosted_u_t + u_xx),
        iota_x01=mesh_form / math.sqrt(p00.t),
        u_x_d=u_x,
        u_xx_d=u_xx,
        u_t_d=u_t,
        residual_form=u_t + p00.u / p00.t + p00.u * u_x + u_xx,
        mesh_form=mesh_form,
    )


def analytic_heat_invariants(x: float, t: float, c: float) -> tuple[float, float]:
    """Differential invariants ``I = (ln u)_t - ln u - (ln u)_x²`` and
    ``J = (ln u)_xx`` on ``u = exp(c e^t - x²/4 + 1/2)``.
    """
    log_u = c * math.exp(t) - x * x / 4.0 + 0.5
    log_u_t = c * math.exp(t)
    log_u_x = -x / 2.0
    return log_u_t - log_u - log_u_x**2, -0.5


def invariantize(fn: Callable[[Stencil], object], st: Stencil, frame: Callable, act: Callable):
    """Evaluate ``fn`` on the stencil after moving it onto the cross-section.

    ``frame(st)`` must return the normalizing group element; for Burgers pass
    ``lambda s: burgers_frame(s[0, 0])``.
    """
    return fn(act_on_stencil(act, frame(st), st))
