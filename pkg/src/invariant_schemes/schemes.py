"""
Time stepping for the heat-log and spherical Burgers models.

Three variants per model:

* ``standard``: forward Euler with centred differences on a fixed uniform mesh.
* ``partial``: the invariant discretization restricted to a fixed uniform mesh
  (``σ = x01 - x00 = 0``).
* ``full``: the invariant discretization on the invariant moving mesh.

Heat updates are carried out on ``ln u``. Boundary nodes take values from an
exact solution; on moving meshes the boundary abscissae follow the mesh
equation, with one-sided differences where a slope is needed.

:func:`scheme_residual` evaluates the defining equations of a scheme on a
stencil without stepping. For the invariant parts it returns invariantized
residuals, so that the audit can compare values before and after a group
action directly.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from invariant_schemes.errors import ConfigError, DomainError, MeshCollapseError, MisuseError, SchemeError
from invariant_schemes.grid import SCHEME_OFFSETS, MeshHistory, Stencil, TimeLevel, validate_level
from invariant_schemes.group_action import burgers_invariants, heat_invariants
from invariant_schemes.models import Model, SchemeKind
from invariant_schemes.taylor_fd import (
    central_first,
    central_first_array,
    central_second,
    central_second_array,
)

__all__ = [
    "BoundaryPolicy",
    "Model",
    "SchemeKind",
    "StepDiagnostics",
    "StepResult",
    "evolve",
    "residual_labels",
    "scheme_residual",
    "step",
    "step_burgers_full",
    "step_burgers_partial",
    "step_burgers_standard",
    "step_heat_full",
    "step_heat_partial",
    "step_heat_standard",
]


@dataclass(frozen=True)
class BoundaryPolicy:
    """Dirichlet data taken from an exact solution ``exact(x, t)``."""

    exact: Callable
    mode: str = "exact_dirichlet"

    def __post_init__(self):
        if self.mode != "exact_dirichlet":
            raise ValueError(f"unsupported boundary mode {self.mode!r}")

    def value(self, x: float, t: float) -> float:
        return float(self.exact(x, t))


@dataclass(frozen=True)
class StepDiagnostics:
    residuals: np.ndarray  # first scheme equation at interior nodes, after the update
    min_spacing: float
    max_du: float


@dataclass(frozen=True)
class StepResult:
    next: TimeLevel
    diagnostics: StepDiagnostics


def _next_time(lv: TimeLevel, k: float, t_next: float | None) -> float:
    if not k > 0.0:
        raise MisuseError(f"time step must be positive, got k = {k}")
    return lv.t + k if t_next is None else float(t_next)


def _require_uniform(lv: TimeLevel, scheme: str) -> float:
    if not lv.is_uniform():
        raise MisuseError(f"{scheme} scheme needs a uniform mesh")
    return (lv.x[-1] - lv.x[0]) / (len(lv) - 1)


def _require_size(lv: TimeLevel) -> None:
    if len(lv) < 3:
        raise MisuseError(f"a time level needs at least 3 nodes, got {len(lv)}")


def _log(u: np.ndarray) -> np.ndarray:
    if np.any(u <= 0.0):
        bad = int(np.argmax(u <= 0.0))
        raise DomainError(f"ln u undefined: u[{bad}] = {u[bad]}")
    return np.log(u)


def _require_positive_time(t: float) -> None:
    if t <= 0.0:
        raise DomainError(f"Burgers schemes need t > 0, got t = {t}")


def _finish(lv, t1, x1, u1, residuals) -> StepResult:
    nxt = TimeLevel(lv.n + 1, t1, x1, u1, lv.m0)
    bad = validate_level(nxt)
    if bad:
        raise MeshCollapseError(bad)
    diag = StepDiagnostics(
        residuals=residuals,
        min_spacing=float(np.min(np.diff(nxt.x))),
        max_du=float(np.max(np.abs(nxt.u - lv.u))),
    )
    return StepResult(nxt, diag)


# --- heat with logarithmic source ---------------------------------------------


def step_heat_standard(
    lv: TimeLevel,
    k: float,
    bc: BoundaryPolicy,
    *,
    t_next: float | None = None,
    forward_laplacian: bool = False,
) -> StepResult:
    """Forward Euler ``u01 = u00 + k (u_xx + u00 ln u00)`` on a fixed uniform mesh.

    ``forward_laplacian`` swaps the centred second difference for the
    forward-biased ``(u[m+2] - 2 u[m+1] + u[m]) / h²``; the last interior node,
    which has no ``m + 2`` neighbour, keeps the centred form.
    """
    _require_size(lv)
    h = _require_uniform(lv, "standard heat")
    t1 = _next_time(lv, k, t_next)
    x, u = lv.x, lv.u
    log_u = _log(u)
    lap = central_second_array(x, u)
    if forward_laplacian:
        lap = lap.copy()
        lap[:-1] = (u[3:] - 2.0 * u[2:-1] + u[1:-2]) / (h * h)
    u1 = np.empty_like(u)
    u1[1:-1] = u[1:-1] + k * (lap + u[1:-1] * log_u[1:-1])
    u1[0] = bc.value(x[0], t1)
    u1[-1] = bc.value(x[-1], t1)
    if np.any(u1 <= 0.0):
        raise DomainError("standard heat update produced u <= 0")
    residuals = (u1[1:-1] - u[1:-1]) / (t1 - lv.t) - lap - u[1:-1] * log_u[1:-1]
    return _finish(lv, t1, x, u1, residuals)


def step_heat_partial(lv: TimeLevel, k: float, bc: BoundaryPolicy, *, t_next: float | None = None) -> StepResult:
    """Invariant heat discretization with ``σ = 0``:
    ``ln u01 = e^τ ln u00 + e^τ (e^τ - 1) g² + τ J``.
    """
    _require_size(lv)
    _require_uniform(lv, "partially invariant heat")
    t1 = _next_time(lv, k, t_next)
    tau = t1 - lv.t
    e = math.exp(tau)
    x = lv.x
    log_u = _log(lv.u)
    g = central_first_array(x, log_u)
    J = central_second_array(x, log_u)
    log_u1 = np.empty_like(log_u)
    log_u1[1:-1] = e * log_u[1:-1] + e * (e - 1.0) * g * g + tau * J
    log_u1[0] = math.log(bc.value(x[0], t1))
    log_u1[-1] = math.log(bc.value(x[-1], t1))
    residuals = (log_u1[1:-1] - e * log_u[1:-1]) / tau + (e - e * e) / tau * g * g - J
    return _finish(lv, t1, x, np.exp(log_u1), residuals)


def step_heat_full(lv: TimeLevel, k: float, bc: BoundaryPolicy, *, t_next: float | None = None) -> StepResult:
    """Fully invariant heat scheme: nodes move by ``σ = 2 (1 - e^τ) g`` and
    ``ln u01 = e^τ ln u00 + e^τ (1 - e^τ) g² + τ J``.
    """
    _require_size(lv)
    t1 = _next_time(lv, k, t_next)
    tau = t1 - lv.t
    e = math.exp(tau)
    x = lv.x
    log_u = _log(lv.u)
    g = central_first_array(x, log_u)
    J = central_second_array(x, log_u)
    slope = np.empty_like(x)
    slope[1:-1] = g
    slope[0] = (log_u[1] - log_u[0]) / (x[1] - x[0])
    slope[-1] = (log_u[-1] - log_u[-2]) / (x[-1] - x[-2])
    sigma = 2.0 * (1.0 - e) * slope
    x1 = x + sigma
    log_u1 = np.empty_like(log_u)
    log_u1[1:-1] = e * log_u[1:-1] + e * (1.0 - e) * g * g + tau * J
    log_u1[0] = math.log(bc.value(x1[0], t1))
    log_u1[-1] = math.log(bc.value(x1[-1], t1))
    residuals = (
        (log_u1[1:-1] - e * log_u[1:-1]) / tau
        - sigma[1:-1] / tau * e * g
        + (e - e * e) / tau * g * g
        - J
    )
    return _finish(lv, t1, x1, np.exp(log_u1), residuals)


# --- spherical Burgers --------------------------------------------------------


def _burgers_euler(lv, k, bc, t_next, scheme):
    _require_size(lv)
    _require_uniform(lv, scheme)
    _require_positive_time(lv.t)
    t1 = _next_time(lv, k, t_next)
    tau = t1 - lv.t
    x, u, t = lv.x, lv.u, lv.t
    u_x = central_first_array(x, u)
    u_xx = central_second_array(x, u)
    rhs = u[1:-1] / t + u[1:-1] * u_x + u_xx
    u1 = np.empty_like(u)
    u1[1:-1] = u[1:-1] - tau * rhs
    u1[0] = bc.value(x[0], t1)
    u1[-1] = bc.value(x[-1], t1)
    residuals = (u1[1:-1] - u[1:-1]) / tau + rhs
    return _finish(lv, t1, x, u1, residuals)


def step_burgers_standard(lv: TimeLevel, k: float, bc: BoundaryPolicy, *, t_next: float | None = None) -> StepResult:
    """Forward Euler ``u01 = u00 - k (u00/t00 + u00 u_x + u_xx)``, centred in space."""
    return _burgers_euler(lv, k, bc, t_next, "standard Burgers")


def step_burgers_partial(lv: TimeLevel, k: float, bc: BoundaryPolicy, *, t_next: float | None = None) -> StepResult:
    """Invariant Burgers discretization with ``σ = 0``.

    On a fixed uniform mesh the update coincides with the standard one.
    """
    return _burgers_euler(lv, k, bc, t_next, "partially invariant Burgers")


def step_burgers_full(lv: TimeLevel, k: float, bc: BoundaryPolicy, *, t_next: float | None = None) -> StepResult:
    """Fully invariant Burgers scheme: ``x01 = x00 + u00 t00 ln(t01/t00)`` and
    ``u01 = u00 t00 / t01 - 2 τ u_xx``.
    """
    _require_size(lv)
    _require_positive_time(lv.t)
    t1 = _next_time(lv, k, t_next)
    tau = t1 - lv.t
    x, u, t = lv.x, lv.u, lv.t
    u_xx = central_second_array(x, u)
    x1 = x + u * t * math.log(t1 / t)
    u1 = np.empty_like(u)
    u1[1:-1] = u[1:-1] * t / t1 - 2.0 * tau * u_xx
    u1[0] = bc.value(x1[0], t1)
    u1[-1] = bc.value(x1[-1], t1)
    residuals = u1[1:-1] - u[1:-1] * t / t1 + 2.0 * tau * u_xx
    return _finish(lv, t1, x1, u1, residuals)


_STEPPERS = {
    (Model.HEAT_LOG, SchemeKind.STANDARD): step_heat_standard,
    (Model.HEAT_LOG, SchemeKind.PARTIALLY_INVARIANT): step_heat_partial,
    (Model.HEAT_LOG, SchemeKind.FULLY_INVARIANT): step_heat_full,
    (Model.SPHERICAL_BURGERS, SchemeKind.STANDARD): step_burgers_standard,
    (Model.SPHERICAL_BURGERS, SchemeKind.PARTIALLY_INVARIANT): step_burgers_partial,
    (Model.SPHERICAL_BURGERS, SchemeKind.FULLY_INVARIANT): step_burgers_full,
}


def step(model, kind, lv: TimeLevel, k: float, bc: BoundaryPolicy, **kwargs) -> StepResult:
    return _STEPPERS[Model.parse(model), SchemeKind.parse(kind)](lv, k, bc, **kwargs)


def step_count(t0: float, t_final: float, k: float) -> int:
    """Number of steps from ``t0`` to ``t_final``; the ratio must be integral within 1e-9."""
    if not k > 0.0:
        raise ConfigError(f"time step must be positive, got k = {k}")
    if t_final < t0:
        raise ConfigError(f"t_final = {t_final} precedes t0 = {t0}")
    ratio = (t_final - t0) / k
    steps = round(ratio)
    if abs(ratio - steps) > 1e-9:
        raise ConfigError(f"(t_final - t0) / k = {ratio} is not an integer")
    return int(steps)


def evolve(model, kind, initial: TimeLevel, k: float, t_final: float, bc: BoundaryPolicy, **kwargs) -> MeshHistory:
    """Step from ``initial`` to ``t_final``; level ``n`` sits at ``t0 + n k``.

    Errors raised inside a step get the failing level index attached.
    """
    stepper = _STEPPERS[Model.parse(model), SchemeKind.parse(kind)]
    steps = step_count(initial.t, t_final, k)
    levels = [initial]
    diagnostics = []
    lv = initial
    for n in range(steps):
        t_next = t_final if n + 1 == steps else initial.t + (n + 1) * k
        try:
            result = stepper(lv, k, bc, t_next=t_next, **kwargs)
        except SchemeError as exc:
            exc.level = lv.n + 1
            raise
        lv = result.next
        levels.append(lv)
        diagnostics.append(result.diagnostics)
    return MeshHistory(tuple(levels), tuple(diagnostics))


# --- residuals on a single stencil --------------------------------------------

_RECT_MESH = ("x10-x00-h", "x01-x00", "t10-t00", "t01-t00-k")

_LABELS = {
    (Model.HEAT_LOG, SchemeKind.STANDARD): ("E1",) + _RECT_MESH,
    (Model.HEAT_LOG, SchemeKind.PARTIALLY_INVARIANT): ("I-J",) + _RECT_MESH,
    (Model.HEAT_LOG, SchemeKind.FULLY_INVARIANT): ("I-J", "iota(x01)", "t10-t00", "t01-t00-k"),
    (Model.SPHERICAL_BURGERS, SchemeKind.STANDARD): ("E1",) + _RECT_MESH,
    (Model.SPHERICAL_BURGERS, SchemeKind.PARTIALLY_INVARIANT): ("t^1.5*E1",) + _RECT_MESH,
    (Model.SPHERICAL_BURGERS, SchemeKind.FULLY_INVARIANT): (
        "sqrt(t)*E1",
        "iota(x01)",
        "(t10-t00)/t00",
        "(t02-2t01+t00)/t00",
    ),
}


def residual_labels(model, kind) -> tuple[str, ...]:
    return _LABELS[Model.parse(model), SchemeKind.parse(kind)]


def _rect_mesh(st: Stencil, k: float, h: float | None) -> list[float]:
    if h is None:
        raise MisuseError("rectangular-mesh residuals need the spacing h")
    p00, p10, p01 = st[0, 0], st[1, 0], st[0, 1]
    return [p10.x - p00.x - h, p01.x - p00.x, p10.t - p00.t, p01.t - p00.t - k]


def _spatial_values(st: Stencil, attr="u"):
    xs = tuple(st[d, 0].x for d in (-1, 0, 1))
    fs = tuple(getattr(st[d, 0], attr) for d in (-1, 0, 1))
    return xs + fs


def scheme_residual(model, kind, st: Stencil, k: float, h: float | None = None) -> np.ndarray:
    """Residuals of a scheme's equations on ``st`` (offsets ``(-1,0), (0,0), (1,0), (0,1)``).

    The first entry is the discretized equation, the rest are mesh equations
    (see :func:`residual_labels`). Rectangular meshes need the spacing ``h``.
    Flat time is required of the spatial neighbours for every scheme except
    the standard ones, whose time-level mesh residual measures it instead.

    Invariant equations are returned in invariantized form: the heat ``I - J``
    already is; the Burgers equations are rescaled by the powers of ``t00``
    that the frame introduces (positive factors, so the zero sets agree with
    the coordinate equations).
    """
    model, kind = Model.parse(model), SchemeKind.parse(kind)
    st.require(SCHEME_OFFSETS)
    p00, p01 = st[0, 0], st[0, 1]

    if model is Model.HEAT_LOG:
        if kind is SchemeKind.STANDARD:
            if p00.u <= 0.0:
                raise DomainError(f"ln u undefined: u00 = {p00.u}")
            lap = central_second(*_spatial_values(st))
            e1 = (p01.u - p00.u) / k - lap - p00.u * math.log(p00.u)
            return np.array([e1] + _rect_mesh(st, k, h))
        inv = heat_invariants(st)
        e1 = inv.I_d - inv.J_d
        if kind is SchemeKind.PARTIALLY_INVARIANT:
            return np.array([e1] + _rect_mesh(st, k, h))
        return np.array([e1, inv.iota_x01, st[1, 0].t - p00.t, inv.tau - k])

    _require_positive_time(p00.t)
    if kind is SchemeKind.STANDARD:
        spatial = _spatial_values(st)
        e1 = (p01.u - p00.u) / k + p00.u / p00.t + p00.u * central_first(*spatial) + central_second(*spatial)
        return np.array([e1] + _rect_mesh(st, k, h))
    inv = burgers_invariants(st)
    if kind is SchemeKind.PARTIALLY_INVARIANT:
        return np.array([p00.t**1.5 * inv.residual_form] + _rect_mesh(st, k, h))
    tau = p01.t - p00.t
    e1 = p01.u - p00.u * p00.t / p01.t + 2.0 * tau * inv.u_xx_d
    out = [math.sqrt(p00.t) * e1, inv.iota_x01, (st[1, 0].t - p00.t) / p00.t]
    if (0, 2) in st:
        out.append((st[0, 2].t - 2.0 * p01.t + p00.t) / p00.t)
    return np.array(out)
