"""
Finite difference derivatives on arbitrary meshes.

First- and second-order derivatives come from truncated Taylor expansions
along the forward differences of the multi-index: the expansions form a small
linear system in the unknown partial derivatives, solved here by Gaussian
elimination with partial pivoting. The centred one-dimensional formulas used by
the schemes live at the bottom of the module, in scalar and array form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from invariant_schemes.errors import DegenerateStencilError
from invariant_schemes.grid import FIRST_ORDER_OFFSETS, SECOND_ORDER_OFFSETS, Stencil

#: |det A| below this fraction of the product of row norms counts as singular.
DEGENERACY_RTOL = 1e-10


def solve_pivoted(a, b):
    """Solve ``a @ x = b`` by Gaussian elimination with partial pivoting.

    Returns:
        ``(x, det)``, where ``det`` is the determinant of ``a`` as a by-product
        of the elimination.
    """
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    n = len(b)
    if a.shape != (n, n):
        raise ValueError(f"matrix shape {a.shape} does not match right-hand side of length {n}")
    det = 1.0
    for col in range(n):
        piv = col + int(np.argmax(np.abs(a[col:, col])))
        if a[piv, col] == 0.0:
            return np.full(n, np.nan), 0.0
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            b[[col, piv]] = b[[piv, col]]
            det = -det
        det *= a[col, col]
        for row in range(col + 1, n):
            factor = a[row, col] / a[col, col]
            if factor != 0.0:
                a[row, col:] -= factor * a[col, col:]
                b[row] -= factor * b[col]
    x = np.empty(n)
    # nearly singular input may overflow here; callers judge it by ``det``
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for row in range(n - 1, -1, -1):
            x[row] = (b[row] - a[row, row + 1 :] @ x[row + 1 :]) / a[row, row]
    return x, det


@dataclass(frozen=True)
class TaylorSystem:
    """Linear system ``matrix @ derivatives = rhs`` from Taylor expansions."""

    matrix: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        m = np.atleast_2d(np.asarray(self.matrix, dtype=float))
        r = np.atleast_1d(np.asarray(self.rhs, dtype=float))
        if m.shape != (len(r), len(r)):
            raise ValueError(f"inconsistent Taylor system: matrix {m.shape}, rhs {r.shape}")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "rhs", r)

    @property
    def conditioning(self) -> float:
        """``|det| / prod(row norms)``: 1 for orthogonal rows, 0 when singular."""
        norms = np.prod(np.linalg.norm(self.matrix, axis=1))
        if norms == 0.0:
            return 0.0
        _, det = solve_pivoted(self.matrix, self.rhs)
        return abs(det) / norms

    def solve(self, what: str = "stencil") -> np.ndarray:
        norms = np.prod(np.linalg.norm(self.matrix, axis=1))
        x, det = solve_pivoted(self.matrix, self.rhs)
        if norms == 0.0 or abs(det) <= DEGENERACY_RTOL * norms:
            cond = 0.0 if norms == 0.0 else abs(det) / norms
            raise DegenerateStencilError(f"degenerate {what}: Taylor matrix is singular", cond)
        return x


@dataclass(frozen=True)
class FirstDerivs2D:
    u_x: float
    u_t: float


@dataclass(frozen=True)
class SecondDerivs2D:
    u_xx: float
    u_xt: float
    u_tt: float


def first_derivs_general(dx, du) -> np.ndarray:
    """First-order derivatives in ``p`` independent variables.

    Args:
        dx: ``p x p`` matrix with ``dx[i][j]`` the forward difference of the
            ``j``-th independent variable along the ``i``-th index direction.
        du: the ``p`` forward differences of ``u``.

    Returns:
        Approximations of ``(u_{x^1}, ..., u_{x^p})``.
    """
    return TaylorSystem(dx, du).solve("first-order stencil")


def first_derivs_2d(st: Stencil) -> FirstDerivs2D:
    """Closed-form 2x2 solve for ``u_x`` and ``u_t`` from ``Δz`` and ``δz``."""
    st.require(FIRST_ORDER_OFFSETS)
    z00, z10, z01 = st[0, 0], st[1, 0], st[0, 1]
    Dx, Dt, Du = z10.x - z00.x, z10.t - z00.t, z10.u - z00.u
    dx, dt, du = z01.x - z00.x, z01.t - z00.t, z01.u - z00.u
    det = Dx * dt - dx * Dt
    scale = np.hypot(Dx, Dt) * np.hypot(dx, dt)
    if scale == 0.0 or abs(det) <= DEGENERACY_RTOL * scale:
        raise DegenerateStencilError(
            "degenerate first-order stencil: Δ and δ directions are parallel",
            0.0 if scale == 0.0 else abs(det) / scale,
        )
    return FirstDerivs2D(u_x=(dt * Du - Dt * du) / det, u_t=(Dx * du - dx * Du) / det)


def second_order_system(st: Stencil, first: FirstDerivs2D | None = None) -> TaylorSystem:
    """Assemble the 3x3 system ``H @ (u_xx, u_xt, u_tt) = V`` on the index triangle.

    Rows correspond to the second differences ``Δ²``, ``δΔ`` and ``δ²``. The
    first derivatives in ``V`` default to :func:`first_derivs_2d`.
    """
    st.require(SECOND_ORDER_OFFSETS)
    if first is None:
        first = first_derivs_2d(st)
    z = {k: st[k] for k in SECOND_ORDER_OFFSETS}
    x00, t00, u00 = z[0, 0].z

    def rel(key):
        p = z[key]
        return p.x - x00, p.t - t00, p.u - u00

    X10, T10, U10 = rel((1, 0))
    X01, T01, U01 = rel((0, 1))
    X20, T20, U20 = rel((2, 0))
    X11, T11, U11 = rel((1, 1))
    X02, T02, U02 = rel((0, 2))

    # second differences of each coordinate along the three index directions
    d2 = np.array(
        [
            [X20 - 2 * X10, T20 - 2 * T10, U20 - 2 * U10],
            [X11 - X10 - X01, T11 - T10 - T01, U11 - U10 - U01],
            [X02 - 2 * X01, T02 - 2 * T01, U02 - 2 * U01],
        ]
    )
    H = np.array(
        [
            [(X20**2 - 2 * X10**2) / 2, X20 * T20 - 2 * X10 * T10, (T20**2 - 2 * T10**2) / 2],
            [
                (X11**2 - X10**2 - X01**2) / 2,
                X11 * T11 - X10 * T10 - X01 * T01,
                (T11**2 - T10**2 - T01**2) / 2,
            ],
            [(X02**2 - 2 * X01**2) / 2, X02 * T02 - 2 * X01 * T01, (T02**2 - 2 * T01**2) / 2],
        ]
    )
    V = d2[:, 2] - d2[:, 0] * first.u_x - d2[:, 1] * first.u_t
    return TaylorSystem(H, V)


def second_derivs_2d(st: Stencil) -> SecondDerivs2D:
    """Second-order derivatives ``H⁻¹ V`` on the triangle of offsets
    ``(0,0), (1,0), (0,1), (2,0), (1,1), (0,2)``.

    Exact on quadratics only where the stencil's second coordinate differences
    vanish (for instance any affine image of the index lattice); elsewhere the
    first-order error of the substituted ``u_x``, ``u_t`` leaks in at O(h).
    """
    u_xx, u_xt, u_tt = second_order_system(st).solve("second-order stencil")
    return SecondDerivs2D(float(u_xx), float(u_xt), float(u_tt))


def central_first(xm: float, x0: float, xp: float, fm: float, f0: float, fp: float) -> float:
    """Centred first difference ``(f₊ - f₋) / (x₊ - x₋)``; ``x0``, ``f0`` are unused."""
    if xp == xm:
        raise DegenerateStencilError("central difference with coincident outer abscissae")
    return (fp - fm) / (xp - xm)


def central_second(xm: float, x0: float, xp: float, fm: float, f0: float, fp: float) -> float:
    """Three-point second difference on a nonuniform mesh, exact on quadratics."""
    if not xm < x0 < xp:
        raise DegenerateStencilError(f"second difference needs x- < x0 < x+, got {(xm, x0, xp)}")
    return 2.0 / (xp - xm) * ((fp - f0) / (xp - x0) - (f0 - fm) / (x0 - xm))


def central_first_array(x: np.ndarray, f: np.ndarray) -> np.ndarray:
    """:func:`central_first` at every interior node of a 1-D mesh."""
    return (f[2:] - f[:-2]) / (x[2:] - x[:-2])


def central_second_array(x: np.ndarray, f: np.ndarray) -> np.ndarray:
    """:func:`central_second` at every interior node of a 1-D mesh."""
    hl = x[1:-1] - x[:-2]
    hr = x[2:] - x[1:-1]
    return 2.0 / (hl + hr) * ((f[2:] - f[1:-1]) / hr - (f[1:-1] - f[:-2]) / hl)
