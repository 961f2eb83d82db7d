"""
Multi-indexed mesh data model.

A mesh node ``z[m, n] = (x, t, u)`` carries its integer label ``(m, n)``:
``m`` runs along space, ``n`` along time. All nodes of one time level share
the same ``t`` (flat time), so a :class:`TimeLevel` stores a single time value
and two arrays. Moving-mesh schemes change ``x`` from level to level.

Stencils are small read-only mappings from offsets relative to the base node
``(0, 0)`` to :class:`Node` values.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from invariant_schemes.errors import DegenerateStencilError, IncompleteStencilError

#: Offsets used by every scheme: left, centre, right neighbours and the next level.
SCHEME_OFFSETS = ((-1, 0), (0, 0), (1, 0), (0, 1))
#: Offsets needed by the forward first-order derivatives.
FIRST_ORDER_OFFSETS = ((0, 0), (1, 0), (0, 1))
#: The triangle of offsets needed by the second-order Taylor derivatives.
SECOND_ORDER_OFFSETS = ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))


class MultiIndex(NamedTuple):
    m: int
    n: int


@dataclass(frozen=True)
class Node:
    """One mesh sample ``(x, t, u)`` with its multi-index."""

    index: MultiIndex
    x: float
    t: float
    u: float

    def __post_init__(self):
        object.__setattr__(self, "index", MultiIndex(*self.index))
        for name in ("x", "t", "u"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise ValueError(f"node {tuple(self.index)} has non-finite {name}={value}")
            object.__setattr__(self, name, value)

    @property
    def z(self) -> tuple[float, float, float]:
        return (self.x, self.t, self.u)

    def replace(self, x=None, t=None, u=None) -> Node:
        return Node(
            self.index,
            self.x if x is None else x,
            self.t if t is None else t,
            self.u if u is None else u,
        )


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TimeLevel:
    """All nodes at one discrete time.

    Attributes:
        n: time index.
        t: the common time of every node.
        x: node abscissae, ordered by the spatial index ``m``.
        u: dependent values at the nodes.
        m0: spatial index of the first node.
    """

    n: int
    t: float
    x: np.ndarray
    u: np.ndarray
    m0: int = 0

    def __post_init__(self):
        x = _frozen_array(self.x)
        u = _frozen_array(self.u)
        if x.ndim != 1 or x.shape != u.shape:
            raise ValueError(f"x and u must be 1-D arrays of equal length, got {x.shape} and {u.shape}")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(u)) and np.isfinite(self.t)):
            raise ValueError(f"time level {self.n} contains non-finite values")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "t", float(self.t))

    def __len__(self) -> int:
        return len(self.x)

    @property
    def nodes(self) -> tuple[Node, ...]:
        return tuple(self.node(i) for i in range(len(self)))

    def node(self, i: int) -> Node:
        """Node at array position ``i`` (not necessarily equal to ``m``)."""
        return Node(MultiIndex(self.m0 + i, self.n), self.x[i], self.t, self.u[i])

    @classmethod
    def from_nodes(cls, nodes: Iterable[Node], atol: float = 0.0) -> TimeLevel:
        nodes = list(nodes)
        if not nodes:
            raise ValueError("a time level needs at least one node")
        t0 = nodes[0].t
        ns = {p.index.n for p in nodes}
        if len(ns) != 1:
            raise ValueError(f"nodes belong to several time indices {sorted(ns)}")
        if any(abs(p.t - t0) > atol for p in nodes):
            raise ValueError("nodes of one time level must share the same t")
        ms = [p.index.m for p in nodes]
        if ms != list(range(ms[0], ms[0] + len(ms))):
            raise ValueError("nodes must have consecutive ascending spatial indices")
        return cls(ns.pop(), t0, [p.x for p in nodes], [p.u for p in nodes], m0=ms[0])

    def with_values(self, n=None, t=None, x=None, u=None) -> TimeLevel:
        return TimeLevel(
            self.n if n is None else n,
            self.t if t is None else t,
            self.x if x is None else x,
            self.u if u is None else u,
            self.m0,
        )

    def is_uniform(self, rtol: float = 1e-9) -> bool:
        dx = np.diff(self.x)
        if len(dx) == 0:
            return True
        h = (self.x[-1] - self.x[0]) / len(dx)
        return bool(np.all(np.abs(dx - h) <= rtol * abs(h)))


@dataclass(frozen=True)
class MeshHistory:
    """The evolving mesh: one :class:`TimeLevel` per time index."""

    levels: tuple[TimeLevel, ...]
    diagnostics: tuple = field(default=(), compare=False)

    def __post_init__(self):
        levels = tuple(self.levels)
        if not levels:
            raise ValueError("a mesh history needs at least one level")
        times = np.array([lv.t for lv in levels])
        if np.any(np.diff(times) <= 0):
            raise ValueError("level times must be strictly increasing")
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "diagnostics", tuple(self.diagnostics))

    def __len__(self) -> int:
        return len(self.levels)

    def __getitem__(self, i):
        return self.levels[i]

    def __iter__(self) -> Iterator[TimeLevel]:
        return iter(self.levels)

    @property
    def initial(self) -> TimeLevel:
        return self.levels[0]

    @property
    def final(self) -> TimeLevel:
        return self.levels[-1]

    @property
    def steps(self) -> int:
        return len(self.levels) - 1


class Stencil(Mapping):
    """Read-only map from offsets ``(dm, dn)`` to nodes.

    The nodes must be pairwise distinct in ``(x, t)``; otherwise no finite
    difference on them is defined.
    """

    __slots__ = ("_nodes",)

    def __init__(self, nodes: Mapping):
        items = {MultiIndex(*k): v for k, v in nodes.items()}
        seen = {}
        for key, p in items.items():
            xt = (p.x, p.t)
            if xt in seen:
                raise DegenerateStencilError(
                    f"stencil nodes {tuple(seen[xt])} and {tuple(key)} share (x, t) = {xt}"
                )
            seen[xt] = key
        self._nodes = items

    @classmethod
    def from_points(cls, points: Mapping) -> Stencil:
        """Build from ``{(dm, dn): (x, t, u)}``."""
        return cls({k: Node(MultiIndex(*k), *v) for k, v in points.items()})

    def __getitem__(self, key) -> Node:
        return self._nodes[MultiIndex(*key)]

    def __iter__(self):
        return iter(self._nodes)

    def __len__(self) -> int:
        return len(self._nodes)

    def __repr__(self) -> str:
        body = ", ".join(f"{tuple(k)}: {p.z}" for k, p in self._nodes.items())
        return f"Stencil({{{body}}})"

    def require(self, offsets: Iterable) -> None:
        missing = [tuple(o) for o in offsets if MultiIndex(*o) not in self._nodes]
        if missing:
            raise IncompleteStencilError(missing)

    def map(self, fn: Callable[[Node], Node]) -> Stencil:
        """Apply a point transformation to every node, keeping the offsets."""
        return Stencil({k: fn(p) for k, p in self._nodes.items()})

    def shifted(self, dx: float = 0.0, dt: float = 0.0, du: float = 0.0) -> Stencil:
        return self.map(lambda p: p.replace(x=p.x + dx, t=p.t + dt, u=p.u + du))

    def points(self) -> dict:
        """Plain ``{offset: (x, t, u)}`` form, handy for reports."""
        return {tuple(k): p.z for k, p in self._nodes.items()}


def forward_diffs(st: Stencil):
    """Forward differences ``Δz = z[1,0] - z[0,0]`` and ``δz = z[0,1] - z[0,0]``.

    Returns:
        Two ``(x, t, u)`` triples.
    """
    st.require(FIRST_ORDER_OFFSETS)
    z00, z10, z01 = st[0, 0], st[1, 0], st[0, 1]
    big = (z10.x - z00.x, z10.t - z00.t, z10.u - z00.u)
    small = (z01.x - z00.x, z01.t - z00.t, z01.u - z00.u)
    return big, small


def validate_level(lv: TimeLevel, eps: float | None = None) -> list[tuple[int, int]]:
    """Check that node abscissae are strictly increasing.

    Flat time is structural (one ``t`` per level), so only the spatial ordering
    can fail.

    Args:
        lv: level to check.
        eps: minimum admissible spacing; defaults to ``1e-12 * (x_max - x_min)``.

    Returns:
        Offending adjacent ``(m, m + 1)`` pairs. An empty list means the level is valid.
    """
    x = lv.x
    if len(x) < 2:
        return []
    if eps is None:
        eps = 1e-12 * float(np.max(x) - np.min(x))
    bad = np.nonzero(np.diff(x) <= eps)[0]
    return [(lv.m0 + int(i), lv.m0 + int(i) + 1) for i in bad]


def level_stencil(
    level: TimeLevel,
    i: int,
    next_level: TimeLevel | None = None,
    next2_level: TimeLevel | None = None,
) -> Stencil:
    """Gather the scheme stencil around array position ``i`` of ``level``.

    Includes ``(-1, 0), (0, 0), (1, 0)`` from ``level`` and, if given, ``(0, 1)``
    and ``(0, 2)`` from the following levels at the same position.
    """
    if not 1 <= i <= len(level) - 2:
        raise IncompleteStencilError([(-1, 0)] if i < 1 else [(1, 0)])
    nodes = {(d, 0): level.node(i + d) for d in (-1, 0, 1)}
    for dn, lv in ((1, next_level), (2, next2_level)):
        if lv is not None:
            nodes[(0, dn)] = lv.node(i)
    return Stencil(nodes)
