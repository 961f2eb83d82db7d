"""Running schemes against exact solutions and measuring the error."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from invariant_schemes.errors import ConfigError
from invariant_schemes.grid import MeshHistory
from invariant_schemes.harness.config import ExperimentConfig
from invariant_schemes.models import Model, SchemeKind
from invariant_schemes.schemes import evolve
from invariant_schemes.solutions import initial_level

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ErrorReport:
    """Errors of one run, measured at the run's own final-level nodes."""

    model: Model
    scheme: SchemeKind
    h: float
    k: float
    t_final: float
    m: np.ndarray
    x: np.ndarray
    u_numeric: np.ndarray
    u_exact: np.ndarray
    abs_error: np.ndarray
    history: MeshHistory

    @property
    def max_abs_error(self) -> float:
        return float(np.max(self.abs_error))

    @property
    def l2_error(self) -> float:
        """Root mean square of the nodal errors."""
        return float(np.sqrt(np.mean(np.square(self.abs_error))))

    @property
    def steps(self) -> int:
        return self.history.steps

    def mesh_trajectory(self):
        """Yield ``(n, m, x, t)`` for every node of every level."""
        for lv in self.history:
            for i, x in enumerate(lv.x):
                yield lv.n, lv.m0 + i, x, lv.t

    def summary_row(self) -> tuple:
        return (self.model.value, self.scheme.value, self.h, self.k, self.t_final,
                self.max_abs_error, self.l2_error, self.steps)


@dataclass(frozen=True)
class ComparisonReport:
    reports: dict  # SchemeKind -> ErrorReport, in run order

    def summary(self) -> list[tuple]:
        return [r.summary_row() for r in self.reports.values()]

    def ordering(self, norm: str = "max") -> list[SchemeKind]:
        """Schemes sorted from most to least accurate in the chosen norm."""
        key = (lambda r: r.max_abs_error) if norm == "max" else (lambda r: r.l2_error)
        return [r.scheme for r in sorted(self.reports.values(), key=key)]

    def __getitem__(self, kind) -> ErrorReport:
        return self.reports[SchemeKind.parse(kind)]


def run_experiment(cfg: ExperimentConfig, kind=None, **scheme_options) -> ErrorReport:
    """Evolve one scheme from exact initial data and compare with the exact solution.

    ``kind`` defaults to the first scheme in ``cfg.schemes``.
    """
    kind = SchemeKind.parse(kind if kind is not None else cfg.schemes[0])
    sol = cfg.solution()
    initial = initial_level(cfg.model, sol, cfg.x_min, cfg.x_max, cfg.h, cfg.t0)
    log.info("running %s/%s: %d nodes, %d steps", cfg.model.value, kind.value, len(initial), cfg.steps)
    history = evolve(cfg.model, kind, initial, cfg.k, cfg.t_final, cfg.boundary_policy(), **scheme_options)
    final = history.final
    exact = np.asarray(sol(final.x, final.t), dtype=float)
    return ErrorReport(
        model=cfg.model,
        scheme=kind,
        h=cfg.h,
        k=cfg.k,
        t_final=final.t,
        m=final.m0 + np.arange(len(final)),
        x=final.x,
        u_numeric=final.u,
        u_exact=exact,
        abs_error=np.abs(final.u - exact),
        history=history,
    )


def compare(cfg: ExperimentConfig) -> ComparisonReport:
    """Run every scheme in ``cfg.schemes`` on the same problem."""
    return ComparisonReport({SchemeKind.parse(kind): run_experiment(cfg, kind) for kind in cfg.schemes})


@dataclass(frozen=True)
class ConvergenceRow:
    h: float
    k: float
    max_abs_error: float
    order: float  # log2 of the error ratio to the previous row; nan on the first row


def convergence_study(cfg: ExperimentConfig, refinements: int, kind=None, vary: str | None = None) -> list[ConvergenceRow]:
    """Halve ``h`` (heat default) or ``k`` (Burgers default) ``refinements - 1`` times.

    Returns one row per resolution with the observed order
    ``log2(err_prev / err)``.
    """
    if refinements < 2:
        raise ConfigError(f"a convergence study needs at least 2 refinements, got {refinements}")
    if vary is None:
        vary = "h" if cfg.model is Model.HEAT_LOG else "k"
    if vary not in ("h", "k"):
        raise ConfigError(f"can only refine 'h' or 'k', not {vary!r}")
    rows = []
    prev = None
    for level in range(refinements):
        scale = 0.5**level
        sub = cfg.replace(**{vary: getattr(cfg, vary) * scale}).validate()
        err = run_experiment(sub, kind).max_abs_error
        order = math.log2(prev / err) if prev is not None and err > 0.0 and prev > 0.0 else math.nan
        rows.append(ConvergenceRow(sub.h, sub.k, err, order))
        prev = err
    return rows
