"""Experiment runner: configs, error reports, invariance audit, CSV export and CLI."""

from invariant_schemes.harness.audit import invariance_audit, mesh_incompatibility
from invariant_schemes.harness.config import ExperimentConfig, load_config
from invariant_schemes.harness.experiments import (
    ComparisonReport,
    ErrorReport,
    compare,
    convergence_study,
    run_experiment,
)
from invariant_schemes.harness.reports import emit_reports

__all__ = [
    "ComparisonReport",
    "ErrorReport",
    "ExperimentConfig",
    "compare",
    "convergence_study",
    "emit_reports",
    "invariance_audit",
    "load_config",
    "mesh_incompatibility",
    "run_experiment",
]
