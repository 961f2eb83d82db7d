"""CSV export. Reals are written with 17 significant digits, so output is
byte-stable for identical inputs.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from invariant_schemes.harness.audit import AuditReport
from invariant_schemes.harness.experiments import ComparisonReport, ConvergenceRow, ErrorReport

SOLUTION_HEADER = ("m", "x", "t", "u_numeric", "u_exact", "abs_error")
MESH_HEADER = ("n", "m", "x", "t")
SUMMARY_HEADER = ("model", "scheme", "h", "k", "t_final", "max_abs_error", "l2_error", "steps")
AUDIT_HEADER = ("model", "scheme", "subgroup", "samples", "max_discrepancy", "pass")
CONVERGENCE_HEADER = ("h", "k", "max_abs_error", "order")


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.16e}"
    return str(value)


def write_csv(path: Path, header, rows) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([fmt(v) for v in row])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def _solution_rows(report: ErrorReport):
    for i in range(len(report.x)):
        yield (int(report.m[i]), report.x[i], report.t_final, report.u_numeric[i],
               report.u_exact[i], report.abs_error[i])


def emit_reports(report, out_dir) -> list[Path]:
    """Write the files for an :class:`ErrorReport`, :class:`ComparisonReport`,
    :class:`AuditReport` or a list of :class:`ConvergenceRow`.

    Returns:
        Paths written, in order.
    """
    out = Path(out_dir)
    if isinstance(report, ErrorReport):
        return [
            write_csv(out / "solution.csv", SOLUTION_HEADER, _solution_rows(report)),
            write_csv(out / "mesh.csv", MESH_HEADER, report.mesh_trajectory()),
            write_csv(out / "summary.csv", SUMMARY_HEADER, [report.summary_row()]),
        ]
    if isinstance(report, ComparisonReport):
        paths = []
        for kind, r in report.reports.items():
            paths.append(write_csv(out / f"solution_{kind.value}.csv", SOLUTION_HEADER, _solution_rows(r)))
            paths.append(write_csv(out / f"mesh_{kind.value}.csv", MESH_HEADER, r.mesh_trajectory()))
        paths.append(write_csv(out / "summary.csv", SUMMARY_HEADER, report.summary()))
        return paths
    if isinstance(report, AuditReport):
        witnesses = [
            {
                "model": r.model.value,
                "scheme": r.scheme.value,
                "subgroup": r.subgroup,
                "max_discrepancy": r.max_discrepancy,
                "group_parameters": list(r.witness_group),
                "stencil": {f"{k[0]},{k[1]}": list(v) for k, v in r.witness_stencil.items()},
            }
            for r in report.rows
        ]
        path = out / "audit_witnesses.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps({"seed": report.seed, "tol": report.tol, "rows": witnesses},
                                   indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return [write_csv(out / "audit.csv", AUDIT_HEADER, (r.csv_row() for r in report.rows)), path]
    if isinstance(report, (list, tuple)) and all(isinstance(r, ConvergenceRow) for r in report):
        rows = ((r.h, r.k, r.max_abs_error, r.order) for r in report)
        return [write_csv(out / "convergence.csv", CONVERGENCE_HEADER, rows)]
    raise TypeError(f"don't know how to emit {type(report).__name__}")


def read_summary(path) -> list[dict]:
    with Path(path).open(encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))
