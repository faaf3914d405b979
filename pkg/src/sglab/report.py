"""Report rendering: fixed-width tables and byte-stable JSON.

JSON key order is fixed by construction and floats render via repr, so
identical inputs always produce identical bytes.
"""

from __future__ import annotations

import json

from .engine import CountsReport, RunReport, Source
from .prover import AssignmentVerification, ConsistencyVerdict, TransferMatrix

FORMATS = ("table", "json")


def _fmt_complex(value: complex) -> str:
    return f"{value.real:+.6f}{value.imag:+.6f}i"


def _fmt_state(state) -> str:
    return f"[{_fmt_complex(state.plus)}, {_fmt_complex(state.minus)}]"


def _source_text(source: Source) -> str:
    if source.kind == "unpolarized":
        return "unpolarized"
    if source.axis is not None:
        return f"pure {source.axis.label} {source.sign}"
    return f"pure {_fmt_state(source.state)}"


def _ket_quad(state) -> list[float]:
    return [state.plus.real, state.plus.imag, state.minus.real, state.minus.imag]


def _dump(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _run_json(report: RunReport) -> str:
    doc = {
        "stages": [
            {
                "axis": record.axis.label,
                "branches": [
                    {
                        "sign": branch.sign,
                        "intensity": branch.intensity,
                        "state": _ket_quad(branch.state),
                    }
                    for branch in (record.plus, record.minus)
                ],
            }
            for record in report.stages
        ],
        "detector": {
            "axis": report.detector.axis.label,
            "plus": report.detector.plus,
            "minus": report.detector.minus,
        },
    }
    return _dump(doc)


def _run_table(report: RunReport) -> str:
    lines = [f"source    {_source_text(report.source)}"]
    lines.append(f"{'stage':>5}  {'axis':<12}  sign  {'intensity':>9}  state")
    for number, record in enumerate(report.stages, start=1):
        for branch in (record.plus, record.minus):
            note = "  (blocked)" if branch.blocked else ""
            lines.append(
                f"{number:>5}  {record.axis.label:<12}  {branch.sign:<4}  "
                f"{branch.intensity:>9.6f}  {_fmt_state(branch.state)}{note}"
            )
    det = report.detector
    lines.append(
        f"detector  axis={det.axis.label}  plus={det.plus:.6f}  minus={det.minus:.6f}"
    )
    return "\n".join(lines) + "\n"


def _counts_json(report: CountsReport) -> str:
    doc = {
        "shots": report.shots,
        "seed": report.seed,
        "detector": {
            "axis": report.axis.label,
            "plus": report.plus,
            "minus": report.minus,
            "absorbed": report.absorbed,
        },
    }
    return _dump(doc)


def _counts_table(report: CountsReport) -> str:
    lines = [
        f"shots     {report.shots}",
        f"seed      {report.seed}",
        f"detector  axis={report.axis.label}",
        f"plus      {report.plus}",
        f"minus     {report.minus}",
        f"absorbed  {report.absorbed}",
    ]
    return "\n".join(lines) + "\n"


def _matrix_json(matrix: TransferMatrix) -> dict:
    steps = matrix.phase_steps()
    return {
        "entries": [[[e.real, e.imag] for e in row] for row in matrix.entries],
        "phase_steps_pi_4": list(steps) if steps is not None else None,
    }


def _matrix_text(matrix: TransferMatrix) -> str:
    rows = "; ".join(
        ", ".join(_fmt_complex(e) for e in row) for row in matrix.entries
    )
    steps = matrix.phase_steps()
    suffix = f"  pi/4 steps {tuple(steps)}" if steps is not None else ""
    return f"[{rows}]{suffix}"


def _verdict_json(verdict: ConsistencyVerdict) -> str:
    witness = None
    if verdict.witness is not None:
        witness = {
            "z_in_x": _matrix_json(verdict.witness.z_in_x),
            "z_in_y": _matrix_json(verdict.witness.z_in_y),
            "x_in_y": _matrix_json(verdict.witness.x_in_y),
        }
    doc = {
        "feasible": verdict.feasible,
        "field": verdict.field,
        "grid": verdict.grid,
        "candidates_per_slot": verdict.candidates_per_slot,
        "search_size": verdict.search_size,
        "witness_count": verdict.witness_count,
        "witness": witness,
        "real_class": list(verdict.witness_real_class)
        if verdict.witness_real_class is not None
        else None,
        "violated": verdict.violated,
    }
    return _dump(doc)


def _verdict_table(verdict: ConsistencyVerdict) -> str:
    lines = [
        f"field            {verdict.field}",
        f"grid             {verdict.grid}",
        f"candidates/slot  {verdict.candidates_per_slot}",
        f"search size      {verdict.search_size}",
        f"feasible         {'yes' if verdict.feasible else 'no'}",
        f"witness count    {verdict.witness_count}",
    ]
    if verdict.witness is not None:
        lines.append(f"witness z_in_x   {_matrix_text(verdict.witness.z_in_x)}")
        lines.append(f"witness z_in_y   {_matrix_text(verdict.witness.z_in_y)}")
        lines.append(f"witness x_in_y   {_matrix_text(verdict.witness.x_in_y)}")
        real = ", ".join(
            name if flag else f"{name} (complex)"
            for name, flag in zip(
                ("z_in_x", "z_in_y", "x_in_y"), verdict.witness_real_class
            )
        )
        lines.append(f"real-class slots {real}")
    if verdict.violated is not None:
        lines.append(f"violated         {verdict.violated}")
    return "\n".join(lines) + "\n"


def _verification_json(verification: AssignmentVerification) -> str:
    doc = {
        "passed": verification.passed,
        "checks": [
            {"name": check.name, "passed": check.passed, "detail": check.detail}
            for check in verification.checks
        ],
    }
    return _dump(doc)


def _verification_table(verification: AssignmentVerification) -> str:
    lines = [
        f"{'PASS' if check.passed else 'FAIL'}  {check.name:<40}  {check.detail}"
        for check in verification.checks
    ]
    lines.append(f"overall: {'PASS' if verification.passed else 'FAIL'}")
    return "\n".join(lines) + "\n"


def render_report(report, format: str = "table") -> str:
    """Render any report value as a fixed-width table or stable JSON."""
    if format not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {format!r}")
    table = format == "table"
    if isinstance(report, RunReport):
        return _run_table(report) if table else _run_json(report)
    if isinstance(report, CountsReport):
        return _counts_table(report) if table else _counts_json(report)
    if isinstance(report, ConsistencyVerdict):
        return _verdict_table(report) if table else _verdict_json(report)
    if isinstance(report, AssignmentVerification):
        return _verification_table(report) if table else _verification_json(report)
    raise ValueError(f"cannot render a report of type {type(report).__name__}")
