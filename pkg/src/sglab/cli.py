"""Command-line interface: run scripts, prove feasibility, verify the canonical assignment."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .engine import run_pipeline, sample_shots
from .errors import ParseError, SGLabError
from .prover import ConstraintSet, search, verify_paper_assignment
from .report import FORMATS, render_report
from .script import parse_script

INTENSITY_TOL = 1e-12

_CANONICAL_SCRIPTS = (
    ("z+ beam through an x apparatus", "source pure z +\nsg x\ndetect\n"),
    ("z+ beam through a y apparatus", "source pure z +\nsg y\ndetect\n"),
    ("x+ beam through a y apparatus", "source pure x +\nsg y\ndetect\n"),
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sglab",
        description="Tandem Stern-Gerlach simulator and amplitude-assignment prover.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment script")
    run.add_argument("file", help="path to the script file")
    run.add_argument("--format", choices=FORMATS, default="table")
    run.add_argument("--shots", type=int, help="sample this many particles instead of exact intensities")
    run.add_argument("--seed", type=int, help="stream seed for sampling (default 0)")
    run.add_argument("--backend", choices=("numba", "numpy"), help="compute backend override")
    run.set_defaults(func=_cmd_run)

    prove = sub.add_parser("prove", help="search amplitude assignments on a phase grid")
    prove.add_argument("--field", choices=("real", "complex"), required=True)
    prove.add_argument(
        "--grid",
        type=int,
        choices=(2, 4, 8),
        help="phase grid (default: 2 for real, 8 for complex)",
    )
    prove.add_argument("--format", choices=FORMATS, default="table")
    prove.add_argument("--backend", choices=("numba", "numpy"), help="compute backend override")
    prove.set_defaults(func=_cmd_prove)

    verify = sub.add_parser(
        "verify-paper",
        help="check the canonical complex assignment and the three tandem experiments",
    )
    verify.set_defaults(func=_cmd_verify)
    return parser


def _cmd_run(args: argparse.Namespace) -> int:
    text = Path(args.file).read_text(encoding="utf-8")
    script = parse_script(text)
    shots = args.shots if args.shots is not None else script.shots
    seed = args.seed if args.seed is not None else script.seed
    if shots is None:
        if args.seed is not None:
            raise SGLabError("--seed needs --shots or a 'detect shots' clause")
        report = run_pipeline(script.source, script.stages)
    else:
        report = sample_shots(
            script.source,
            script.stages,
            shots,
            seed if seed is not None else 0,
            backend=args.backend,
        )
    sys.stdout.write(render_report(report, args.format))
    return 0


def _cmd_prove(args: argparse.Namespace) -> int:
    grid = args.grid if args.grid is not None else (2 if args.field == "real" else 8)
    verdict = search(ConstraintSet(args.field, grid), backend=args.backend)
    sys.stdout.write(render_report(verdict, args.format))
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    verification = verify_paper_assignment()
    sys.stdout.write(render_report(verification, "table"))
    scripts_ok = True
    for title, text in _CANONICAL_SCRIPTS:
        script = parse_script(text)
        report = run_pipeline(script.source, script.stages)
        det = report.detector
        good = (
            abs(det.plus - 0.5) <= INTENSITY_TOL
            and abs(det.minus - 0.5) <= INTENSITY_TOL
        )
        scripts_ok &= good
        sys.stdout.write(
            f"{'PASS' if good else 'FAIL'}  {title + ':':<40}  "
            f"detector {det.plus:.6f} / {det.minus:.6f}\n"
        )
    if not verification.passed:
        return 3
    if not scripts_ok:
        return 1
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (SGLabError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
