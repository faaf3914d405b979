"""Tandem Stern-Gerlach simulator and amplitude-assignment feasibility prover."""

from .algebra import (
    Basis,
    ComplexAmplitude,
    SpinKet,
    basis_expand,
    equal_up_to_global_phase,
    inner_product,
    make_ket,
)
from .apparatus import Axis, SplitResult, SternGerlach, eigenbasis, split
from .engine import (
    Beam,
    CountsReport,
    RunReport,
    Source,
    Stage,
    apply_stage,
    run_pipeline,
    sample_shots,
)
from .errors import (
    EmptyPipelineError,
    InvalidAxisError,
    InvalidShotsError,
    InvalidToleranceError,
    NonFiniteAmplitudeError,
    NonUnitaryError,
    ParseError,
    SGLabError,
    UnsupportedGridError,
    ZeroVectorError,
)
from .prover import (
    AssignmentTriple,
    AssignmentVerification,
    ConsistencyReport,
    ConsistencyVerdict,
    ConstraintSet,
    TransferMatrix,
    canonical_assignment,
    check_consistency,
    enumerate_grid_unitaries,
    relative_phase_scan,
    search,
    verify_paper_assignment,
)
from .report import render_report
from .script import ExperimentScript, parse_script, render_script

__version__ = "0.1.0"

__all__ = [
    "Axis",
    "AssignmentTriple",
    "AssignmentVerification",
    "Basis",
    "Beam",
    "ComplexAmplitude",
    "ConsistencyReport",
    "ConsistencyVerdict",
    "ConstraintSet",
    "CountsReport",
    "EmptyPipelineError",
    "ExperimentScript",
    "InvalidAxisError",
    "InvalidShotsError",
    "InvalidToleranceError",
    "NonFiniteAmplitudeError",
    "NonUnitaryError",
    "ParseError",
    "RunReport",
    "SGLabError",
    "SpinKet",
    "SplitResult",
    "Source",
    "Stage",
    "SternGerlach",
    "TransferMatrix",
    "UnsupportedGridError",
    "ZeroVectorError",
    "apply_stage",
    "basis_expand",
    "canonical_assignment",
    "check_consistency",
    "eigenbasis",
    "enumerate_grid_unitaries",
    "equal_up_to_global_phase",
    "inner_product",
    "make_ket",
    "parse_script",
    "relative_phase_scan",
    "render_report",
    "render_script",
    "run_pipeline",
    "sample_shots",
    "search",
    "split",
    "verify_paper_assignment",
]
