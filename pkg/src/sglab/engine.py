"""Exact intensity propagation and seeded per-particle sampling for SG pipelines.

Exact mode tracks branch intensities in double precision through every
stage; collapse makes same-sign outputs classical, so each stage emits at
most one beam per sign. Sampling mode walks individual particles through
the same Born probabilities with a counter-based seeded stream and never
mixes with exact mode in one report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .algebra import SpinKet, make_ket
from .apparatus import Axis, SternGerlach, split
from .errors import EmptyPipelineError, InvalidShotsError

INTENSITY_TOL = 1e-12

KEEP_BOTH = "keep_both"
KEEP_PLUS = "keep_plus"
KEEP_MINUS = "keep_minus"
SELECTIONS = (KEEP_BOTH, KEEP_PLUS, KEEP_MINUS)

_SEL_CODE = {KEEP_BOTH: 0, KEEP_PLUS: 1, KEEP_MINUS: 2}


@dataclass(frozen=True)
class Beam:
    """A classical beam: a collapsed state carrying a relative intensity."""

    state: SpinKet
    intensity: float

    def __post_init__(self) -> None:
        value = float(self.intensity)
        if not math.isfinite(value) or value < 0.0:
            raise ValueError(f"intensity must be finite and nonnegative, got {self.intensity!r}")
        object.__setattr__(self, "intensity", value)


@dataclass(frozen=True)
class Source:
    """Beam source: a pure state or the unpolarized half/half mixture.

    axis and sign keep the surface form of sources written as
    "pure <axis> <sign>" so scripts can be rendered back faithfully.
    """

    kind: str
    state: SpinKet | None = None
    axis: Axis | None = None
    sign: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("pure", "unpolarized"):
            raise ValueError(f"source kind must be 'pure' or 'unpolarized', got {self.kind!r}")
        if self.kind == "pure" and self.state is None:
            raise ValueError("pure source requires a state")
        if self.kind == "unpolarized" and self.state is not None:
            raise ValueError("unpolarized source carries no state")


@dataclass(frozen=True)
class Stage:
    """One apparatus pass: measure along an axis, then keep the selected branches."""

    axis: Axis
    selection: str = KEEP_BOTH

    def __post_init__(self) -> None:
        if self.selection not in SELECTIONS:
            raise ValueError(f"selection must be one of {SELECTIONS}, got {self.selection!r}")


@dataclass(frozen=True)
class BranchRecord:
    """One output branch of a stage: emitted intensity before any blocking."""

    sign: str
    intensity: float
    state: SpinKet
    blocked: bool


@dataclass(frozen=True)
class StageRecord:
    axis: Axis
    plus: BranchRecord
    minus: BranchRecord


@dataclass(frozen=True)
class DetectorReading:
    """Intensities that leave the final stage after its selection."""

    axis: Axis
    plus: float
    minus: float


@dataclass(frozen=True)
class RunReport:
    source: Source
    stages: tuple[StageRecord, ...]
    detector: DetectorReading


@dataclass(frozen=True)
class CountsReport:
    """Sampling outcome: detector bin counts plus particles lost to blockers."""

    axis: Axis
    shots: int
    seed: int
    plus: int
    minus: int
    absorbed: int


_Z_PLUS = make_ket(1.0, 0.0)
_Z_MINUS = make_ket(0.0, 1.0)


def _initial_beams(source: Source) -> list[Beam]:
    if source.kind == "pure":
        return [Beam(source.state, 1.0)]
    return [Beam(_Z_PLUS, 0.5), Beam(_Z_MINUS, 0.5)]


def _stage_totals(beams: Iterable[Beam], sg: SternGerlach) -> tuple[float, float]:
    plus_total = 0.0
    minus_total = 0.0
    for beam in beams:
        result = split(beam.state, sg)
        plus_total += beam.intensity * result.p_plus
        minus_total += beam.intensity * result.p_minus
    return plus_total, minus_total


def apply_stage(beams: Sequence[Beam], stage: Stage) -> list[Beam]:
    """Split every beam at the stage and apply its branch selection.

    Outputs collapse onto the stage eigenkets, so same-sign branches merge
    into a single classical beam. Blocked branches are dropped; surviving
    zero-intensity branches are kept.
    """
    sg = SternGerlach.along(stage.axis)
    plus_total, minus_total = _stage_totals(beams, sg)
    out: list[Beam] = []
    if stage.selection != KEEP_MINUS:
        out.append(Beam(sg.basis.ket_plus, plus_total))
    if stage.selection != KEEP_PLUS:
        out.append(Beam(sg.basis.ket_minus, minus_total))
    return out


def run_pipeline(source: Source, stages: Sequence[Stage]) -> RunReport:
    """Propagate exact intensities through every stage and read the detector."""
    chain = tuple(stages)
    if not chain:
        raise EmptyPipelineError("an experiment needs at least one stage")
    beams = _initial_beams(source)
    records: list[StageRecord] = []
    for stage in chain:
        sg = SternGerlach.along(stage.axis)
        plus_total, minus_total = _stage_totals(beams, sg)
        blocked_plus = stage.selection == KEEP_MINUS
        blocked_minus = stage.selection == KEEP_PLUS
        records.append(
            StageRecord(
                stage.axis,
                BranchRecord("+", plus_total, sg.basis.ket_plus, blocked_plus),
                BranchRecord("-", minus_total, sg.basis.ket_minus, blocked_minus),
            )
        )
        beams = []
        if not blocked_plus:
            beams.append(Beam(sg.basis.ket_plus, plus_total))
        if not blocked_minus:
            beams.append(Beam(sg.basis.ket_minus, minus_total))
    last = records[-1]
    detector = DetectorReading(
        chain[-1].axis,
        0.0 if last.plus.blocked else last.plus.intensity,
        0.0 if last.minus.blocked else last.minus.intensity,
    )
    return RunReport(source, tuple(records), detector)


def _transition_table(source: Source, chain: Sequence[Stage]) -> np.ndarray:
    """p_plus[s, i]: probability of the plus branch at stage s from entry component i.

    For stage 0 the entry components are the source kets (both rows equal
    for a pure source); afterwards they are the previous stage's eigenkets.
    """
    bases = [SternGerlach.along(stage.axis) for stage in chain]
    table = np.empty((len(chain), 2), dtype=np.float64)
    if source.kind == "unpolarized":
        entries = (_Z_PLUS, _Z_MINUS)
    else:
        entries = (source.state, source.state)
    for i, ket in enumerate(entries):
        table[0, i] = split(ket, bases[0]).p_plus
    for s in range(1, len(chain)):
        prev = bases[s - 1].basis
        for i, ket in enumerate((prev.ket_plus, prev.ket_minus)):
            table[s, i] = split(ket, bases[s]).p_plus
    return table


def sample_shots(
    source: Source,
    stages: Sequence[Stage],
    shots: int,
    seed: int,
    backend: str | None = None,
) -> CountsReport:
    """Sample individual particles through the pipeline with a seeded stream.

    Identical (source, stages, shots, seed) give bit-identical counts on
    every backend.
    """
    chain = tuple(stages)
    if not chain:
        raise EmptyPipelineError("an experiment needs at least one stage")
    if not isinstance(shots, int) or isinstance(shots, bool) or shots < 1:
        raise InvalidShotsError(f"shots must be a positive integer, got {shots!r}")
    if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < 2**64:
        raise ValueError(f"seed must be an integer in [0, 2**64), got {seed!r}")
    table = _transition_table(source, chain)
    selection = np.array([_SEL_CODE[stage.selection] for stage in chain], dtype=np.int8)
    counts = kernels.sample_paths(
        seed, shots, table, selection, source.kind == "unpolarized", backend
    )
    return CountsReport(
        chain[-1].axis,
        shots,
        seed,
        int(counts[0]),
        int(counts[1]),
        int(counts[2]),
    )
