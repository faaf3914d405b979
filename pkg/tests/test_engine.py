"""Tests for exact intensity propagation and seeded shot sampling."""

from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import axes, kets
from sglab.algebra import inner_product, make_ket
from sglab.apparatus import Axis, SternGerlach, eigenbasis, split
from sglab.engine import (
    KEEP_BOTH,
    KEEP_MINUS,
    KEEP_PLUS,
    Beam,
    Source,
    Stage,
    apply_stage,
    run_pipeline,
    sample_shots,
)
from sglab.errors import EmptyPipelineError, InvalidShotsError

Z_PLUS = make_ket(1, 0)
HALF = 0.5000000000000001  # abs(1/sqrt(2))**2 in double precision


def pure_z_plus() -> Source:
    return Source("pure", state=Z_PLUS, axis=Axis.named("z"), sign="+")


def path_weight_oracle(source: Source, stages: list[Stage]) -> tuple[float, float, float]:
    """Sum Born path weights over every branch route; independent of the engine."""
    if source.kind == "unpolarized":
        initial = [(make_ket(1, 0), 0.5), (make_ket(0, 1), 0.5)]
    else:
        initial = [(source.state, 1.0)]
    bases = [eigenbasis(stage.axis) for stage in stages]
    plus = minus = absorbed = 0.0
    for start, start_weight in initial:
        for route in itertools.product("+-", repeat=len(stages)):
            weight = start_weight
            ket = start
            alive = True
            for stage, basis, sign in zip(stages, bases, route):
                out = basis.ket_plus if sign == "+" else basis.ket_minus
                weight *= abs(inner_product(out, ket)) ** 2
                ket = out
                if (stage.selection == KEEP_PLUS and sign == "-") or (
                    stage.selection == KEEP_MINUS and sign == "+"
                ):
                    alive = False
                    break
            if not alive:
                absorbed += weight
            elif route[-1] == "+":
                plus += weight
            else:
                minus += weight
    return plus, minus, absorbed


class TestApplyStage:
    def test_splits_single_beam(self):
        beams = apply_stage([Beam(Z_PLUS, 1.0)], Stage(Axis.named("x")))
        assert len(beams) == 2
        assert abs(beams[0].intensity - 0.5) <= 1e-12
        assert abs(beams[1].intensity - 0.5) <= 1e-12

    def test_selection_drops_blocked_branch(self):
        beams = apply_stage([Beam(Z_PLUS, 1.0)], Stage(Axis.named("x"), KEEP_PLUS))
        assert len(beams) == 1
        assert beams[0].state == eigenbasis(Axis.named("x")).ket_plus

    def test_keeps_zero_intensity_surviving_branch(self):
        beams = apply_stage([Beam(Z_PLUS, 1.0)], Stage(Axis.named("z")))
        assert len(beams) == 2
        assert beams[1].intensity == 0.0

    def test_same_sign_outputs_merge(self):
        x = eigenbasis(Axis.named("x"))
        incoming = [Beam(x.ket_plus, 0.25), Beam(x.ket_minus, 0.25)]
        beams = apply_stage(incoming, Stage(Axis.named("z")))
        assert len(beams) == 2
        assert abs(beams[0].intensity - 0.25) <= 1e-12
        assert abs(beams[1].intensity - 0.25) <= 1e-12

    def test_beam_rejects_negative_intensity(self):
        with pytest.raises(ValueError):
            Beam(Z_PLUS, -0.5)

    def test_stage_rejects_unknown_selection(self):
        with pytest.raises(ValueError):
            Stage(Axis.named("x"), "keep_all")


class TestSourceValidation:
    def test_pure_requires_state(self):
        with pytest.raises(ValueError):
            Source("pure")

    def test_unpolarized_carries_no_state(self):
        with pytest.raises(ValueError):
            Source("unpolarized", state=Z_PLUS)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            Source("thermal")


class TestRunPipeline:
    def test_requires_a_stage(self):
        with pytest.raises(EmptyPipelineError):
            run_pipeline(pure_z_plus(), [])

    def test_z_plus_through_x(self):
        report = run_pipeline(pure_z_plus(), [Stage(Axis.named("x"))])
        assert report.detector.plus == HALF
        assert report.detector.minus == HALF

    def test_x_plus_through_y(self):
        x_plus = eigenbasis(Axis.named("x")).ket_plus
        source = Source("pure", state=x_plus, axis=Axis.named("x"), sign="+")
        report = run_pipeline(source, [Stage(Axis.named("y"))])
        assert abs(report.detector.plus - 0.5) <= 1e-12
        assert abs(report.detector.minus - 0.5) <= 1e-12

    def test_repeated_axis_is_idempotent(self):
        stages = [Stage(Axis.named("x"), KEEP_PLUS), Stage(Axis.named("x"))]
        report = run_pipeline(pure_z_plus(), stages)
        assert abs(report.detector.plus - 0.5) <= 1e-12
        assert report.detector.minus == 0.0

    def test_blocking_revival_chain(self):
        stages = [
            Stage(Axis.named("x"), KEEP_PLUS),
            Stage(Axis.named("y"), KEEP_PLUS),
            Stage(Axis.named("x")),
        ]
        report = run_pipeline(Source("unpolarized"), stages)
        assert abs(report.detector.minus - 0.125) <= 1e-12
        assert abs(report.detector.plus - 0.125) <= 1e-12

    def test_removing_middle_blocker_kills_the_minus_beam(self):
        stages = [Stage(Axis.named("x"), KEEP_PLUS), Stage(Axis.named("x"))]
        report = run_pipeline(Source("unpolarized"), stages)
        assert abs(report.detector.plus - 0.5) <= 1e-12
        assert abs(report.detector.minus) <= 1e-12

    def test_branch_records_show_pre_selection_intensity(self):
        report = run_pipeline(pure_z_plus(), [Stage(Axis.named("x"), KEEP_MINUS)])
        first = report.stages[0]
        assert first.plus.blocked
        assert abs(first.plus.intensity - 0.5) <= 1e-12
        assert report.detector.plus == 0.0

    def test_detector_reports_final_stage_axis(self):
        stages = [Stage(Axis.named("x")), Stage(Axis.named("y"))]
        report = run_pipeline(pure_z_plus(), stages)
        assert report.detector.axis == Axis.named("y")
        assert len(report.stages) == 2

    @given(kets(), st.lists(axes(), min_size=1, max_size=4))
    @settings(max_examples=50, deadline=None)
    def test_total_intensity_never_exceeds_input(self, ket, axis_list):
        source = Source("pure", state=ket)
        stages = [Stage(a) for a in axis_list]
        report = run_pipeline(source, stages)
        for record in report.stages:
            total = record.plus.intensity + record.minus.intensity
            assert total <= 1.0 + 1e-9

    @given(kets(), st.lists(axes(), min_size=1, max_size=4))
    @settings(max_examples=50, deadline=None)
    def test_no_blocking_conserves_intensity(self, ket, axis_list):
        report = run_pipeline(Source("pure", state=ket), [Stage(a) for a in axis_list])
        total = report.detector.plus + report.detector.minus
        assert abs(total - 1.0) <= 1e-9

    @given(
        kets(),
        st.lists(axes(), min_size=2, max_size=4),
        st.integers(min_value=0, max_value=1),
        st.sampled_from([KEEP_PLUS, KEEP_MINUS]),
    )
    @settings(max_examples=50, deadline=None)
    def test_blocking_never_raises_any_intensity(self, ket, axis_list, where, keep):
        source = Source("pure", state=ket)
        open_stages = [Stage(a) for a in axis_list]
        blocked_stages = list(open_stages)
        blocked_stages[where] = Stage(axis_list[where], keep)
        baseline = run_pipeline(source, open_stages)
        filtered = run_pipeline(source, blocked_stages)
        for base, new in zip(baseline.stages, filtered.stages):
            assert new.plus.intensity <= base.plus.intensity + 1e-12
            assert new.minus.intensity <= base.minus.intensity + 1e-12

    @given(st.lists(axes(), min_size=1, max_size=3))
    @settings(max_examples=50, deadline=None)
    def test_unpolarized_is_the_average_of_both_z_inputs(self, axis_list):
        stages = [Stage(a) for a in axis_list]
        mixed = run_pipeline(Source("unpolarized"), stages)
        up = run_pipeline(Source("pure", state=make_ket(1, 0)), stages)
        down = run_pipeline(Source("pure", state=make_ket(0, 1)), stages)
        average = 0.5 * (up.detector.plus + down.detector.plus)
        assert abs(mixed.detector.plus - average) <= 1e-12

    def test_unpolarized_single_stage_is_even_for_any_axis(self):
        for axis in (Axis.named("x"), Axis.named("y"), Axis.from_angles(0.8, 2.5)):
            report = run_pipeline(Source("unpolarized"), [Stage(axis)])
            assert abs(report.detector.plus - 0.5) <= 1e-12

    @given(kets(), st.lists(axes(), min_size=1, max_size=3), st.data())
    @settings(max_examples=40, deadline=None)
    def test_matches_path_weight_oracle(self, ket, axis_list, data):
        selections = [
            data.draw(st.sampled_from([KEEP_BOTH, KEEP_PLUS, KEEP_MINUS]))
            for _ in axis_list
        ]
        stages = [Stage(a, sel) for a, sel in zip(axis_list, selections)]
        source = Source("pure", state=ket)
        report = run_pipeline(source, stages)
        plus, minus, _ = path_weight_oracle(source, stages)
        assert abs(report.detector.plus - plus) <= 1e-10
        assert abs(report.detector.minus - minus) <= 1e-10


class TestSampleShots:
    def test_rejects_bad_shots(self):
        stages = [Stage(Axis.named("x"))]
        for bad in (0, -5, 2.0, True):
            with pytest.raises(InvalidShotsError):
                sample_shots(pure_z_plus(), stages, bad, 0)

    def test_rejects_bad_seed(self):
        stages = [Stage(Axis.named("x"))]
        for bad in (-1, 2**64, 1.5, False):
            with pytest.raises(ValueError):
                sample_shots(pure_z_plus(), stages, 10, bad)

    def test_requires_a_stage(self):
        with pytest.raises(EmptyPipelineError):
            sample_shots(pure_z_plus(), [], 10, 0)

    def test_counts_partition_the_shots(self):
        stages = [Stage(Axis.named("x"), KEEP_PLUS), Stage(Axis.named("y"))]
        counts = sample_shots(pure_z_plus(), stages, 5000, 7)
        assert counts.plus + counts.minus + counts.absorbed == 5000
        assert counts.shots == 5000
        assert counts.seed == 7

    def test_deterministic_outcome_needs_no_luck(self):
        counts = sample_shots(pure_z_plus(), [Stage(Axis.named("z"))], 1000, 3)
        assert counts.plus == 1000
        assert counts.minus == 0
        assert counts.absorbed == 0

    def test_same_seed_reproduces_counts(self):
        stages = [Stage(Axis.named("x"))]
        a = sample_shots(pure_z_plus(), stages, 20000, 123)
        b = sample_shots(pure_z_plus(), stages, 20000, 123)
        assert (a.plus, a.minus, a.absorbed) == (b.plus, b.minus, b.absorbed)

    def test_different_seeds_differ(self):
        stages = [Stage(Axis.named("x"))]
        a = sample_shots(pure_z_plus(), stages, 20000, 1)
        b = sample_shots(pure_z_plus(), stages, 20000, 2)
        assert (a.plus, a.minus) != (b.plus, b.minus)

    def test_unpolarized_sampling_splits_evenly(self):
        stages = [Stage(Axis.named("z"))]
        counts = sample_shots(Source("unpolarized"), stages, 40000, 9)
        assert counts.absorbed == 0
        assert abs(counts.plus / 40000 - 0.5) < 0.02

    def test_frequencies_track_exact_intensities(self):
        stages = [
            Stage(Axis.named("x"), KEEP_PLUS),
            Stage(Axis.named("y"), KEEP_PLUS),
            Stage(Axis.named("x")),
        ]
        source = Source("unpolarized")
        counts = sample_shots(source, stages, 200000, 11)
        report = run_pipeline(source, stages)
        assert abs(counts.minus / 200000 - report.detector.minus) < 0.005
        assert abs(counts.absorbed / 200000 - 0.75) < 0.005
