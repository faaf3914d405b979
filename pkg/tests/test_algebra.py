"""Tests for ket construction, inner products, and phase-blind comparison."""

from __future__ import annotations

import cmath
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import kets, phases
from sglab.algebra import (
    Basis,
    SpinKet,
    basis_expand,
    equal_up_to_global_phase,
    inner_product,
    make_ket,
)
from sglab.errors import (
    InvalidToleranceError,
    NonFiniteAmplitudeError,
    ZeroVectorError,
)

SQRT_HALF = 0.7071067811865476


class TestMakeKet:
    def test_normalizes_exactly_on_pythagorean_input(self):
        ket = make_ket(3, 4j)
        assert ket == SpinKet(0.6 + 0j, 0.8j)

    def test_already_normalized_input_passes_through_bitwise(self):
        ket = make_ket(SQRT_HALF, SQRT_HALF * 1j)
        assert ket.plus == SQRT_HALF + 0j
        assert ket.minus == SQRT_HALF * 1j

    def test_accepts_real_int_and_complex_inputs(self):
        assert make_ket(1, 0) == SpinKet(1 + 0j, 0j)
        assert make_ket(0.0, 1.0) == SpinKet(0j, 1 + 0j)

    def test_tiny_but_nonzero_amplitude_normalizes(self):
        ket = make_ket(1e-7, 0)
        assert ket == SpinKet(1 + 0j, 0j)

    def test_rejects_zero_vector(self):
        with pytest.raises(ZeroVectorError):
            make_ket(0, 0)

    def test_rejects_below_zero_threshold(self):
        with pytest.raises(ZeroVectorError):
            make_ket(1e-16, 1e-16j)

    @pytest.mark.parametrize("bad", [float("nan"), float("inf"), -float("inf")])
    def test_rejects_non_finite(self, bad):
        with pytest.raises(NonFiniteAmplitudeError):
            make_ket(bad, 1)
        with pytest.raises(NonFiniteAmplitudeError):
            make_ket(1, complex(0, bad))

    @given(kets())
    def test_norm_within_tolerance(self, ket):
        n2 = abs(ket.plus) ** 2 + abs(ket.minus) ** 2
        assert abs(n2 - 1.0) <= 1e-12

    @given(kets())
    def test_idempotent_bitwise(self, ket):
        again = make_ket(ket.plus, ket.minus)
        assert again.plus == ket.plus
        assert again.minus == ket.minus


class TestSpinKet:
    def test_rejects_unnormalized_direct_construction(self):
        with pytest.raises(ValueError):
            SpinKet(1 + 0j, 1 + 0j)

    def test_is_frozen(self):
        ket = make_ket(1, 0)
        with pytest.raises(AttributeError):
            ket.plus = 0j  # type: ignore[misc]


class TestInnerProduct:
    def test_orthogonal_pair(self):
        assert inner_product(make_ket(1, 0), make_ket(0, 1)) == 0j

    def test_self_overlap_is_one(self):
        ket = make_ket(3, 4j)
        assert abs(inner_product(ket, ket) - 1.0) <= 1e-15

    def test_conjugate_linear_in_first_argument(self):
        up = make_ket(1, 0)
        plus_i = make_ket(1, 1j)
        assert abs(inner_product(plus_i, up) - SQRT_HALF) <= 1e-15
        assert abs(inner_product(up, plus_i) - SQRT_HALF) <= 1e-15

    @given(kets(), kets())
    def test_hermitian_symmetry(self, k1, k2):
        assert cmath.isclose(
            inner_product(k1, k2),
            inner_product(k2, k1).conjugate(),
            abs_tol=1e-12,
        )

    @given(kets(), kets())
    def test_cauchy_schwarz(self, k1, k2):
        assert abs(inner_product(k1, k2)) <= 1.0 + 1e-12


class TestBasis:
    def test_accepts_orthonormal_pair(self):
        basis = Basis("x", make_ket(1, 1), make_ket(1, -1))
        coeff_plus, coeff_minus = basis_expand(make_ket(1, 0), basis)
        assert abs(coeff_plus - SQRT_HALF) <= 1e-15
        assert abs(coeff_minus - SQRT_HALF) <= 1e-15

    def test_rejects_non_orthogonal_pair(self):
        with pytest.raises(ValueError):
            Basis("bad", make_ket(1, 0), make_ket(1, 1))

    @given(kets(), kets())
    def test_expansion_reconstructs_the_ket(self, member, probe):
        ortho = SpinKet(-member.minus.conjugate(), member.plus.conjugate())
        basis = Basis("h", member, ortho)
        c_plus, c_minus = basis_expand(probe, basis)
        rebuilt_plus = c_plus * member.plus + c_minus * ortho.plus
        rebuilt_minus = c_plus * member.minus + c_minus * ortho.minus
        assert abs(rebuilt_plus - probe.plus) <= 1e-12
        assert abs(rebuilt_minus - probe.minus) <= 1e-12

    @given(kets(), kets())
    def test_expansion_preserves_total_probability(self, member, probe):
        ortho = SpinKet(-member.minus.conjugate(), member.plus.conjugate())
        c_plus, c_minus = basis_expand(probe, Basis("h", member, ortho))
        assert abs(abs(c_plus) ** 2 + abs(c_minus) ** 2 - 1.0) <= 1e-12


class TestEqualUpToGlobalPhase:
    def test_identical_states(self):
        ket = make_ket(1, 1j)
        assert equal_up_to_global_phase(ket, ket)

    def test_orthogonal_states_differ(self):
        assert not equal_up_to_global_phase(make_ket(1, 0), make_ket(0, 1))

    def test_rejects_bad_tolerance(self):
        ket = make_ket(1, 0)
        for bad in (0.0, 1.0, -0.5, 2.0):
            with pytest.raises(InvalidToleranceError):
                equal_up_to_global_phase(ket, ket, tol=bad)

    @given(kets(), phases())
    def test_global_phase_is_invisible(self, ket, angle):
        w = cmath.exp(1j * angle)
        rotated = make_ket(ket.plus * w, ket.minus * w)
        assert equal_up_to_global_phase(ket, rotated)

    @given(kets(), st.floats(min_value=math.pi / 2, max_value=math.pi))
    def test_relative_phase_is_visible(self, ket, angle):
        # Keep both components heavy enough that a half-turn twist of one
        # of them moves the overlap well below the comparison threshold.
        if abs(ket.plus) < 0.35 or abs(ket.minus) < 0.35:
            return
        twisted = make_ket(ket.plus, ket.minus * cmath.exp(1j * angle))
        assert not equal_up_to_global_phase(ket, twisted, tol=1e-3)
