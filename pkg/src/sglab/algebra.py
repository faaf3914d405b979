"""Two-dimensional complex ket algebra over a fixed reference basis.

Amplitudes are plain Python complex numbers. Every ket stores its
coordinates in the (z+, z-) basis and is normalized on construction;
all comparisons between physical states quotient out the global phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidToleranceError, NonFiniteAmplitudeError, ZeroVectorError

ComplexAmplitude = complex

NORM_TOL = 1e-12
ORTHO_TOL = 1e-12
ZERO_TOL = 1e-15


def _as_finite_complex(value: complex, what: str) -> complex:
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise NonFiniteAmplitudeError(f"{what} must be finite, got {z!r}")
    return z


@dataclass(frozen=True)
class SpinKet:
    """A normalized spin-1/2 state: amplitudes on z+ and z-."""

    plus: complex
    minus: complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "plus", _as_finite_complex(self.plus, "plus amplitude"))
        object.__setattr__(self, "minus", _as_finite_complex(self.minus, "minus amplitude"))
        n2 = abs(self.plus) ** 2 + abs(self.minus) ** 2
        if abs(n2 - 1.0) > NORM_TOL:
            raise ValueError(f"SpinKet must be normalized; got |plus|^2+|minus|^2 = {n2!r}")


def make_ket(plus: complex, minus: complex) -> SpinKet:
    """Build a normalized ket from two z-basis amplitudes.

    Inputs already normalized within NORM_TOL pass through unchanged, so
    repeated normalization is bit-stable.
    """
    p = _as_finite_complex(plus, "plus amplitude")
    m = _as_finite_complex(minus, "minus amplitude")
    if abs(p) < ZERO_TOL and abs(m) < ZERO_TOL:
        raise ZeroVectorError("cannot normalize amplitudes that are both zero")
    n2 = abs(p) ** 2 + abs(m) ** 2
    if abs(n2 - 1.0) > NORM_TOL:
        norm = math.sqrt(n2)
        p /= norm
        m /= norm
    return SpinKet(p, m)


def inner_product(k1: SpinKet, k2: SpinKet) -> complex:
    """Return <k1|k2>, conjugate-linear in the first argument."""
    return k1.plus.conjugate() * k2.plus + k1.minus.conjugate() * k2.minus


@dataclass(frozen=True)
class Basis:
    """An orthonormal pair of kets labelled by the axis it measures."""

    label: str
    ket_plus: SpinKet
    ket_minus: SpinKet

    def __post_init__(self) -> None:
        overlap = abs(inner_product(self.ket_plus, self.ket_minus))
        if overlap > ORTHO_TOL:
            raise ValueError(f"basis members must be orthogonal; |overlap| = {overlap!r}")


def basis_expand(ket: SpinKet, basis: Basis) -> tuple[complex, complex]:
    """Return the coefficients of `ket` on the basis members (plus first)."""
    return inner_product(basis.ket_plus, ket), inner_product(basis.ket_minus, ket)


def equal_up_to_global_phase(k1: SpinKet, k2: SpinKet, tol: float = 1e-12) -> bool:
    """True iff the two kets describe the same physical state: |<k1|k2>| >= 1 - tol."""
    if not 0.0 < tol < 1.0:
        raise InvalidToleranceError(f"tolerance must lie in (0, 1), got {tol!r}")
    return abs(inner_product(k1, k2)) >= 1.0 - tol
