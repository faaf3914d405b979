"""Stern-Gerlach apparatus model: eigenbasis construction and Born-rule splitting.

An apparatus oriented along an axis measures projectively in that axis's
eigenbasis: an incoming ket splits into two branches whose weights are the
squared moduli of its expansion coefficients, and each branch emerges
collapsed onto the corresponding eigenket.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .algebra import Basis, SpinKet, basis_expand, make_ket
from .errors import InvalidAxisError

SQRT_HALF = math.sqrt(0.5)

_NAMED_ANGLES = {
    "x": (math.pi / 2, 0.0),
    "y": (math.pi / 2, math.pi / 2),
    "z": (0.0, 0.0),
}

_PROB_TOL = 1e-12
_LEAD_TOL = 1e-12


@dataclass(frozen=True)
class Axis:
    """A measurement orientation: a named axis or explicit polar angles."""

    label: str
    theta: float
    phi: float

    @classmethod
    def named(cls, name: str) -> "Axis":
        key = name.strip().lower()
        if key not in _NAMED_ANGLES:
            raise InvalidAxisError(f"unknown axis name {name!r} (expected x, y, or z)")
        theta, phi = _NAMED_ANGLES[key]
        return cls(key, theta, phi)

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "Axis":
        t = float(theta)
        p = float(phi)
        if not (math.isfinite(t) and math.isfinite(p)):
            raise InvalidAxisError(f"axis angles must be finite, got ({theta!r}, {phi!r})")
        if not 0.0 <= t <= math.pi:
            raise InvalidAxisError(f"theta must lie in [0, pi], got {t!r}")
        if not 0.0 <= p < 2.0 * math.pi:
            raise InvalidAxisError(f"phi must lie in [0, 2*pi), got {p!r}")
        return cls(f"axis({t!r},{p!r})", t, p)


def _lead_phase_canonical(ket: SpinKet) -> SpinKet:
    """Rephase so the first component of significant modulus is real positive."""
    lead = ket.plus if abs(ket.plus) > _LEAD_TOL else ket.minus
    phase = lead / abs(lead)
    conj = phase.conjugate()
    return SpinKet(ket.plus * conj, ket.minus * conj)


def eigenbasis(axis: Axis) -> Basis:
    """Return the measurement eigenbasis of an axis; exact literals for x, y, z."""
    if axis.label == "z":
        return Basis("z", make_ket(1.0, 0.0), make_ket(0.0, 1.0))
    if axis.label == "x":
        return Basis(
            "x",
            make_ket(SQRT_HALF, SQRT_HALF),
            make_ket(SQRT_HALF, -SQRT_HALF),
        )
    if axis.label == "y":
        return Basis(
            "y",
            make_ket(SQRT_HALF, SQRT_HALF * 1j),
            make_ket(SQRT_HALF, -SQRT_HALF * 1j),
        )
    half = 0.5 * axis.theta
    phase = cmath.exp(1j * axis.phi)
    plus = _lead_phase_canonical(make_ket(math.cos(half), phase * math.sin(half)))
    minus = _lead_phase_canonical(make_ket(math.sin(half), -phase * math.cos(half)))
    return Basis(axis.label, plus, minus)


@dataclass(frozen=True)
class SternGerlach:
    """An apparatus: its orientation plus the eigenbasis it measures in."""

    axis: Axis
    basis: Basis

    @classmethod
    def along(cls, axis: Axis) -> "SternGerlach":
        return cls(axis, eigenbasis(axis))


@dataclass(frozen=True)
class SplitResult:
    """Branch weights and collapsed output states of one projective split."""

    p_plus: float
    p_minus: float
    out_plus: SpinKet
    out_minus: SpinKet

    def __post_init__(self) -> None:
        for name, p in (("p_plus", self.p_plus), ("p_minus", self.p_minus)):
            if not -_PROB_TOL <= p <= 1.0 + _PROB_TOL:
                raise ValueError(f"{name} must lie in [0, 1], got {p!r}")
        total = self.p_plus + self.p_minus
        if abs(total - 1.0) > _PROB_TOL:
            raise ValueError(f"branch probabilities must sum to 1, got {total!r}")


def split(ket: SpinKet, sg: SternGerlach) -> SplitResult:
    """Split a ket through an apparatus: squared-modulus weights, collapsed outputs."""
    c_plus, c_minus = basis_expand(ket, sg.basis)
    return SplitResult(
        abs(c_plus) ** 2,
        abs(c_minus) ** 2,
        sg.basis.ket_plus,
        sg.basis.ket_minus,
    )
