"""Feasibility prover for amplitude assignments linking the z, x, and y bases.

A candidate assignment is a triple of unitary transfer matrices: z kets
expanded in the x basis, z kets in the y basis, and x kets in the y
basis. Two constraints encode the tandem experiments: every entry must
have modulus 1/sqrt(2) (each apparatus shows two equal-intensity output
beams), and expanding z through x must reproduce the direct z-in-y
expansion up to one unit phase per column (ket phases are unobservable).
The search enumerates all matrices whose entry phases lie on a uniform
grid and certifies feasibility for a given coefficient field.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .algebra import _as_finite_complex
from .apparatus import Axis, eigenbasis
from .errors import InvalidToleranceError, NonUnitaryError, UnsupportedGridError

SQRT_HALF = math.sqrt(0.5)

CHECK_TOL = 1e-9
STRICT_TOL = 1e-12

SUPPORTED_GRIDS = (2, 4, 8)
FIELDS = ("real", "complex")

# Exact double-precision values of (1/sqrt(2)) * exp(i*pi/4*k) for k = 0..7.
_EIGHTH_ENTRIES = (
    complex(SQRT_HALF, 0.0),
    complex(0.5, 0.5),
    complex(0.0, SQRT_HALF),
    complex(-0.5, 0.5),
    complex(-SQRT_HALF, 0.0),
    complex(-0.5, -0.5),
    complex(0.0, -SQRT_HALF),
    complex(0.5, -0.5),
)

Rows = tuple[tuple[complex, complex], tuple[complex, complex]]


def _validate_tolerance(tol: float) -> float:
    if not 0.0 < tol < 1.0:
        raise InvalidToleranceError(f"tolerance must lie in (0, 1), got {tol!r}")
    return tol


@dataclass(frozen=True)
class TransferMatrix:
    """Unitary 2x2 coefficient matrix: column j = source ket j in the target basis."""

    entries: Rows

    def __post_init__(self) -> None:
        rows = tuple(self.entries)
        if len(rows) != 2 or any(len(tuple(row)) != 2 for row in rows):
            raise ValueError("a transfer matrix needs exactly 2x2 entries")
        rows = tuple(
            tuple(_as_finite_complex(e, "matrix entry") for e in row) for row in rows
        )
        object.__setattr__(self, "entries", rows)
        (a, b), (c, d) = rows
        col0 = abs(a) ** 2 + abs(c) ** 2
        col1 = abs(b) ** 2 + abs(d) ** 2
        cross = abs(a.conjugate() * b + c.conjugate() * d)
        if (
            abs(col0 - 1.0) > STRICT_TOL
            or abs(col1 - 1.0) > STRICT_TOL
            or cross > STRICT_TOL
        ):
            raise NonUnitaryError(
                "columns must be orthonormal within "
                f"{STRICT_TOL}: norms ({col0!r}, {col1!r}), overlap {cross!r}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[complex]]) -> "TransferMatrix":
        return cls(tuple(tuple(row) for row in rows))

    @classmethod
    def from_array(cls, array: np.ndarray) -> "TransferMatrix":
        return cls.from_rows([[complex(e) for e in row] for row in np.asarray(array)])

    @classmethod
    def from_grid_phases(cls, steps: Sequence[int], grid: int) -> "TransferMatrix":
        """Build from four phase indices (row-major) in units of 2*pi/grid."""
        if grid not in SUPPORTED_GRIDS:
            raise UnsupportedGridError(f"grid must be one of {SUPPORTED_GRIDS}, got {grid!r}")
        a, b, c, d = (int(k) % grid for k in steps)
        per = 8 // grid
        return cls.from_rows(
            [
                [_EIGHTH_ENTRIES[a * per], _EIGHTH_ENTRIES[b * per]],
                [_EIGHTH_ENTRIES[c * per], _EIGHTH_ENTRIES[d * per]],
            ]
        )

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.complex128)

    def moduli(self) -> tuple[tuple[float, float], tuple[float, float]]:
        return tuple(tuple(abs(e) for e in row) for row in self.entries)

    def is_unbiased(self, tol: float = CHECK_TOL) -> bool:
        """True iff every entry has modulus 1/sqrt(2) within tol."""
        return all(abs(abs(e) - SQRT_HALF) <= tol for row in self.entries for e in row)

    def is_real_class(self, tol: float = CHECK_TOL) -> bool:
        """True iff some per-column rephasing makes every entry real.

        A column is rephasable to real exactly when its two entries have
        phases congruent modulo pi.
        """
        (a, b), (c, d) = self.entries
        return abs((c * a.conjugate()).imag) <= tol and abs((d * b.conjugate()).imag) <= tol

    def phase_steps(self, tol: float = CHECK_TOL) -> tuple[int, int, int, int] | None:
        """Phase indices in units of pi/4 when every entry lies on that grid."""
        steps = []
        for row in self.entries:
            for e in row:
                dists = [abs(e - v) for v in _EIGHTH_ENTRIES]
                k = min(range(8), key=dists.__getitem__)
                if dists[k] > tol:
                    return None
                steps.append(k)
        return tuple(steps)

    def rephase_columns_canonical(self) -> "TransferMatrix":
        """Multiply each column by the unit phase making its leading entry real positive."""
        array = self.as_array()
        for j in range(2):
            lead = array[0, j] if abs(array[0, j]) > STRICT_TOL else array[1, j]
            array[:, j] *= (lead / abs(lead)).conjugate()
        return TransferMatrix.from_array(array)


@dataclass(frozen=True)
class AssignmentTriple:
    """One candidate assignment for the three cross-basis expansions."""

    z_in_x: TransferMatrix
    z_in_y: TransferMatrix
    x_in_y: TransferMatrix


@dataclass(frozen=True)
class ConsistencyReport:
    """Detailed outcome of the two-constraint consistency check."""

    passed: bool
    unbiased_inputs: tuple[bool, bool, bool]
    product: Rows
    product_moduli: tuple[tuple[float, float], tuple[float, float]]
    product_unbiased: bool
    column_overlaps: tuple[float, float]
    columns_match: tuple[bool, bool]
    failures: tuple[str, ...]
    tolerance: float


_SLOT_NAMES = ("z kets in x basis", "z kets in y basis", "x kets in y basis")


def check_consistency(
    z_in_x: TransferMatrix,
    z_in_y: TransferMatrix,
    x_in_y: TransferMatrix,
    tol: float = CHECK_TOL,
) -> ConsistencyReport:
    """Check one assignment against the equal-split and composition constraints.

    Chaining the z-in-x expansion through the x-in-y expansion must equal
    the direct z-in-y expansion up to one unit phase per column, and all
    twelve input entries plus the composition product must have modulus
    1/sqrt(2) within tol.
    """
    _validate_tolerance(tol)
    slots = []
    for value in (z_in_x, z_in_y, x_in_y):
        slots.append(value if isinstance(value, TransferMatrix) else TransferMatrix.from_rows(value))
    first, second, third = slots
    failures: list[str] = []

    unbiased = tuple(m.is_unbiased(tol) for m in slots)
    for name, flag, matrix in zip(_SLOT_NAMES, unbiased, slots):
        if not flag:
            failures.append(
                f"{name}: entry moduli {matrix.moduli()!r} differ from 1/sqrt(2)"
            )

    product = third.as_array() @ first.as_array()
    product_moduli = tuple(tuple(float(abs(e)) for e in row) for row in product)
    product_unbiased = all(
        abs(m - SQRT_HALF) <= tol for row in product_moduli for m in row
    )
    if not product_unbiased:
        failures.append(
            "composition product (x-in-y applied after z-in-x) has entry moduli "
            f"{product_moduli!r} instead of 1/sqrt(2)"
        )

    target = second.as_array()
    overlaps = tuple(
        float(abs(np.vdot(target[:, j], product[:, j]))) for j in range(2)
    )
    columns_match = tuple(v >= 1.0 - tol for v in overlaps)
    for j, (flag, value) in enumerate(zip(columns_match, overlaps)):
        if not flag:
            failures.append(
                f"column {j} of the composition disagrees with z kets in y basis "
                f"(overlap {value!r}, need >= 1 - {tol})"
            )

    passed = all(unbiased) and product_unbiased and all(columns_match)
    return ConsistencyReport(
        passed=passed,
        unbiased_inputs=unbiased,
        product=tuple(tuple(complex(e) for e in row) for row in product),
        product_moduli=product_moduli,
        product_unbiased=product_unbiased,
        column_overlaps=overlaps,
        columns_match=columns_match,
        failures=tuple(failures),
        tolerance=tol,
    )


@dataclass(frozen=True)
class ConstraintSet:
    """What the search must satisfy: coefficient field and phase grid."""

    field: str
    grid: int
    tolerance: float = CHECK_TOL

    def __post_init__(self) -> None:
        if self.field not in FIELDS:
            raise ValueError(f"field must be one of {FIELDS}, got {self.field!r}")
        if self.grid not in SUPPORTED_GRIDS:
            raise UnsupportedGridError(
                f"grid must be one of {SUPPORTED_GRIDS}, got {self.grid!r}"
            )
        _validate_tolerance(self.tolerance)


def enumerate_grid_unitaries(grid: int, field: str = "complex") -> tuple[TransferMatrix, ...]:
    """All unitary 2x2 matrices with entries (1/sqrt(2)) * exp(2i*pi*k/grid).

    Unitarity pins the fourth phase index to d = b - a + c + grid/2 (mod
    grid), so there are grid**3 such matrices; field="real" keeps only the
    sign-pattern matrices (all entries +-1/sqrt(2)).
    """
    if grid not in SUPPORTED_GRIDS:
        raise UnsupportedGridError(f"grid must be one of {SUPPORTED_GRIDS}, got {grid!r}")
    if field not in FIELDS:
        raise ValueError(f"field must be one of {FIELDS}, got {field!r}")
    out = []
    for a in range(grid):
        for b in range(grid):
            for c in range(grid):
                d = (b - a + c + grid // 2) % grid
                matrix = TransferMatrix.from_grid_phases((a, b, c, d), grid)
                if field == "real" and any(
                    e.imag != 0.0 for row in matrix.entries for e in row
                ):
                    continue
                out.append(matrix)
    return tuple(out)


@dataclass(frozen=True)
class ConsistencyVerdict:
    """Search outcome over one field/grid, with a canonical witness if feasible."""

    feasible: bool
    field: str
    grid: int
    candidates_per_slot: int
    search_size: int
    witness_count: int
    witness: AssignmentTriple | None
    witness_real_class: tuple[bool, bool, bool] | None
    violated: str | None


def _summarize_infeasibility(stack: np.ndarray) -> str:
    moduli: set[float] = set()
    block = 64
    m = stack.shape[0]
    for start in range(0, m, block):
        prod = np.einsum("jab,ibc->jiac", stack[start : start + block], stack)
        moduli.update(np.unique(np.round(np.abs(prod), 9)).tolist())
    listed = ", ".join(f"{v:g}" for v in sorted(moduli))
    return (
        "every composition of a candidate pair yields entry moduli in "
        f"{{{listed}}}, never the required 1/sqrt(2); no third matrix can "
        "reconcile the equal-split constraint"
    )


def search(constraints: ConstraintSet, backend: str | None = None) -> ConsistencyVerdict:
    """Exhaustively test every candidate assignment on the grid.

    Candidate pairs fix the first and third slots; the composition product
    then determines the only possible second slot up to column phases, and
    its phases always land back on the grid, so one modulus test per pair
    covers every completion. The witness, when one exists, prefers
    real-class slots and then the lowest candidate indices.
    """
    mats = enumerate_grid_unitaries(constraints.grid, constraints.field)
    count = len(mats)
    stack = np.array([m.entries for m in mats], dtype=np.complex128)
    firsts, thirds = kernels.scan_pairs(stack, SQRT_HALF, constraints.tolerance, backend)
    search_size = count * count
    if firsts.size == 0:
        return ConsistencyVerdict(
            feasible=False,
            field=constraints.field,
            grid=constraints.grid,
            candidates_per_slot=count,
            search_size=search_size,
            witness_count=0,
            witness=None,
            witness_real_class=None,
            violated=_summarize_infeasibility(stack),
        )

    products = np.matmul(stack[thirds], stack[firsts])
    imag_tol = constraints.tolerance
    nonreal1 = np.array([not mats[i].is_real_class(imag_tol) for i in firsts], dtype=np.int8)
    nonreal3 = np.array([not mats[i].is_real_class(imag_tol) for i in thirds], dtype=np.int8)
    col0 = products[:, 1, 0] * products[:, 0, 0].conjugate()
    col1 = products[:, 1, 1] * products[:, 0, 1].conjugate()
    nonreal2 = ((np.abs(col0.imag) > imag_tol) | (np.abs(col1.imag) > imag_tol)).astype(np.int8)
    order = np.lexsort((thirds, firsts, nonreal3, nonreal2, nonreal1))
    best = order[0]
    i1 = int(firsts[best])
    i3 = int(thirds[best])

    rep = TransferMatrix.from_array(products[best]).rephase_columns_canonical()
    steps = rep.phase_steps(constraints.tolerance)
    per = 8 // constraints.grid
    if steps is not None and all(k % per == 0 for k in steps):
        rep = TransferMatrix.from_grid_phases(
            tuple(k // per for k in steps), constraints.grid
        )
    witness = AssignmentTriple(mats[i1], rep, mats[i3])
    recheck = check_consistency(
        witness.z_in_x, witness.z_in_y, witness.x_in_y, constraints.tolerance
    )
    if not recheck.passed:
        raise RuntimeError("internal error: selected witness failed re-verification")
    real_class = (
        witness.z_in_x.is_real_class(imag_tol),
        witness.z_in_y.is_real_class(imag_tol),
        witness.x_in_y.is_real_class(imag_tol),
    )
    return ConsistencyVerdict(
        feasible=True,
        field=constraints.field,
        grid=constraints.grid,
        candidates_per_slot=count,
        search_size=search_size,
        witness_count=int(firsts.size),
        witness=witness,
        witness_real_class=real_class,
        violated=None,
    )


def canonical_assignment() -> AssignmentTriple:
    """The standard-convention assignment: real Hadamard-type z expansions
    and the quarter-phase complex x-in-y matrix."""
    hadamard = TransferMatrix.from_rows(
        [[SQRT_HALF, SQRT_HALF], [SQRT_HALF, -SQRT_HALF]]
    )
    quarter = TransferMatrix.from_rows(
        [
            [complex(0.5, -0.5), complex(0.5, 0.5)],
            [complex(0.5, 0.5), complex(0.5, -0.5)],
        ]
    )
    return AssignmentTriple(hadamard, hadamard, quarter)


@dataclass(frozen=True)
class VerificationCheck:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class AssignmentVerification:
    """Pass/fail summary for the canonical assignment."""

    checks: tuple[VerificationCheck, ...]
    consistency: ConsistencyReport
    assignment: AssignmentTriple

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


def _unitarity_deviation(matrix: TransferMatrix) -> float:
    array = matrix.as_array()
    return float(np.abs(array.conj().T @ array - np.eye(2)).max())


def verify_paper_assignment() -> AssignmentVerification:
    """Verify the canonical assignment end to end.

    Builds the exact matrices, confirms each is unitary and unbiased
    within 1e-12, runs the consistency check, and confirms that the
    complex x-in-y coefficients rebuild the x kets exactly.
    """
    triple = canonical_assignment()
    checks: list[VerificationCheck] = []
    for name, matrix in zip(
        _SLOT_NAMES, (triple.z_in_x, triple.z_in_y, triple.x_in_y)
    ):
        deviation = _unitarity_deviation(matrix)
        checks.append(
            VerificationCheck(
                f"unitarity of {name}",
                deviation <= STRICT_TOL,
                f"max |U*U - I| = {deviation:.3e}",
            )
        )
        worst = max(abs(abs(e) - SQRT_HALF) for row in matrix.entries for e in row)
        checks.append(
            VerificationCheck(
                f"unbiasedness of {name}",
                worst <= STRICT_TOL,
                f"max | |entry| - 1/sqrt(2) | = {worst:.3e}",
            )
        )

    consistency = check_consistency(
        triple.z_in_x, triple.z_in_y, triple.x_in_y, CHECK_TOL
    )
    checks.append(
        VerificationCheck(
            "composition consistency",
            consistency.passed,
            "composition reproduces z kets in y basis up to column phases"
            if consistency.passed
            else "; ".join(consistency.failures),
        )
    )

    # Rebuild each x ket in z coordinates from its x-in-y column and the
    # exact y eigenkets; the canonical choice makes this land exactly.
    y_basis = eigenbasis(Axis.named("y"))
    x_basis = eigenbasis(Axis.named("x"))
    worst_rebuild = 0.0
    for j, target in enumerate((x_basis.ket_plus, x_basis.ket_minus)):
        c_plus = triple.x_in_y.entries[0][j]
        c_minus = triple.x_in_y.entries[1][j]
        plus = c_plus * y_basis.ket_plus.plus + c_minus * y_basis.ket_minus.plus
        minus = c_plus * y_basis.ket_plus.minus + c_minus * y_basis.ket_minus.minus
        worst_rebuild = max(
            worst_rebuild, abs(plus - target.plus), abs(minus - target.minus)
        )
    checks.append(
        VerificationCheck(
            "x kets rebuilt from complex y coefficients",
            worst_rebuild <= STRICT_TOL,
            f"max coordinate deviation = {worst_rebuild:.3e}",
        )
    )
    return AssignmentVerification(tuple(checks), consistency, triple)


@dataclass(frozen=True)
class PhasePoint:
    """One sample of the continuous relative-phase spot check."""

    psi: float
    feasible: bool
    real_class: tuple[bool, bool, bool]


def relative_phase_scan(steps: int = 24, tol: float = CHECK_TOL) -> tuple[PhasePoint, ...]:
    """Spot-check the continuum between grid points.

    psi parametrizes the within-column phase difference of the x-in-y
    matrix (its gauge-invariant content). For each psi the second slot is
    completed from the composition product, so the scan reports whether
    any completion exists and which slots stay rephasable-to-real. Not
    used by search; grids alone decide verdicts.
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps!r}")
    _validate_tolerance(tol)
    hadamard = canonical_assignment().z_in_x
    points = []
    for k in range(steps):
        psi = 2.0 * math.pi * k / steps
        swirl = cmath.exp(1j * psi)
        third = TransferMatrix.from_rows(
            [
                [SQRT_HALF, SQRT_HALF * 1j],
                [SQRT_HALF * swirl, -SQRT_HALF * 1j * swirl],
            ]
        )
        product = third.as_array() @ hadamard.as_array()
        second = TransferMatrix.from_array(product).rephase_columns_canonical()
        report = check_consistency(hadamard, second, third, tol)
        points.append(
            PhasePoint(
                psi,
                report.passed,
                (
                    hadamard.is_real_class(tol),
                    second.is_real_class(tol),
                    third.is_real_class(tol),
                ),
            )
        )
    return tuple(points)
