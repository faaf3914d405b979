"""Shared test helpers: acceptance-line reporting and hypothesis strategies."""

from __future__ import annotations

import math

import pytest
from hypothesis import strategies as st

from sglab.algebra import SpinKet, make_ket
from sglab.apparatus import Axis

_ACCEPTANCE_RESULTS: dict[int, tuple[str, str]] = {}


@pytest.fixture
def criterion():
    """Record a numbered acceptance outcome, then assert it."""

    def record(number: int, title: str, passed: bool, detail: str = "") -> None:
        status = "PASS" if passed else "FAIL"
        _ACCEPTANCE_RESULTS[number] = (status, title)
        assert passed, f"criterion {number} ({title}): {detail or 'check failed'}"

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE_RESULTS):
        status, title = _ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"criterion {number:2d}: {status} - {title}")


_finite = st.floats(
    min_value=-8.0, max_value=8.0, allow_nan=False, allow_infinity=False
)


def kets() -> st.SearchStrategy[SpinKet]:
    """Normalized kets built from bounded, not-all-tiny raw amplitudes."""
    return st.tuples(_finite, _finite, _finite, _finite).filter(
        lambda t: t[0] * t[0] + t[1] * t[1] + t[2] * t[2] + t[3] * t[3] > 1e-6
    ).map(lambda t: make_ket(complex(t[0], t[1]), complex(t[2], t[3])))


def axes() -> st.SearchStrategy[Axis]:
    """Measurement axes drawn over the full direction sphere."""
    return st.tuples(
        st.floats(min_value=0.0, max_value=math.pi, allow_nan=False),
        st.floats(min_value=0.0, max_value=2.0 * math.pi, exclude_max=True,
                  allow_nan=False),
    ).map(lambda t: Axis.from_angles(t[0], t[1]))


def phases() -> st.SearchStrategy[float]:
    """Phase angles covering a full turn."""
    return st.floats(min_value=0.0, max_value=2.0 * math.pi, exclude_max=True,
                     allow_nan=False)
