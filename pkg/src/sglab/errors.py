"""Exception types shared across the package."""

from __future__ import annotations


class SGLabError(Exception):
    """Base class for every error raised by this package."""


class NonFiniteAmplitudeError(SGLabError):
    """An amplitude, angle, or matrix entry contains NaN or Inf."""


class ZeroVectorError(SGLabError):
    """Both amplitudes are numerically zero; there is no direction to normalize."""


class InvalidToleranceError(SGLabError):
    """A tolerance argument lies outside the open interval (0, 1)."""


class InvalidAxisError(SGLabError):
    """An axis name is unknown or its polar angles are out of range."""


class EmptyPipelineError(SGLabError):
    """An experiment has no measurement stages."""


class InvalidShotsError(SGLabError):
    """A shot count is not a positive integer."""


class NonUnitaryError(SGLabError):
    """A 2x2 matrix fails the column-orthonormality check."""


class UnsupportedGridError(SGLabError):
    """A phase grid other than 2, 4, or 8 was requested."""


class ParseError(SGLabError):
    """A script failed to parse; carries the exact fault location.

    line and column are 1-based positions into the original text.
    """

    def __init__(self, line: int, column: int, message: str, token: str = "") -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message
        self.token = token
