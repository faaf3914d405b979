"""Line-oriented experiment script parsing and rendering.

A script is one source line, one or more stage lines, and one detect
line, in that order. '#' starts a comment, keywords are case-insensitive,
and complex literals ("0.6", "0.8i", "1+1i") contain no spaces.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .algebra import SpinKet, make_ket
from .apparatus import Axis, eigenbasis
from .engine import KEEP_BOTH, KEEP_MINUS, KEEP_PLUS, Source, Stage
from .errors import (
    EmptyPipelineError,
    InvalidAxisError,
    NonFiniteAmplitudeError,
    ParseError,
    ZeroVectorError,
)

MAX_SEED = 2**64 - 1

_TOKEN_RE = re.compile(r"[(),]|[^\s(),#]+")
_NAMED_AXES = ("x", "y", "z")
_SIGNS = ("+", "-")


@dataclass(frozen=True)
class ExperimentScript:
    """A parsed pipeline: source, ordered stages, optional sampling clause."""

    source: Source
    stages: tuple[Stage, ...]
    shots: int | None = None
    seed: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "stages", tuple(self.stages))
        if not self.stages:
            raise EmptyPipelineError("a script needs at least one stage")
        if self.shots is not None and self.shots < 1:
            raise ValueError(f"shots must be >= 1, got {self.shots!r}")


@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    column: int


class _LineParser:
    """Consumes the token list of a single line."""

    def __init__(self, tokens: list[_Token], line: int, line_length: int) -> None:
        self.tokens = tokens
        self.line = line
        self.end_column = line_length + 1
        self.pos = 0

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected: str) -> _Token:
        token = self.peek()
        if token is None:
            raise ParseError(self.line, self.end_column, f"expected {expected}", "")
        self.pos += 1
        return token

    def fail(self, token: _Token, message: str) -> ParseError:
        return ParseError(token.line, token.column, message, token.text)

    def expect_literal(self, text: str, expected: str) -> _Token:
        token = self.take(expected)
        if token.text.lower() != text:
            raise self.fail(token, f"expected {expected}, got {token.text!r}")
        return token

    def finish(self) -> None:
        token = self.peek()
        if token is not None:
            raise self.fail(token, f"unexpected trailing token {token.text!r}")


def _tokenize(line: str, line_no: int) -> list[_Token]:
    body = line.split("#", 1)[0]
    return [
        _Token(match.group(0), line_no, match.start() + 1)
        for match in _TOKEN_RE.finditer(body)
    ]


def _parse_complex(parser: _LineParser) -> tuple[complex, _Token]:
    token = parser.take("a complex literal")
    text = token.text.lower().replace("i", "j")
    try:
        value = complex(text)
    except ValueError:
        raise parser.fail(token, f"invalid complex literal {token.text!r}") from None
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise parser.fail(token, f"complex literal {token.text!r} is not finite")
    return value, token


def _parse_float(parser: _LineParser, what: str) -> tuple[float, _Token]:
    token = parser.take(what)
    try:
        value = float(token.text)
    except ValueError:
        raise parser.fail(token, f"invalid {what} {token.text!r}") from None
    return value, token


def _parse_axis(parser: _LineParser) -> Axis:
    token = parser.take("an axis")
    name = token.text.lower()
    if name in _NAMED_AXES:
        return Axis.named(name)
    if name != "axis":
        raise parser.fail(token, f"unknown axis {token.text!r}")
    parser.expect_literal("(", "'(' after axis")
    theta, theta_token = _parse_float(parser, "angle")
    parser.expect_literal(",", "',' between angles")
    phi, phi_token = _parse_float(parser, "angle")
    parser.expect_literal(")", "')' closing axis angles")
    try:
        return Axis.from_angles(theta, phi)
    except InvalidAxisError as exc:
        raise parser.fail(theta_token, str(exc)) from None


def _parse_sign(parser: _LineParser) -> str:
    token = parser.take("a sign (+ or -)")
    if token.text not in _SIGNS:
        raise parser.fail(token, f"expected '+' or '-', got {token.text!r}")
    return token.text


def _parse_int(parser: _LineParser, what: str) -> tuple[int, _Token]:
    token = parser.take(what)
    try:
        value = int(token.text, 10)
    except ValueError:
        raise parser.fail(token, f"invalid {what} {token.text!r}") from None
    return value, token


def _parse_source(parser: _LineParser) -> Source:
    token = parser.take("a source kind")
    kind = token.text.lower()
    if kind == "unpolarized":
        parser.finish()
        return Source("unpolarized")
    if kind != "pure":
        raise parser.fail(token, f"unknown source kind {token.text!r}")
    ahead = parser.peek()
    if ahead is not None and ahead.text == "(":
        open_token = parser.take("'('")
        plus, plus_token = _parse_complex(parser)
        parser.expect_literal(",", "',' between amplitudes")
        minus, _ = _parse_complex(parser)
        parser.expect_literal(")", "')' closing amplitudes")
        parser.finish()
        try:
            state = make_ket(plus, minus)
        except (ZeroVectorError, NonFiniteAmplitudeError) as exc:
            raise ParseError(
                open_token.line, open_token.column, str(exc), plus_token.text
            ) from None
        return Source("pure", state=state)
    axis = _parse_axis(parser)
    sign = _parse_sign(parser)
    parser.finish()
    basis = eigenbasis(axis)
    state = basis.ket_plus if sign == "+" else basis.ket_minus
    return Source("pure", state=state, axis=axis, sign=sign)


def _parse_stage(parser: _LineParser) -> Stage:
    axis = _parse_axis(parser)
    selection = KEEP_BOTH
    ahead = parser.peek()
    if ahead is not None:
        parser.expect_literal("select", "'select' or end of line")
        selection = KEEP_PLUS if _parse_sign(parser) == "+" else KEEP_MINUS
    parser.finish()
    return Stage(axis, selection)


def _parse_detect(parser: _LineParser) -> tuple[int | None, int | None]:
    shots = seed = None
    ahead = parser.peek()
    if ahead is not None:
        parser.expect_literal("shots", "'shots' or end of line")
        shots, shots_token = _parse_int(parser, "shot count")
        if shots < 1:
            raise parser.fail(shots_token, f"shots must be >= 1, got {shots}")
        ahead = parser.peek()
        if ahead is not None:
            parser.expect_literal("seed", "'seed' or end of line")
            seed, seed_token = _parse_int(parser, "seed")
            if not 0 <= seed <= MAX_SEED:
                raise parser.fail(seed_token, f"seed must lie in [0, 2**64), got {seed}")
    parser.finish()
    return shots, seed


def parse_script(text: str) -> ExperimentScript:
    """Parse script text; raises ParseError pointing at the first fault."""
    lines = text.splitlines()
    source: Source | None = None
    stages: list[Stage] = []
    detect_seen = False
    shots = seed = None
    for line_no, raw in enumerate(lines, start=1):
        tokens = _tokenize(raw, line_no)
        if not tokens:
            continue
        parser = _LineParser(tokens, line_no, len(raw))
        head = parser.take("a keyword")
        keyword = head.text.lower()
        if detect_seen:
            raise parser.fail(head, "nothing may follow the detect line")
        if keyword == "source":
            if source is not None:
                raise parser.fail(head, "duplicate source line")
            if stages:
                raise parser.fail(head, "the source line must come first")
            source = _parse_source(parser)
        elif keyword == "sg":
            if source is None:
                raise parser.fail(head, "a source line must come before stages")
            stages.append(_parse_stage(parser))
        elif keyword == "detect":
            if source is None:
                raise parser.fail(head, "a source line must come before detect")
            if not stages:
                raise parser.fail(head, "at least one sg stage must come before detect")
            shots, seed = _parse_detect(parser)
            detect_seen = True
        else:
            raise parser.fail(head, f"unknown keyword {head.text!r}")
    if source is None:
        raise ParseError(len(lines) + 1, 1, "missing source line", "")
    if not detect_seen:
        raise ParseError(len(lines) + 1, 1, "missing detect line", "")
    return ExperimentScript(source, tuple(stages), shots, seed)


def _complex_literal(value: complex) -> str:
    if value.imag == 0.0:
        return repr(value.real)
    if value.real == 0.0:
        return f"{value.imag!r}i"
    sign = "+" if value.imag > 0.0 else "-"
    return f"{value.real!r}{sign}{abs(value.imag)!r}i"


def render_script(script: ExperimentScript) -> str:
    """Render a script back to text; reparsing yields an equal script."""
    lines = []
    source = script.source
    if source.kind == "unpolarized":
        lines.append("source unpolarized")
    elif source.axis is not None:
        lines.append(f"source pure {source.axis.label} {source.sign}")
    else:
        plus = _complex_literal(source.state.plus)
        minus = _complex_literal(source.state.minus)
        lines.append(f"source pure ({plus}, {minus})")
    for stage in script.stages:
        line = f"sg {stage.axis.label}"
        if stage.selection == KEEP_PLUS:
            line += " select +"
        elif stage.selection == KEEP_MINUS:
            line += " select -"
        lines.append(line)
    detect = "detect"
    if script.shots is not None:
        detect += f" shots {script.shots}"
        if script.seed is not None:
            detect += f" seed {script.seed}"
    lines.append(detect)
    return "\n".join(lines) + "\n"
