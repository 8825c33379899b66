"""Plain-text matrix files.

Format::

    # comment
    3
    0   *    -1/2
    -1  0.5  *
    *   0    -inf
    v: 0 0 1

The first non-comment line is the dimension, followed by one line per row.
``*`` and ``-inf`` denote BOTTOM.  An optional ``v:`` line gives a vector.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .core import BOTTOM, Matrix, Scalar, Vector

_TOKEN = re.compile(r"""
    (?P<bottom>\*|-inf)
  | (?P<ratio>[+-]?\d+/\d+)
  | (?P<dec>[+-]?(\d+\.?\d*|\.\d+))
""", re.VERBOSE)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


@dataclass(frozen=True)
class Instance:
    matrix: Matrix
    vector: Vector | None = None


def _tokens(text: str, lineno: int, offset: int):
    for m in re.finditer(r"\S+", text):
        yield m.group(), lineno, offset + m.start() + 1


def _parse_token(tok: str, line: int, col: int) -> Scalar:
    m = _TOKEN.fullmatch(tok)
    if not m:
        raise ParseError(f"bad entry {tok!r}", line, col)
    if m.group("bottom"):
        return BOTTOM
    if m.group("ratio"):
        p, q = tok.split("/")
        if int(q) == 0:
            raise ParseError(f"zero denominator in {tok!r}", line, col)
        return Fraction(int(p), int(q))
    return Fraction(tok)


def parse_instance(text: str) -> Instance:
    lines = []
    for k, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if body.strip():
            lines.append((k, body))
    if not lines:
        raise ParseError("empty input", 1, 1)
    k0, first = lines[0]
    toks = list(_tokens(first, k0, 0))
    if len(toks) != 1 or not toks[0][0].isdigit():
        col = toks[0][2] if toks else 1
        raise ParseError("first line must be the dimension n", k0, col)
    n = int(toks[0][0])
    if n < 1:
        raise ParseError("dimension must be positive", k0, toks[0][2])
    rows = []
    vec = None
    for k, body in lines[1:]:
        stripped = body.lstrip()
        if stripped.startswith("v:"):
            if vec is not None:
                raise ParseError("duplicate vector line", k, len(body) - len(stripped) + 1)
            start = body.index("v:") + 2
            vals = [_parse_token(t, ln, c) for t, ln, c in _tokens(body[start:], k, start)]
            if len(vals) != n:
                raise ParseError(f"vector needs {n} entries, got {len(vals)}", k, start + 1)
            vec = Vector(vals)
            continue
        if vec is not None:
            raise ParseError("matrix rows must precede the vector line", k, 1)
        if len(rows) == n:
            raise ParseError(f"more than {n} rows", k, 1)
        vals = [_parse_token(t, ln, c) for t, ln, c in _tokens(body, k, 0)]
        if len(vals) != n:
            raise ParseError(f"row needs {n} entries, got {len(vals)}", k, 1)
        rows.append(vals)
    if len(rows) != n:
        last = lines[-1][0]
        raise ParseError(f"expected {n} rows, got {len(rows)}", last, 1)
    return Instance(Matrix(rows), vec)


def parse_matrix(text: str) -> Matrix:
    return parse_instance(text).matrix


def load_instance(path) -> Instance:
    return parse_instance(Path(path).read_text())


def format_scalar(x: Scalar) -> str:
    if x is BOTTOM:
        return "*"
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def serialize_matrix(A: Matrix, v: Vector | None = None, comment: str | None = None) -> str:
    cells = [[format_scalar(x) for x in row] for row in A.rows()]
    width = max(len(c) for row in cells for c in row)
    out = []
    if comment:
        out.extend(f"# {line}" for line in comment.splitlines())
    out.append(str(A.n))
    out.extend(" ".join(c.rjust(width) for c in row) for row in cells)
    if v is not None:
        out.append("v: " + " ".join(format_scalar(x) for x in v.values()))
    return "\n".join(out) + "\n"
