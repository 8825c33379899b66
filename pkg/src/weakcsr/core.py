"""Exact max-plus arithmetic.

Scalars are either :data:`BOTTOM` (the semiring zero, -inf) or a
:class:`fractions.Fraction`.  Matrices and vectors keep their finite entries
as integer numerators over one shared positive denominator, reduced so that
two equal objects are structurally identical.  Nothing here rounds.

Indices are 0-based throughout the package.
"""

from __future__ import annotations

import math
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, Sequence, Union


class _Bottom:
    """The max-plus zero.  Compares below every finite scalar."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "BOTTOM"

    def __str__(self):
        return "-inf"

    def __reduce__(self):
        return (_Bottom, ())

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __hash__(self):
        return hash("max-plus-bottom")


BOTTOM = _Bottom()
Scalar = Union[Fraction, _Bottom]

ScalarLike = Union[int, Fraction, Decimal, str, float, _Bottom, None]


class DimensionError(ValueError):
    pass


class DivergentStarError(ValueError):
    """Raised when A* does not exist because some cycle has positive weight."""

    def __init__(self, cycle, mean):
        self.cycle = cycle
        self.mean = mean
        nodes = "->".join(str(i + 1) for i in list(cycle) + [cycle[0]])
        super().__init__(
            f"Kleene star diverges: cycle {nodes} has positive mean {mean}")


_BOTTOM_TOKENS = {"*", "-inf", "-infinity", "bottom", "⊘", "ε", "e"}


def scalar(x: ScalarLike) -> Scalar:
    """Convert ``x`` to an exact scalar.

    Accepts ints, Fractions, Decimals, floats (converted exactly), strings such
    as ``"-3"``, ``"0.25"``, ``"7/3"`` and the bottom tokens ``"*"``/``"-inf"``.
    ``None`` and ``float('-inf')`` also mean bottom.
    """
    if x is None or x is BOTTOM:
        return BOTTOM
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not max-plus scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Decimal):
        if x.is_infinite() and x < 0:
            return BOTTOM
        if not x.is_finite():
            raise ValueError(f"not a max-plus scalar: {x!r}")
        return Fraction(x)
    if isinstance(x, float):
        if x == float("-inf"):
            return BOTTOM
        if math.isnan(x) or math.isinf(x):
            raise ValueError(f"not a max-plus scalar: {x!r}")
        return Fraction(x)
    if isinstance(x, str):
        tok = x.strip()
        if tok.lower() in _BOTTOM_TOKENS:
            return BOTTOM
        if "/" in tok:
            p, q = tok.split("/", 1)
            return Fraction(int(p), int(q))
        return Fraction(Decimal(tok))
    raise TypeError(f"cannot convert {type(x).__name__} to a max-plus scalar")


def oplus(a: Scalar, b: Scalar) -> Scalar:
    if a is BOTTOM:
        return b
    if b is BOTTOM:
        return a
    return a if a >= b else b


def otimes(a: Scalar, b: Scalar) -> Scalar:
    if a is BOTTOM or b is BOTTOM:
        return BOTTOM
    return a + b


def power(a: Scalar, t: int) -> Scalar:
    """Scalar power ``a^{⊗t} = t*a``; ``BOTTOM^0`` is 0."""
    if t == 0:
        return Fraction(0)
    return BOTTOM if a is BOTTOM else a * t


def inverse(a: Scalar) -> Scalar:
    if a is BOTTOM:
        raise ZeroDivisionError("BOTTOM has no max-plus inverse")
    return -a


# --------------------------------------------------------------------------
# raw helpers: rows are lists/tuples of int numerators or None

def _rescale_rows(rows, factor):
    if factor == 1:
        return rows
    return tuple(tuple(None if x is None else x * factor for x in row)
                 for row in rows)


def _reduce(rows, den):
    vals = [x for row in rows for x in row if x is not None]
    if not vals:
        return tuple(tuple(row) for row in rows), 1
    g = math.gcd(den, *vals)
    if g == 1:
        return tuple(tuple(row) for row in rows), den
    return (tuple(tuple(None if x is None else x // g for x in row)
                  for row in rows), den // g)


def _to_raw(values: Sequence[Scalar]):
    den = 1
    for v in values:
        if v is not BOTTOM:
            den = den * v.denominator // math.gcd(den, v.denominator)
    nums = [None if v is BOTTOM else v.numerator * (den // v.denominator)
            for v in values]
    return nums, den


def _mul_rows(arows, bcols):
    out = []
    for row in arows:
        out_row = []
        for col in bcols:
            best = None
            for x, y in zip(row, col):
                if x is not None and y is not None:
                    s = x + y
                    if best is None or s > best:
                        best = s
            out_row.append(best)
        out.append(out_row)
    return out


class Matrix:
    """Square max-plus matrix with exact entries.  Immutable."""

    __slots__ = ("n", "_num", "_den", "_hash")

    def __init__(self, rows: Iterable[Iterable[ScalarLike]]):
        rows = [[scalar(x) for x in row] for row in rows]
        n = len(rows)
        if n == 0:
            raise DimensionError("matrix dimension must be positive")
        if any(len(r) != n for r in rows):
            raise DimensionError("matrix must be square")
        flat, den = _to_raw([x for r in rows for x in r])
        num = [flat[i * n:(i + 1) * n] for i in range(n)]
        self._set(n, num, den)

    def _set(self, n, num, den):
        num, den = _reduce(num, den)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "_num", num)
        object.__setattr__(self, "_den", den)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, num, den) -> "Matrix":
        m = cls.__new__(cls)
        m._set(len(num), num, den)
        return m

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    def __reduce__(self):
        return (Matrix._raw, (self._num, self._den))

    # -- constructors -----------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._raw([[0 if i == j else None for j in range(n)]
                         for i in range(n)], 1)

    @classmethod
    def zeros(cls, n: int) -> "Matrix":
        """All-BOTTOM matrix (the max-plus zero matrix)."""
        return cls._raw([[None] * n for _ in range(n)], 1)

    @classmethod
    def from_function(cls, n: int, f) -> "Matrix":
        return cls([[f(i, j) for j in range(n)] for i in range(n)])

    # -- access -----------------------------------------------------------
    def __getitem__(self, ij) -> Scalar:
        i, j = ij
        x = self._num[i][j]
        return BOTTOM if x is None else Fraction(x, self._den)

    def rows(self) -> list[list[Scalar]]:
        d = self._den
        return [[BOTTOM if x is None else Fraction(x, d) for x in row]
                for row in self._num]

    def is_finite(self, i: int, j: int) -> bool:
        return self._num[i][j] is not None

    def finite_entries(self) -> list[Scalar]:
        d = self._den
        return [Fraction(x, d) for row in self._num for x in row
                if x is not None]

    def support(self) -> list[tuple[int, int]]:
        return [(i, j) for i, row in enumerate(self._num)
                for j, x in enumerate(row) if x is not None]

    @property
    def all_finite(self) -> bool:
        return all(x is not None for row in self._num for x in row)

    @property
    def all_bottom(self) -> bool:
        return all(x is None for row in self._num for x in row)

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.n == other.n and self._den == other._den
                and self._num == other._num)

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash",
                               hash((self.n, self._den, self._num)))
        return self._hash

    def __le__(self, other: "Matrix") -> bool:
        """Entrywise order (BOTTOM below everything)."""
        return not _entrywise_violations(self, other, first_only=True)

    def __ge__(self, other: "Matrix") -> bool:
        return other.__le__(self)

    def __repr__(self):
        return f"Matrix({[[str(x) for x in r] for r in self.rows()]})"

    def __str__(self):
        cells = [[_fmt(x) for x in r] for r in self.rows()]
        w = max(len(c) for r in cells for c in r)
        return "\n".join(" ".join(c.rjust(w) for c in r) for r in cells)

    # -- algebra (operator sugar) -----------------------------------------
    def __matmul__(self, other):
        if isinstance(other, Vector):
            return mat_vec(self, other)
        return mat_mul(self, other)

    def __or__(self, other):
        return mat_oplus(self, other)


class Vector:
    """Max-plus column vector with exact entries.  Immutable."""

    __slots__ = ("n", "_num", "_den")

    def __init__(self, values: Iterable[ScalarLike]):
        vals = [scalar(x) for x in values]
        if not vals:
            raise DimensionError("vector dimension must be positive")
        nums, den = _to_raw(vals)
        self._set(nums, den)

    def _set(self, nums, den):
        (row,), den = _reduce([nums], den)
        object.__setattr__(self, "n", len(row))
        object.__setattr__(self, "_num", row)
        object.__setattr__(self, "_den", den)

    @classmethod
    def _raw(cls, nums, den) -> "Vector":
        v = cls.__new__(cls)
        v._set(list(nums), den)
        return v

    def __setattr__(self, name, value):
        raise AttributeError("Vector is immutable")

    def __reduce__(self):
        return (Vector._raw, (self._num, self._den))

    @classmethod
    def constant(cls, n: int, value: ScalarLike = 0) -> "Vector":
        return cls([value] * n)

    def __getitem__(self, i) -> Scalar:
        x = self._num[i]
        return BOTTOM if x is None else Fraction(x, self._den)

    def __len__(self):
        return self.n

    def __iter__(self):
        return iter(self.values())

    def values(self) -> list[Scalar]:
        return [BOTTOM if x is None else Fraction(x, self._den)
                for x in self._num]

    @property
    def all_finite(self) -> bool:
        return all(x is not None for x in self._num)

    def __eq__(self, other):
        if not isinstance(other, Vector):
            return NotImplemented
        return self._den == other._den and self._num == other._num

    def __hash__(self):
        return hash((self._den, self._num))

    def __le__(self, other: "Vector") -> bool:
        a, b, _ = _common(self._num, self._den, other._num, other._den)
        return all(x is None or (y is not None and x <= y)
                   for x, y in zip(a, b))

    def __ge__(self, other):
        return other.__le__(self)

    def __repr__(self):
        return f"Vector({[str(x) for x in self.values()]})"


def _fmt(x: Scalar) -> str:
    if x is BOTTOM:
        return "*"
    return str(x.numerator) if x.denominator == 1 else str(x)


def _common(a, ad, b, bd):
    """Bring two raw containers onto a common denominator (1-level lists)."""
    if ad == bd:
        return a, b, ad
    L = ad * bd // math.gcd(ad, bd)
    fa, fb = L // ad, L // bd
    a = [None if x is None else x * fa for x in a] if fa != 1 else a
    b = [None if x is None else x * fb for x in b] if fb != 1 else b
    return a, b, L


def _common_rows(A: Matrix, B: Matrix):
    if A._den == B._den:
        return A._num, B._num, A._den
    L = A._den * B._den // math.gcd(A._den, B._den)
    return (_rescale_rows(A._num, L // A._den),
            _rescale_rows(B._num, L // B._den), L)


def _check_dims(A, B):
    if A.n != B.n:
        raise DimensionError(f"dimension mismatch: {A.n} vs {B.n}")


# --------------------------------------------------------------------------
# matrix operations

def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    """Max-plus product: ``(AB)_ij = max_k (a_ik + b_kj)``."""
    _check_dims(A, B)
    an, bn, den = _common_rows(A, B)
    return Matrix._raw(_mul_rows(an, list(zip(*bn))), den)


def mat_oplus(A: Matrix, B: Matrix) -> Matrix:
    """Entrywise maximum."""
    _check_dims(A, B)
    an, bn, den = _common_rows(A, B)
    rows = []
    for ra, rb in zip(an, bn):
        rows.append([y if x is None else x if y is None else max(x, y)
                     for x, y in zip(ra, rb)])
    return Matrix._raw(rows, den)


def scalar_times(s: Scalar, A: Matrix) -> Matrix:
    """``s ⊗ A``: add the scalar to every finite entry."""
    if s is BOTTOM:
        return Matrix.zeros(A.n)
    q = s.denominator
    L = A._den * q // math.gcd(A._den, q)
    fa = L // A._den
    add = s.numerator * (L // q)
    rows = [[None if x is None else x * fa + add for x in row]
            for row in A._num]
    return Matrix._raw(rows, L)


def identity(n: int) -> Matrix:
    return Matrix.identity(n)


def mat_power(A: Matrix, t: int, method: str = "squaring") -> Matrix:
    """``A^t`` with ``A^0 = I``.

    ``method`` is ``"squaring"`` (repeated squaring) or ``"iterate"``
    (``t`` successive left multiplications); both give identical results.
    """
    if t < 0:
        raise ValueError("power must be nonnegative")
    if method == "iterate":
        P = Matrix.identity(A.n)
        for _ in range(t):
            P = mat_mul(A, P)
        return P
    if method != "squaring":
        raise ValueError(f"unknown method {method!r}")
    result = Matrix.identity(A.n)
    base = A
    while t:
        if t & 1:
            result = mat_mul(result, base)
        t >>= 1
        if t:
            base = mat_mul(base, base)
    return result


def powers(A: Matrix, start: Matrix | None = None):
    """Yield ``A^0, A^1, A^2, ...`` (or ``start, A start, ...``) forever."""
    P = Matrix.identity(A.n) if start is None else start
    while True:
        yield P
        P = mat_mul(A, P)


def mat_vec(A: Matrix, v: Vector) -> Vector:
    if A.n != v.n:
        raise DimensionError(f"dimension mismatch: {A.n} vs {v.n}")
    if A._den == v._den:
        an, vn, den = A._num, v._num, A._den
    else:
        den = A._den * v._den // math.gcd(A._den, v._den)
        an = _rescale_rows(A._num, den // A._den)
        vn = [None if x is None else x * (den // v._den) for x in v._num]
    out = _mul_rows(an, [vn])
    return Vector._raw([r[0] for r in out], den)


def vec_oplus(u: Vector, v: Vector) -> Vector:
    a, b, den = _common(u._num, u._den, v._num, v._den)
    return Vector._raw([y if x is None else x if y is None else max(x, y)
                        for x, y in zip(a, b)], den)


def scalar_times_vec(s: Scalar, v: Vector) -> Vector:
    if s is BOTTOM:
        return Vector._raw([None] * v.n, 1)
    return Vector([otimes(s, x) for x in v.values()])


def orbit(A: Matrix, v: Vector, t: int) -> Vector:
    """``A^t ⊗ v`` by ``t`` successive matrix-vector products."""
    if A.n != v.n:
        raise DimensionError(f"dimension mismatch: {A.n} vs {v.n}")
    if t < 0:
        raise ValueError("t must be nonnegative")
    for _ in range(t):
        v = mat_vec(A, v)
    return v


def kleene_star(A: Matrix) -> Matrix:
    """``A* = I ⊕ A ⊕ A^2 ⊕ ...``, computed by Floyd-Warshall.

    Raises :class:`DivergentStarError` (with a positive-mean cycle) if some
    cycle of the digraph of ``A`` has positive weight.
    """
    n = A.n
    d = [list(row) for row in A._num]
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if dik is None:
                continue
            di = d[i]
            for j in range(n):
                dkj = dk[j]
                if dkj is not None:
                    s = dik + dkj
                    if di[j] is None or s > di[j]:
                        di[j] = s
    for i in range(n):
        if d[i][i] is not None and d[i][i] > 0:
            from .spectral import critical_cycle, max_cycle_mean
            raise DivergentStarError(critical_cycle(A), max_cycle_mean(A))
        if d[i][i] is None or d[i][i] < 0:
            d[i][i] = 0
    return Matrix._raw(d, A._den)


def star_series(A: Matrix) -> Matrix:
    """``I ⊕ A ⊕ ... ⊕ A^{n-1}`` by explicit powers (reference path)."""
    S = Matrix.identity(A.n)
    P = S
    for _ in range(A.n - 1):
        P = mat_mul(A, P)
        S = mat_oplus(S, P)
    return S


def matrix_norm(A: Matrix) -> Fraction:
    """Largest minus smallest finite entry."""
    vals = A.finite_entries()
    if not vals:
        raise ValueError("matrix norm undefined: no finite entry")
    return max(vals) - min(vals)


def vector_norm(v: Vector) -> Fraction:
    vals = [x for x in v.values() if x is not BOTTOM]
    if not vals:
        raise ValueError("vector norm undefined: no finite entry")
    return max(vals) - min(vals)


def support_nodes(B: Matrix) -> frozenset[int]:
    """Indices whose row or column contains a finite entry."""
    nodes = set()
    for i, j in B.support():
        nodes.add(i)
        nodes.add(j)
    return frozenset(nodes)


def support_size(B: Matrix) -> int:
    return len(support_nodes(B))


def max_entry(A: Matrix) -> Scalar:
    vals = A.finite_entries()
    return max(vals) if vals else BOTTOM


def min_entry(A: Matrix) -> Scalar:
    vals = A.finite_entries()
    return min(vals) if vals else BOTTOM


def subordinate(A: Matrix, removed: Iterable[int]) -> Matrix:
    """Set every entry in the rows and columns of ``removed`` to BOTTOM."""
    rem = set(removed)
    rows = [[None if (i in rem or j in rem) else x
             for j, x in enumerate(row)] for i, row in enumerate(A._num)]
    return Matrix._raw(rows, A._den)


def restrict_edges(A: Matrix, edges) -> Matrix:
    """Keep only the entries at ``edges``."""
    keep = set(edges)
    rows = [[x if (i, j) in keep else None for j, x in enumerate(row)]
            for i, row in enumerate(A._num)]
    return Matrix._raw(rows, A._den)


def diagonal_similarity(A: Matrix, x: Sequence[Scalar]) -> Matrix:
    """``D^- A D`` with ``D = diag(x)``: entry (i,j) becomes a_ij - x_i + x_j."""
    if len(x) != A.n:
        raise DimensionError("scaling vector has wrong length")
    if any(v is BOTTOM for v in x):
        raise ValueError("scaling vector must be finite")
    return Matrix([[otimes(A[i, j], x[j] - x[i]) if A.is_finite(i, j)
                    else BOTTOM for j in range(A.n)] for i in range(A.n)])


def _entrywise_violations(A: Matrix, B: Matrix, first_only=False):
    """Positions (i, j) where A_ij > B_ij."""
    _check_dims(A, B)
    an, bn, _ = _common_rows(A, B)
    out = []
    for i, (ra, rb) in enumerate(zip(an, bn)):
        for j, (x, y) in enumerate(zip(ra, rb)):
            if x is not None and (y is None or x > y):
                out.append((i, j))
                if first_only:
                    return out
    return out


def entrywise_violations(A: Matrix, B: Matrix) -> list[tuple[int, int]]:
    return _entrywise_violations(A, B)


def differing_entries(A: Matrix, B: Matrix) -> list[tuple[int, int]]:
    _check_dims(A, B)
    an, bn, _ = _common_rows(A, B)
    return [(i, j) for i, (ra, rb) in enumerate(zip(an, bn))
            for j, (x, y) in enumerate(zip(ra, rb)) if x != y]
