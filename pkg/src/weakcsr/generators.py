"""Instance generators."""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .core import BOTTOM, Matrix, Vector
from .csr import run_scheme
from .digraph import from_matrix, is_nontrivial, is_strongly_connected


def random_irreducible(n: int, rng: random.Random, weights=(-9, 9),
                       all_finite: bool = False, density: float | None = None) -> Matrix:
    """Random integer matrix whose digraph is strongly connected.

    Entries are present independently with probability ``density`` (drawn
    from [0.25, 1] when not given); draws are repeated until the digraph is
    strongly connected.
    """
    lo, hi = weights
    if density is None:
        density = rng.uniform(0.25, 1.0)
    while True:
        rows = [[rng.randint(lo, hi) if all_finite or rng.random() < density else BOTTOM
                 for _ in range(n)] for _ in range(n)]
        A = Matrix(rows)
        G = from_matrix(A)
        if is_strongly_connected(G) and is_nontrivial(G, G.nodes):
            return A


def random_vector(n: int, rng: random.Random, weights=(-9, 9)) -> Vector:
    return Vector([rng.randint(*weights) for _ in range(n)])


def instance_rng(seed: int, index: int) -> random.Random:
    """Independent stream for instance ``index`` so workers can regenerate it."""
    return random.Random(f"{seed}:{index}")


def corpus_instance(seed: int, index: int, n_max: int = 6, weights=(-9, 9),
                    finite_fraction: float = 0.2):
    """The ``index``-th instance of a seeded corpus: ``(A, v)``."""
    rng = instance_rng(seed, index)
    n = rng.randint(1, n_max)
    finite = rng.random() < finite_fraction
    A = random_irreducible(n, rng, weights, all_finite=finite)
    return A, random_vector(n, rng, weights)


def wielandt_matrix(n: int, weight=0) -> Matrix:
    """Digraph with the largest primitive exponent: the n-cycle plus a chord n -> 2."""
    if n < 2:
        raise ValueError("n must be at least 2")
    rows = [[BOTTOM] * n for _ in range(n)]
    for i in range(n - 1):
        rows[i][i + 1] = weight
    rows[n - 1][0] = weight
    rows[n - 1][1] = weight
    return Matrix(rows)


def cycle_matrix(n: int, weight=0) -> Matrix:
    rows = [[BOTTOM] * n for _ in range(n)]
    for i in range(n):
        rows[i][(i + 1) % n] = weight
    return Matrix(rows)


# --------------------------------------------------------------------------
# instances separating the three schemes

class SeparatorError(ValueError):
    pass


def _separator(sizes, lams, d_ha, d_ct) -> Matrix:
    nc, nn, nh, nt = sizes
    lc, ln, lh, lt = lams
    n = sum(sizes)
    C = range(0, nc)
    N = range(nc, nc + nn)
    H = range(nc + nn, nc + nn + nh)
    T = range(nc + nn + nh, n)
    rows = [[BOTTOM] * n for _ in range(n)]
    for block, lam in ((C, lc), (N, ln), (H, lh), (T, lt)):
        for i in block:
            for j in block:
                rows[i][j] = lam
    for i in C:
        for j in N:
            rows[i][j] = rows[j][i] = ln
    rows[N[-1]][H[0]] = d_ha
    rows[H[0]][C[0]] = d_ha
    for i in T:
        for j in range(n):
            if j not in T:
                rows[i][j] = rows[j][i] = d_ct
    return Matrix(rows)


def scheme_separator(sizes=(2, 1, 1, 1), lams=(0, -1, -2, -3), delta_ha=None,
                     delta_ct=None, max_tries: int = 64) -> Matrix:
    """Four-block instance on which the three schemes give distinct λ(B).

    Blocks C, N, HA, CT are complete digraphs with loops whose weights are
    the given cycle means.  C and N are fully joined at weight λ_N; one path
    N -> HA -> C uses weight ``delta_ha``; every CT node is joined both ways
    to all other nodes at ``delta_ct``.  Unless given, ``delta_ha`` is the
    largest value that keeps the cycle through HA from forming a new
    threshold component, and ``delta_ct`` is lowered until the scheme
    eigenvalues come out as (λ_N, λ_HA, λ_CT).
    """
    sizes = tuple(int(s) for s in sizes)
    lams = tuple(Fraction(x) for x in lams)
    if len(sizes) != 4 or any(s < 1 for s in sizes):
        raise SeparatorError("need four block sizes, each at least 1")
    lc, ln, lh, lt = lams
    if not lc > ln > lh > lt:
        raise SeparatorError("cycle means must be strictly decreasing: C > N > HA > CT")
    ell = 1 + sizes[0] + sizes[1]
    s_max = Fraction((ell - 2) * (ln - lh), 2)
    if delta_ha is None:
        delta_ha = lh - s_max
    delta_ha = Fraction(delta_ha)
    if delta_ha > lh or lh - delta_ha > s_max:
        raise SeparatorError(
            f"delta_ha={delta_ha} infeasible: need {lh - s_max} <= delta_ha <= {lh}")
    n = sum(sizes)
    if delta_ct is not None:
        candidates = [Fraction(delta_ct)]
    else:
        # any cycle through a CT node and another block has at least two
        # delta_ct edges; this value forces every such mean below λ_CT
        safe = (n * lt - (n - 2) * lc) / 2
        safe = math.floor(safe) if math.floor(safe) < safe else safe - 1
        start = min(delta_ha, lt)
        start = math.floor(start) if start.denominator != 1 else start
        candidates = []
        x = Fraction(start)
        while x > safe and len(candidates) < max_tries:
            candidates.append(x)
            x -= 1
        candidates.append(Fraction(min(safe, start)))
    for d_ct in candidates:
        if d_ct > delta_ha:
            raise SeparatorError(f"delta_ct={d_ct} must not exceed delta_ha={delta_ha}")
        A = _separator(sizes, lams, delta_ha, d_ct)
        got = tuple(run_scheme(A, s).lambda_B for s in ("nacht", "ha", "ct"))
        if got == (ln, lh, lt):
            return A
    raise SeparatorError("no delta_ct value produced the requested scheme eigenvalues")
