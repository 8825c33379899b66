import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import entries, matrices, square_pairs
from weakcsr.core import (BOTTOM, DimensionError, DivergentStarError, Matrix, Vector,
                          diagonal_similarity, kleene_star, mat_mul, mat_oplus,
                          mat_power, mat_vec, matrix_norm, max_entry, orbit, oplus,
                          otimes, scalar, scalar_times, star_series, subordinate,
                          support_size, vector_norm)
from weakcsr.spectral import max_cycle_mean


def walk_max(A: Matrix, i, j, length):
    """Heaviest walk of exactly ``length`` edges by enumeration."""
    best = BOTTOM
    for mid in itertools.product(range(A.n), repeat=length - 1):
        path = (i, *mid, j)
        w = Fraction(0)
        for a, b in zip(path, path[1:]):
            if A[a, b] is BOTTOM:
                break
            w += A[a, b]
        else:
            best = w if best is BOTTOM else max(best, w)
    return best


def test_scalar_semiring_units():
    assert oplus(BOTTOM, 3) == 3
    assert otimes(BOTTOM, 3) is BOTTOM
    assert otimes(Fraction(2), Fraction(-5)) == -3
    assert scalar("-inf") is BOTTOM and scalar("-1/2") == Fraction(-1, 2)


def test_identity_is_neutral(a5):
    assert mat_mul(Matrix.identity(5), a5) == a5 == mat_mul(a5, Matrix.identity(5))


def test_upper_triangular_idempotent():
    A = Matrix([[0, -1], [BOTTOM, 0]])
    assert mat_mul(A, A) == A


def test_a5_square_matches_walk_enumeration(a5):
    sq = mat_power(a5, 2)
    for i in range(5):
        for j in range(5):
            assert sq[i, j] == walk_max(a5, i, j, 2)
    # heaviest 2-walk from node 1 to node 4 is 1 -> 3 -> 4
    assert sq[0, 3] == -4


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        mat_mul(Matrix.identity(2), Matrix.identity(3))


def test_power_basics():
    A = Matrix([[3]])
    assert mat_power(A, 4) == Matrix([[12]])
    assert mat_power(A, 0) == Matrix.identity(1)


def test_orbit(a5):
    v = Vector.constant(5, 0)
    assert orbit(a5, v, 0) == v
    assert orbit(Matrix.identity(5), Vector([1, 2, 3, 4, 5]), 7) == Vector([1, 2, 3, 4, 5])
    P = mat_power(a5, 3)
    assert orbit(a5, v, 3) == Vector([max(P.rows()[i]) for i in range(5)])


def test_kleene_star_examples(a5):
    assert kleene_star(Matrix.zeros(3)) == Matrix.identity(3)
    assert kleene_star(Matrix([[BOTTOM, -1], [BOTTOM, BOTTOM]])) == Matrix([[0, -1], [BOTTOM, 0]])
    S = kleene_star(a5)
    assert S[3, 0] == -3
    best = max(walk_max(a5, 3, 0, k) for k in range(1, 5) if walk_max(a5, 3, 0, k) is not BOTTOM)
    assert S[3, 0] == best


def test_kleene_star_diverges_with_witness():
    A = Matrix([[BOTTOM, 2], [-1, BOTTOM]])
    with pytest.raises(DivergentStarError) as exc:
        kleene_star(A)
    assert exc.value.mean == Fraction(1, 2)


def test_norms(a5):
    assert matrix_norm(a5) == 7
    assert matrix_norm(Matrix([[1, BOTTOM], [-2, 0]])) == 3
    assert matrix_norm(Matrix([[4, 4], [4, BOTTOM]])) == 0
    assert vector_norm(Vector([3, 3, 3])) == 0
    with pytest.raises(ValueError):
        matrix_norm(Matrix.zeros(2))


def test_support_size(a5):
    assert support_size(Matrix.zeros(3)) == 0
    assert support_size(subordinate(a5, {0, 1})) == 3
    assert support_size(Matrix([[BOTTOM, BOTTOM], [BOTTOM, 5]])) == 1


def test_exact_rationals_keep_structure():
    A = Matrix([[Fraction(1, 3), Fraction(-1, 6)], [BOTTOM, Fraction(2, 3)]])
    B = mat_power(A, 3)
    assert B[0, 0] == 1 and B[1, 1] == 2
    assert B[0, 1] == Fraction(-1, 6) + 2 * Fraction(2, 3)
    assert hash(B) == hash(Matrix(B.rows()))


# ---------------------------------------------------------------- properties

@given(square_pairs())
def test_mul_associative(abc):
    A, B, C = abc
    assert mat_mul(mat_mul(A, B), C) == mat_mul(A, mat_mul(B, C))


@given(square_pairs())
def test_mul_distributes_over_oplus(abc):
    A, B, C = abc
    assert mat_mul(A, mat_oplus(B, C)) == mat_oplus(mat_mul(A, B), mat_mul(A, C))


@given(matrices(), st.integers(0, 6), st.integers(0, 6))
def test_power_additive(A, s, t):
    assert mat_power(A, s + t) == mat_mul(mat_power(A, s), mat_power(A, t))
    assert mat_power(A, s, method="iterate") == mat_power(A, s)


@given(matrices(n_max=5))
def test_power_entries_are_heaviest_walks(A):
    P = mat_power(A, 3)
    for i in range(A.n):
        for j in range(A.n):
            assert P[i, j] == walk_max(A, i, j, 3)


@given(matrices())
def test_star_equals_truncated_series(A):
    lam = max_cycle_mean(A)
    if lam is not BOTTOM and lam > 0:
        with pytest.raises(DivergentStarError):
            kleene_star(A)
        return
    S = kleene_star(A)
    assert S == star_series(A)
    acc = Matrix.identity(A.n)
    for k in range(1, A.n):
        acc = mat_oplus(acc, mat_power(A, k))
    assert S == acc
    assert mat_mul(S, S) == S


@given(matrices(), st.integers(-5, 5))
def test_scalar_homogeneity(A, c):
    assert scalar_times(Fraction(c), mat_power(A, 2)) == \
        mat_mul(scalar_times(Fraction(c), A), A)


@given(matrices(n_min=2), st.data())
def test_diagonal_similarity_preserves_cycle_mean(A, data):
    x = [Fraction(data.draw(st.integers(-5, 5))) for _ in range(A.n)]
    assert max_cycle_mean(diagonal_similarity(A, x)) == max_cycle_mean(A)


@given(matrices(), st.data())
def test_mat_vec_matches_column_product(A, data):
    v = Vector([data.draw(entries) for _ in range(A.n)])
    col = Matrix([[v[i]] + [BOTTOM] * (A.n - 1) for i in range(A.n)])
    prod = mat_mul(A, col)
    assert mat_vec(A, v).values() == [prod[i, 0] for i in range(A.n)]


@given(matrices())
def test_max_entry_dominates(A):
    m = max_entry(A)
    assert all(x <= m for x in A.finite_entries()) or m is BOTTOM
