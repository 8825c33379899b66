import random

import pytest
from hypothesis import given, strategies as st

from conftest import irreducible
from weakcsr.csr import SCHEMES, run_scheme
from weakcsr.generators import (SeparatorError, corpus_instance, random_irreducible,
                                scheme_separator, wielandt_matrix)
from weakcsr.spectral import max_cycle_mean


def test_default_separator_has_distinct_scheme_eigenvalues():
    A = scheme_separator()
    assert A.n == 5 and irreducible(A)
    assert max_cycle_mean(A) == 0
    assert [run_scheme(A, s).lambda_B for s in SCHEMES] == [-1, -2, -3]


def test_separator_reproduces_fixture(a5):
    assert scheme_separator(delta_ct=-7) == a5


def test_larger_separator():
    A = scheme_separator(sizes=(3, 2, 2, 2))
    assert A.n == 9
    assert [run_scheme(A, s).lambda_B for s in SCHEMES] == [-1, -2, -3]


@pytest.mark.parametrize("kwargs", [
    {"delta_ha": -10},
    {"lams": (0, -2, -1, -3)},
    {"sizes": (2, 0, 1, 1)},
])
def test_separator_rejects_infeasible_parameters(kwargs):
    with pytest.raises(SeparatorError):
        scheme_separator(**kwargs)


def test_wielandt_matrix_shape():
    A = wielandt_matrix(4)
    assert sorted(A.support()) == [(0, 1), (1, 2), (2, 3), (3, 0), (3, 1)]
    with pytest.raises(ValueError):
        wielandt_matrix(1)


def test_corpus_is_reproducible():
    assert corpus_instance(1, 17) == corpus_instance(1, 17)
    assert corpus_instance(1, 17) != corpus_instance(2, 17)


@given(st.integers(1, 7), st.integers(0, 10 ** 6), st.booleans())
def test_random_instances_are_irreducible(n, seed, finite):
    A = random_irreducible(n, random.Random(seed), all_finite=finite)
    assert A.n == n and irreducible(A)
    assert not finite or A.all_finite
