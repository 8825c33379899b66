import math

import networkx as nx
import pytest
from hypothesis import given

from conftest import irreducible_matrices, matrices
from weakcsr.core import BOTTOM, Matrix
from weakcsr.digraph import (SearchLimitExceeded, boolean_index, cabdrive_bound,
                             cabdrive_exact, circumference, circumference_bound,
                             circumference_exact, cycle_mean, cyclicity,
                             enumerate_cycles, from_matrix, girth_per_scc,
                             index_bounds, index_bounds_from_params,
                             is_completely_reducible, max_girth, scc, shortest_cycle,
                             wielandt)
from weakcsr.generators import cycle_matrix, wielandt_matrix
from weakcsr.spectral import critical_graph


def nxgraph(G):
    H = nx.DiGraph()
    H.add_nodes_from(G.nodes)
    H.add_edges_from(G.edges)
    return H


def chain(n):
    rows = [[BOTTOM] * n for _ in range(n)]
    for i in range(n - 1):
        rows[i][i + 1] = 0
    return Matrix(rows)


def test_edges(a5):
    assert len(from_matrix(Matrix.zeros(3)).edges) == 0
    assert len(from_matrix(a5).edges) == 21
    G = from_matrix(Matrix.identity(3))
    assert G.edges == {(0, 0), (1, 1), (2, 2)} and all(G.weight(i, i) == 0 for i in range(3))


def test_scc_examples(a5):
    assert len(scc(from_matrix(cycle_matrix(4))).components) == 1
    assert [set(c) for c in scc(from_matrix(chain(3))).components] == [{0}, {1}, {2}]
    assert len(scc(from_matrix(a5)).components) == 1


def test_cyclicity_examples(a5):
    assert cyclicity(from_matrix(cycle_matrix(5))) == 5
    rows = cycle_matrix(5).rows()
    rows[2][2] = 0
    assert cyclicity(from_matrix(Matrix(rows))) == 1
    assert cyclicity(critical_graph(a5).graph) == 1
    with pytest.raises(ValueError):
        cyclicity(from_matrix(chain(3)))


def test_girth_examples(a5):
    assert list(girth_per_scc(from_matrix(cycle_matrix(4))).values()) == [4]
    assert max_girth(critical_graph(a5).graph) == 1
    assert shortest_cycle(from_matrix(a5), frozenset(range(5))) == (0,)


def test_cycle_enumeration_examples(a5):
    assert len(enumerate_cycles(from_matrix(cycle_matrix(3)))) == 1
    K3 = Matrix([[BOTTOM if i == j else 0 for j in range(3)] for i in range(3)])
    cycles = enumerate_cycles(from_matrix(K3))
    assert sorted(len(c) for c in cycles) == [2, 2, 2, 3, 3]
    G = from_matrix(a5)
    assert cycle_mean(G, (3,)) == -2 and (3,) in enumerate_cycles(G)


def test_enumeration_refuses_over_limit():
    with pytest.raises(SearchLimitExceeded, match="limit"):
        enumerate_cycles(from_matrix(cycle_matrix(6)), node_limit=5)


def test_circumference_and_cabdrive(a5):
    G = from_matrix(cycle_matrix(6))
    assert circumference_exact(G) == 6 and cabdrive_exact(G) == 5
    G = from_matrix(a5)
    assert circumference_exact(G) == 5 and cabdrive_exact(G) == 4
    H = from_matrix(chain(4))
    assert circumference_exact(H) == 0 and cabdrive_exact(H) == 3
    assert circumference_bound(G) == 5 and cabdrive_bound(G) == 4
    assert circumference(G, node_limit=3) == (5, False)


def test_boolean_index_examples():
    assert boolean_index(from_matrix(Matrix([[0]]))) == 0
    assert boolean_index(from_matrix(cycle_matrix(5))) == 0
    for n in (2, 3, 4, 5, 6):
        assert boolean_index(from_matrix(wielandt_matrix(n))) == wielandt(n)
    assert boolean_index(from_matrix(wielandt_matrix(4))) == 10


def test_wielandt_numbers():
    assert [wielandt(1), wielandt(2), wielandt(5)] == [0, 2, 17]


def test_index_bound_formulas():
    b = index_bounds_from_params(5, 1, 1)
    assert b.wielandt == 17 and b.dulmage_mendelsohn == 8
    assert index_bounds_from_params(1, 1, 1).wielandt == 0
    assert index_bounds_from_params(6, 6, 6).schwarz == 0
    assert index_bounds(from_matrix(cycle_matrix(6))).schwarz == 0


def test_completely_reducible():
    assert is_completely_reducible(from_matrix(Matrix.identity(2)))
    assert not is_completely_reducible(from_matrix(chain(2)))


# ---------------------------------------------------------------- networkx cross-checks

@given(matrices(n_max=6))
def test_scc_matches_networkx(A):
    G = from_matrix(A)
    ours = {frozenset(c) for c in scc(G).components}
    theirs = {frozenset(c) for c in nx.strongly_connected_components(nxgraph(G))}
    assert ours == theirs


@given(matrices(n_max=5))
def test_cycles_match_networkx(A):
    G = from_matrix(A)
    ours = [tuple(c) for c in enumerate_cycles(G)]
    theirs = list(nx.simple_cycles(nxgraph(G)))
    assert len(ours) == len(theirs)
    canon = lambda c: min(tuple(c[k:] + c[:k]) for k in range(len(c)))
    assert {canon(list(c)) for c in ours} == {canon(c) for c in theirs}


@given(irreducible_matrices(n_max=6))
def test_cyclicity_is_gcd_of_cycle_lengths(A):
    G = from_matrix(A)
    lengths = [len(c) for c in nx.simple_cycles(nxgraph(G))]
    assert cyclicity(G) == math.gcd(*lengths)
    assert max_girth(G) == min(lengths)
    assert circumference_exact(G) == max(lengths)


@given(irreducible_matrices(n_max=6))
def test_boolean_index_within_bounds(A):
    G = from_matrix(A)
    b = index_bounds(G)
    assert boolean_index(G) <= b.minimum()
