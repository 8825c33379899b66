from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given

from conftest import irreducible_matrices, matrices
from weakcsr.core import BOTTOM, Matrix, diagonal_similarity
from weakcsr.digraph import from_matrix
from weakcsr.generators import cycle_matrix
from weakcsr.spectral import (AcyclicMatrixError, ReducibleMatrixError,
                              critical_cycle, critical_graph, cut_balance_violations,
                              is_max_balanced, max_balance, max_cycle_mean, normalize,
                              select_representing, visualize)


def brute_cycles(A):
    H = nx.DiGraph()
    H.add_nodes_from(range(A.n))
    H.add_edges_from(from_matrix(A).edges)
    out = []
    for c in nx.simple_cycles(H):
        w = sum(A[c[k], c[(k + 1) % len(c)]] for k in range(len(c)))
        out.append((Fraction(w) / len(c), c))
    return out


def test_max_cycle_mean_examples(a5):
    assert max_cycle_mean(Matrix([[3]])) == 3
    upper = Matrix([[BOTTOM, 1, 2], [BOTTOM, BOTTOM, 3], [BOTTOM, BOTTOM, BOTTOM]])
    assert max_cycle_mean(upper) is BOTTOM
    assert max_cycle_mean(a5) == 0


def test_critical_graph_examples(a5):
    c = critical_graph(Matrix([[5, BOTTOM], [0, 1]]))
    assert c.nodes == {0} and c.edges == {(0, 0)}
    c = critical_graph(a5)
    assert c.nodes == {0, 1} and c.edges == {(0, 0), (0, 1), (1, 0), (1, 1)}
    two = Matrix([[BOTTOM, 1, BOTTOM, BOTTOM], [1, BOTTOM, -9, BOTTOM],
                  [BOTTOM, BOTTOM, BOTTOM, 2], [-9, BOTTOM, 0, BOTTOM]])
    c = critical_graph(two)
    assert c.lam == 1 and [set(x) for x in c.components] == [{0, 1}, {2, 3}]
    with pytest.raises(AcyclicMatrixError):
        critical_graph(Matrix([[BOTTOM]]))


def test_critical_cycle_witness(a5):
    cyc = critical_cycle(a5)
    assert cyc == (0,)


def test_visualize_examples(a5):
    s = visualize(a5)
    assert s.x.values() == [0] * 5 and s.scaled == a5
    s = visualize(Matrix([[5]]))
    assert s.x.values() == [0] and s.scaled == Matrix([[0]])
    s = visualize(Matrix([[BOTTOM, 2], [0, BOTTOM]]))
    assert s.lam == 1 and s.scaled[0, 1] == 0 and s.scaled[1, 0] == 0
    with pytest.raises(ReducibleMatrixError):
        visualize(Matrix([[0, 0], [BOTTOM, 0]]))


def test_max_balance_examples(a5):
    s = max_balance(a5)
    assert s.scaled == a5
    s = max_balance(Matrix([[BOTTOM, 3, BOTTOM], [BOTTOM, BOTTOM, -1], [1, BOTTOM, BOTTOM]]))
    assert s.scaled.finite_entries() == [0, 0, 0]
    assert is_max_balanced(Matrix([[BOTTOM, 0], [0, BOTTOM]]))
    assert is_max_balanced(cycle_matrix(4))
    assert is_max_balanced(a5)
    assert not is_max_balanced(Matrix([[BOTTOM, 0], [-1, BOTTOM]]))
    assert cut_balance_violations(Matrix([[BOTTOM, 0], [-1, BOTTOM]]))


def test_representing_subgraph_examples(a5):
    sub = select_representing(critical_graph(a5), "min_cycle")
    assert sub.nodes == {0} and sub.edges == {(0, 0)} and sub.gamma == 1
    full = select_representing(critical_graph(cycle_matrix(4)), "full")
    short = select_representing(critical_graph(cycle_matrix(4)), "min_cycle")
    assert full.edges == short.edges and full.gamma == short.gamma == 4
    two = Matrix([[BOTTOM, 0, BOTTOM, BOTTOM, BOTTOM],
                  [0, BOTTOM, -9, BOTTOM, BOTTOM],
                  [BOTTOM, BOTTOM, BOTTOM, 0, BOTTOM],
                  [BOTTOM, BOTTOM, BOTTOM, BOTTOM, 0],
                  [-9, BOTTOM, 0, BOTTOM, BOTTOM]])
    sub = select_representing(critical_graph(two), "min_cycle")
    assert sorted(sub.gammas) == [2, 3] and sub.gamma == 6


# ---------------------------------------------------------------- properties

@given(matrices(n_max=5))
def test_cycle_mean_matches_enumeration(A):
    cyc = brute_cycles(A)
    if not cyc:
        assert max_cycle_mean(A) is BOTTOM
        return
    lam = max(m for m, _ in cyc)
    assert max_cycle_mean(A) == lam
    crit_nodes = {v for m, c in cyc if m == lam for v in c}
    assert critical_graph(A).nodes == crit_nodes


@given(irreducible_matrices(n_max=5))
def test_visualization_properties(A):
    s = visualize(A)
    crit = critical_graph(A)
    lam, At = normalize(A)
    assert s.scaled == diagonal_similarity(At, s.x.values())
    assert all(x <= 0 for x in s.scaled.finite_entries())
    assert all(s.scaled[i, j] == 0 for i, j in crit.edges)


@given(irreducible_matrices(n_max=6))
def test_max_balance_output_is_balanced(A):
    s = max_balance(A)
    assert is_max_balanced(s.scaled)
    assert cut_balance_violations(s.scaled) == []
    assert max_cycle_mean(s.scaled) == 0
    assert critical_graph(s.scaled).edges == critical_graph(A).edges


@given(irreducible_matrices(n_max=5))
def test_representing_subgraph_is_inside_crit(A):
    crit = critical_graph(A)
    for mode in ("min_cycle", "full"):
        sub = select_representing(crit, mode)
        assert sub.edges <= crit.edges
        assert len(sub.components) == len(crit.components)
