from fractions import Fraction

from hypothesis import given, settings

from conftest import irreducible_matrices, vectors
from weakcsr.bounds import (DM_EXPLORATION_COUNTEREXAMPLE, EP, T, T1, T2, T2V,
                            critical_ep, ep_bounds, global_transient_bound,
                            literature_bounds, scheme_bounds, t1_bounds, t1_bounds_ct,
                            t1_from_tcr, t2_bounds, t2v_bounds, tcr_bound)
from weakcsr.core import Matrix, Vector
from weakcsr.csr import (CYCLE_THRESHOLD, HARTMANN_ARGUELLES, NACHTIGALL, SCHEMES,
                         csr_terms, run_scheme)
from weakcsr.digraph import cyclicity
from weakcsr.generators import cycle_matrix, wielandt_matrix
from weakcsr.oracle import exact_ep, exact_t1, exact_t2, exact_transient
from weakcsr.spectral import critical_graph

LOOP = Matrix([[0]])


def test_t1_bounds_on_a5(a5):
    for s in (NACHTIGALL, HARTMANN_ARGUELLES):
        rep = t1_bounds(a5, s)
        assert rep.get("t1_wielandt").value == 17
        assert rep.get("t1_dulmage_mendelsohn").value == 8
        assert rep.get("t1_girth_cabdrive").value == 8
        assert rep.best(T1) >= 2
    assert t1_bounds(a5).get("t1_girth_cabdrive").params["d"] == 4


def test_t1_bounds_on_single_loop():
    for s in SCHEMES:
        rep = scheme_bounds(LOOP, run_scheme(LOOP, s))
        assert all(e.ceiling <= 1 for e in rep.family(T1) if e.applicable)
    assert global_transient_bound(LOOP).ceiling == 0


def test_wielandt_bound_is_tight():
    A = wielandt_matrix(4)
    assert t1_bounds(A).get("t1_wielandt").value == 10 == exact_transient(A).value


def test_t1_ct_on_boolean_cycle():
    A = cycle_matrix(5)
    rep = t1_bounds_ct(A)
    assert all(e.applicable and e.value >= 0 for e in rep.family(T1))
    assert exact_t1(A, run_scheme(A, CYCLE_THRESHOLD), csr_terms(A)).value == 0


def test_t1_ct_on_a5(a5):
    rep = t1_bounds_ct(a5)
    assert [rep.get(k).value for k in ("t1ct_wielandt", "t1ct_circumference",
                                       "t1ct_cabdrive")] == [17, 25, 45]


def test_cycle_removal_formulas():
    n, c, d = 6, 5, 4
    assert tcr_bound("arith", gamma=1, n=n, n1=n) == n - 1
    assert tcr_bound("ha", gamma=n, n=n, l=n, c=c, d=d) == (n - 1) * c + d + n
    assert tcr_bound("cbfn", gamma=1, c=c, d=d) == 2 * d
    assert tcr_bound("ha_wielandt", n=n) == n * n - n + 1


def test_tcr_to_t1():
    assert t1_from_tcr([1], [2 * 4], [0]) == 8
    assert t1_from_tcr([1, 1], [3, 7], [0, 0]) == 7


def test_ep_bounds_examples(a5):
    crit = critical_graph(LOOP)
    assert ep_bounds(crit, crit.components[0]).get("ep_girth_cyclicity").value == 0
    crit = critical_graph(a5)
    comp = crit.components[0]
    assert ep_bounds(crit, comp).get("ep_girth_cyclicity").value == 2
    assert exact_ep(crit.graph, comp, 1) == 0
    assert critical_ep(crit) == (0, "exact")
    crit = critical_graph(cycle_matrix(4))
    assert exact_ep(crit.graph, crit.components[0], 4) == 0


def test_t2_bounds_when_b_vanishes():
    A = wielandt_matrix(4)
    for s in SCHEMES:
        r = run_scheme(A, s)
        rep = t2_bounds(A, r)
        assert rep.get("t2_acyclic_cabdrive").value == 1
        assert not rep.get("t2_acyclic_size").applicable
        assert rep.get("t2_empty_b").value == 0 == exact_t2(A, r, csr_terms(A)).value


def test_t2v_examples(a5):
    r = run_scheme(a5, NACHTIGALL)
    v = Vector.constant(5, 0)
    rep = t2v_bounds(a5, r, v)
    assert rep.get("t2v_general").value == 28
    assert rep.get("t2v_general").value == Fraction(4 * 7, 1)
    A = wielandt_matrix(3)
    rA = run_scheme(A, NACHTIGALL)
    assert t2v_bounds(A, rA, Vector([0, 1, 2])).best(T2V) == t2_bounds(A, rA).best(T2)


def test_t2_bests_on_a5(a5):
    got = [scheme_bounds(a5, run_scheme(a5, s)).best_value(T2) for s in SCHEMES]
    assert got == [56, 28, Fraction(56, 3)]


def test_literature_bounds_on_a5(a5):
    rep = literature_bounds(a5)
    assert rep.get("lit_ha_matrix").value == 175
    syk = rep.get("lit_syk")
    assert not syk.applicable and "BOTTOM" in syk.reason


def test_global_bound_on_a5(a5):
    g = global_transient_bound(a5)
    assert all(rep.best(T) >= 5 for rep in g.per_scheme.values())
    assert g.best == Fraction(56, 3) and g.best_scheme == CYCLE_THRESHOLD
    assert g.best < literature_bounds(a5).get("lit_ha_matrix").value


def test_boolean_global_bound_is_t1_dominated():
    A = wielandt_matrix(5)
    g = global_transient_bound(A)
    for rep in g.per_scheme.values():
        assert rep.best(T2) == 0 and rep.best(T) == rep.best(T1)


def test_fallback_parameters_are_flagged(a5):
    rep = t1_bounds(a5, exact_params=False)
    assert rep.get("t1_girth_cabdrive").fallback
    assert not t1_bounds(a5).get("t1_girth_cabdrive").fallback
    assert not rep.get("t1_dulmage_mendelsohn").fallback


def test_aggregate_exploration_formula_counterexample():
    A = Matrix([list(r) for r in DM_EXPLORATION_COUNTEREXAMPLE])
    r = run_scheme(A, NACHTIGALL)
    rep = t1_bounds(A)
    stated = rep.get("t1_dm_exploration")
    assert stated.value == 0 and stated.excluded
    assert exact_t1(A, r, csr_terms(A)).value == 2 == exact_transient(A).value
    assert rep.best(T1) >= 2
    assert rep.get("t1_dm_exploration_componentwise").ceiling >= 2


# ---------------------------------------------------------------- properties

@settings(max_examples=40)
@given(irreducible_matrices(n_max=4))
def test_bounds_are_sound(A):
    triple = csr_terms(A)
    TA = exact_transient(A).value
    for s in SCHEMES:
        r = run_scheme(A, s)
        rep = scheme_bounds(A, r)
        exact = {T1: exact_t1(A, r, triple).value, T2: exact_t2(A, r, triple).value}
        for e in rep.entries:
            if e.applicable and not e.excluded and e.family in exact:
                assert e.ceiling >= exact[e.family], e.name
        assert rep.best(T) >= TA


@settings(max_examples=30)
@given(irreducible_matrices(n_max=4).flatmap(lambda A: vectors(A.n).map(lambda v: (A, v))))
def test_vector_bounds_are_sound(Av):
    A, v = Av
    triple = csr_terms(A)
    for s in SCHEMES:
        r = run_scheme(A, s)
        rep = t2v_bounds(A, r, v)
        assert rep.best(T2V) >= exact_t2(A, r, triple, v).value


@given(irreducible_matrices(n_max=6))
def test_ep_bounds_dominate_exact(A):
    crit = critical_graph(A)
    for comp in crit.components:
        g = crit.graph.subgraph(comp)
        ex = exact_ep(crit.graph, comp, cyclicity(g))
        for e in ep_bounds(crit, comp).family(EP):
            assert e.ceiling >= ex, e.name


def test_bound_rows_have_formula_and_params(a5):
    for s in SCHEMES:
        for e in scheme_bounds(a5, run_scheme(a5, s), v=Vector.constant(5, 0)).entries:
            assert e.formula and e.name
            assert e.applicable or e.reason
