"""Closed-form transience bounds.

Every bound is an exact rational; its integer ceiling is a valid threshold.
Bounds that do not apply to an instance are kept in the report with the
reason, never dropped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .core import (BOTTOM, Matrix, Vector, mat_vec, matrix_norm, max_entry, min_entry,
                   support_nodes, vector_norm)
from .csr import (CYCLE_THRESHOLD, HARTMANN_ARGUELLES, NACHTIGALL, SCHEMES,
                  SchemeResult, csr_terms, run_scheme)
from .digraph import (DEFAULT_NODE_LIMIT, Digraph, cabdrive, cabdrive_bound,
                      circumference, circumference_bound, cyclicity,
                      enumerate_cycles, from_matrix, girth_per_scc,
                      index_bounds_from_params, max_girth, wielandt)
from .spectral import CriticalGraph, critical_graph

EP_EXACT_LIMIT = 64

# Smallest known instance where the aggregate form γ̂(n-2) + n - n_c + ep
# lies below the true T1: a critical 2-cycle with n = n_c = 2 gives 0, while
# T1 = T(A) = 2.
DM_EXPLORATION_COUNTEREXAMPLE = ((-2, -4), (9, 2))

T1 = "T1"
T2 = "T2"
T2V = "T2v"
T = "T"
EP = "ep"
LIT = "literature"


@dataclass(frozen=True)
class BoundEntry:
    name: str
    family: str
    formula: str
    value: Fraction | None
    params: dict = field(default_factory=dict)
    fallback: bool = False
    reason: str | None = None     # why the bound is inapplicable
    excluded: str | None = None   # why the value is reported but never used as a bound

    @property
    def applicable(self) -> bool:
        return self.value is not None

    @property
    def ceiling(self) -> int | None:
        if self.value is None:
            return None
        return max(0, math.ceil(self.value))


@dataclass
class BoundReport:
    entries: list = field(default_factory=list)

    def add(self, name, family, formula, value, params=None, fallback=False, reason=None,
            excluded=None):
        if value is not None:
            value = Fraction(value)
        self.entries.append(BoundEntry(name, family, formula, value, dict(params or {}),
                                       fallback, reason, excluded))

    def skip(self, name, family, formula, reason, params=None):
        self.add(name, family, formula, None, params, reason=reason)

    def extend(self, other: "BoundReport"):
        self.entries.extend(other.entries)
        return self

    def family(self, family: str) -> list:
        return [e for e in self.entries if e.family == family]

    def get(self, name: str) -> BoundEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def best_entry(self, family: str) -> BoundEntry | None:
        ok = [e for e in self.family(family) if e.applicable and not e.excluded]
        return min(ok, key=lambda e: e.value) if ok else None

    def best(self, family: str) -> int | None:
        e = self.best_entry(family)
        return None if e is None else e.ceiling

    def best_value(self, family: str) -> Fraction | None:
        e = self.best_entry(family)
        return None if e is None else e.value


# --------------------------------------------------------------------------
# graph parameters

@dataclass(frozen=True)
class Params:
    n: int
    c: int
    d: int
    c_exact: bool
    d_exact: bool

    @property
    def fallback(self) -> bool:
        return not (self.c_exact and self.d_exact)


def graph_parameters(G: Digraph, exact: bool = True,
                     node_limit: int = DEFAULT_NODE_LIMIT) -> Params:
    """Circumference and longest-path length, or their |G| / |G|-1 fallbacks."""
    if exact:
        c, ce = circumference(G, node_limit)
        d, de = cabdrive(G, node_limit)
    else:
        c, ce = circumference_bound(G), False
        d, de = cabdrive_bound(G), False
    return Params(len(G.nodes), c, d, ce, de)


def support_graph(B: Matrix) -> Digraph:
    return from_matrix(B, support_only=True)


def _crit_shape(crit: CriticalGraph):
    """(max girth, max cyclicity, node count) of the critical graph."""
    comps = crit.components
    girths = girth_per_scc(crit.graph)
    gammas = [cyclicity(crit.graph.subgraph(c)) for c in comps]
    return max(girths.values()), max(gammas), len(crit.nodes)


# --------------------------------------------------------------------------
# cycle removal thresholds and the combiner

TCR_KINDS = ("cbfn", "ha", "ha_wielandt", "arith")


def tcr_bound(kind: str, *, gamma: int | None = None, c: int | None = None,
              d: int | None = None, n: int | None = None, l: int | None = None,
              n1: int | None = None) -> int:
    """Upper bounds on the cycle removal threshold.

    ``cbfn``: (γ-1)c + (γ+1)d for a single node.
    ``ha``: (n-1-l+γ)c + d + l for a cycle of length l, γ dividing l.
    ``ha_wielandt``: n²-n+1 for a Hamiltonian cycle (strict variant).
    ``arith``: γn + n - n1 - 1 for any subgraph with n1 nodes.
    """
    if kind == "cbfn":
        return (gamma - 1) * c + (gamma + 1) * d
    if kind == "ha":
        if l % gamma:
            raise ValueError("gamma must divide the cycle length")
        return (n - 1 - l + gamma) * c + d + l
    if kind == "ha_wielandt":
        return n * n - n + 1
    if kind == "arith":
        return gamma * n + n - n1 - 1
    raise ValueError(f"unknown kind {kind!r}")


def cycle_presets(l: int, n: int, c: int, d: int) -> dict:
    """Per-cycle expressions: name -> (T_cr - l + 1, strict T_cr).

    ``ha_wielandt`` only applies to cycles of length n.
    """
    out = {
        "cbfn": ((l - 1) * (c - 1) + (l + 1) * d, (l - 1) * c + (l + 1) * d + 1),
        "ha": ((n - 1) * c + d + 1, n * c + d + 1),
        "arith": (l * (n - 2) + n, l * (n - 1) + n),
    }
    if l == n:
        out["ha_wielandt"] = (wielandt(n), n * n - n + 1)
    return out


def component_presets(gamma: int, n: int, c: int, d: int, size: int) -> dict:
    """Per-component expressions of T_cr - γ + 1 with γ the cyclicity."""
    return {
        "cbfn": (gamma - 1) * (c - 1) + (gamma + 1) * d,
        "arith": gamma * (n - 1) + n - size,
    }


def t1_from_tcr(gammas, tcr_values, ep_values) -> int:
    """max over components of T_cr - γ + 1 + ep."""
    return max(t - g + 1 + e for g, t, e in zip(gammas, tcr_values, ep_values))


def t1_from_tcr_ct(strict_tcr_values) -> int:
    """max over cycles of the strict cycle removal threshold."""
    return max(strict_tcr_values)


# --------------------------------------------------------------------------
# exploration penalty

def ep_bounds(crit: CriticalGraph, comp) -> BoundReport:
    """Bounds on the exploration penalty of one critical component."""
    G = crit.graph.subgraph(comp)
    size = len(comp)
    g = min(girth_per_scc(G).values())
    gamma = cyclicity(G)
    rep = BoundReport()
    p = {"size": size, "girth": g, "cyclicity": gamma}
    rep.add("ep_girth_cyclicity", EP, "2(g/γ)|G| - g/γ - 2g + γ",
            2 * (g // gamma) * size - g // gamma - 2 * g + gamma, p)
    ib = index_bounds_from_params(size, gamma, g)
    rep.add("ep_index_wielandt", EP, "Wi(|G|)", ib.wielandt, p)
    rep.add("ep_index_schwarz", EP, "γ Wi(r) + s, |G| = rγ + s", ib.schwarz, p)
    rep.add("ep_index_dulmage_mendelsohn", EP, "|G| + (|G|-2)g", ib.dulmage_mendelsohn, p)
    rep.add("ep_index_kim", EP, "γr + (r-2)g + s", ib.kim, p)
    ghat = max_girth(crit.graph)
    h = len(crit.components)
    nc = len(crit.nodes)
    rep.add("ep_aggregate_girth", EP, "n_c + (n_c - 2h) ĝ", nc + (nc - 2 * h) * ghat,
            {"n_c": nc, "h": h, "max_girth": ghat})
    return rep


def critical_ep_per_component(crit: CriticalGraph,
                              exact_limit: int = EP_EXACT_LIMIT) -> tuple[list, str]:
    """ep of each critical component at its own cyclicity, exact when small enough."""
    from .oracle import exact_ep
    vals, how = [], "exact"
    for comp in crit.components:
        if len(comp) <= exact_limit:
            vals.append(exact_ep(crit.graph, comp, cyclicity(crit.graph.subgraph(comp))))
        else:
            vals.append(ep_bounds(crit, comp).best(EP))
            how = "bound"
    return vals, how


def critical_ep(crit: CriticalGraph, exact_limit: int = EP_EXACT_LIMIT) -> tuple[int, str]:
    """ep(crit) = max over critical components."""
    vals, how = critical_ep_per_component(crit, exact_limit)
    return max(vals), how


# --------------------------------------------------------------------------
# T1

def t1_bounds(A: Matrix, scheme: str = NACHTIGALL, exact_params: bool = True,
              node_limit: int = DEFAULT_NODE_LIMIT, ep: int | None = None) -> BoundReport:
    """T1 bounds shared by the Nachtigall and Hartmann-Arguelles schemes."""
    if scheme not in (NACHTIGALL, HARTMANN_ARGUELLES, "nacht", "ha"):
        raise ValueError("these T1 bounds cover the Nachtigall and Hartmann-Arguelles schemes")
    crit = critical_graph(A)
    P = graph_parameters(from_matrix(A), exact_params, node_limit)
    n, c, d = A.n, P.c, P.d
    g, gam, nc = _crit_shape(crit)
    ep_src = "given"
    if ep is None:
        ep, ep_src = critical_ep(crit)
    base = {"n": n, "max_girth": g}
    cd = {**base, "c": c, "d": d, "c_exact": P.c_exact, "d_exact": P.d_exact}
    epp = {"max_cyclicity": gam, "n_c": nc, "ep": ep, "ep_source": ep_src}
    rep = BoundReport()
    rep.add("t1_wielandt", T1, "Wi(n)", wielandt(n), {"n": n})
    rep.add("t1_dulmage_mendelsohn", T1, "ĝ(n-2) + n", g * (n - 2) + n, base)
    rep.add("t1_girth_cabdrive", T1, "(ĝ-1)(c-1) + (ĝ+1)d",
            (g - 1) * (c - 1) + (g + 1) * d, cd, P.fallback)
    rep.add("t1_dm_exploration", T1, "γ̂(n-2) + n - n_c + ep",
            gam * (n - 2) + n - nc + ep, {"n": n, **epp},
            excluded="falsified: below T1 on a critical 2-cycle with n = n_c = 2")
    comps = crit.components
    gams = [cyclicity(crit.graph.subgraph(c)) for c in comps]
    eps = critical_ep_per_component(crit)[0] if ep_src != "given" else [ep] * len(comps)
    rep.add("t1_dm_exploration_componentwise", T1,
            "max over critical components of γ_l(n-1) + n - |crit_l| + ep_l",
            max(g_l * (n - 1) + n - len(c) + e for g_l, c, e in zip(gams, comps, eps)),
            {"n": n, "cyclicities": gams, "sizes": [len(c) for c in comps], "ep": eps})
    rep.add("t1_cb_exploration", T1, "(γ̂-1)(c-1) + (γ̂+1)d + ep",
            (gam - 1) * (c - 1) + (gam + 1) * d + ep, {**cd, **epp}, P.fallback)
    return rep


def t1_bounds_ct(A: Matrix, exact_params: bool = True,
                 node_limit: int = DEFAULT_NODE_LIMIT) -> BoundReport:
    """T1 bounds for the cycle threshold scheme."""
    P = graph_parameters(from_matrix(A), exact_params, node_limit)
    n, c, d = A.n, P.c, P.d
    p = {"n": n, "c": c, "d": d, "c_exact": P.c_exact, "d_exact": P.d_exact}
    rep = BoundReport()
    rep.add("t1ct_wielandt", T1, "Wi(n)", wielandt(n), {"n": n})
    rep.add("t1ct_circumference", T1, "(n-1)c + min(n, d+c+1)",
            (n - 1) * c + min(n, d + c + 1), p, P.fallback)
    rep.add("t1ct_cabdrive", T1, "(d+c-1)c + d + 1", (d + c - 1) * c + d + 1, p, P.fallback)
    return rep


def t1_table_instantiations(A: Matrix, sub, exact_params: bool = True,
                            node_limit: int = DEFAULT_NODE_LIMIT) -> dict:
    """Recover the T1 formulas by feeding cycle-removal presets to the combiner.

    ``sub`` is a min-cycle representing subgraph; returns name -> value for
    the per-cycle presets (exploration penalty of a cycle at its own length
    is zero).
    """
    P = graph_parameters(from_matrix(A), exact_params, node_limit)
    n = A.n
    out = {}
    for key in ("cbfn", "arith"):
        vals = []
        for comp, l in zip(sub.components, sub.gammas):
            vals.append(cycle_presets(l, n, P.c, P.d)[key][0] + l - 1)
        out[key] = t1_from_tcr(sub.gammas, vals, [0] * len(vals))
    return out


# --------------------------------------------------------------------------
# T2 and T2(v)

def _b_params(result: SchemeResult, exact_params, node_limit):
    GB = support_graph(result.B)
    nB = len(support_nodes(result.B))
    if nB == 0:
        return 0, True, 0
    if exact_params:
        dB, ok = cabdrive(GB, node_limit)
    else:
        dB, ok = cabdrive_bound(GB), False
    return dB, ok, nB


def _acyclic_b(rep, family, dB, dB_exact, nB, empty_b_value=None):
    p = {"d_B": dB, "d_B_exact": dB_exact, "n_B": nB}
    key = family.lower()
    rep.add(f"{key}_acyclic_cabdrive", family, "d_B + 1", dB + 1, p, not dB_exact)
    if nB >= 1:
        rep.add(f"{key}_acyclic_size", family, "n_B", nB, p)
        rep.skip(f"{key}_empty_b", family, "0 if CS^0R covers B^0 = I, else 1",
                 "B has finite entries", p)
    else:
        rep.skip(f"{key}_acyclic_size", family, "n_B",
                 "B has no finite entry, so n_B = 0 is below d_B + 1 = 1", p)
        # B^t vanishes for t >= 1, so only t = 0 can fail
        rep.add(f"{key}_empty_b", family, "0 if CS^0R covers B^0 = I, else 1",
                empty_b_value, p)


def _empty_b_check(A: Matrix, v: Vector | None = None) -> int:
    P = csr_terms(A).product(0)
    if v is None:
        return 0 if all(P[i, i] is not BOTTOM and P[i, i] >= 0 for i in range(A.n)) else 1
    Pv = mat_vec(P, v)
    return 0 if all(Pv[i] is not BOTTOM and Pv[i] >= v[i] for i in range(A.n)) else 1


_FINITE_T2 = [
    ("t2_finite", "long", "(2(λA - min a) + (λB - min b)) / (λA - λB)"),
    ("t2_finite", "short", "3‖A‖ / (λA - λB)"),
    ("t2_finite_cabdrive", "long", "2(λA - min a) / (λA - λB) + d_B"),
    ("t2_finite_cabdrive", "short", "2‖A‖ / (λA - λB) + d_B"),
]
_T2V_FORMULAS = {
    "t2v_general": "(‖v‖ + (n-1)‖A‖) / (λA - λB)",
    "t2v_finite_long": "(‖v‖ + (λA - min a) + (λB - min b)) / (λA - λB)",
    "t2v_finite_short": "(2‖A‖ + ‖v‖) / (λA - λB)",
}


def t2_bounds(A: Matrix, result: SchemeResult, exact_params: bool = True,
              node_limit: int = DEFAULT_NODE_LIMIT) -> BoundReport:
    rep = BoundReport()
    dB, dB_exact, nB = _b_params(result, exact_params, node_limit)
    lam, lb = result.lam, result.lambda_B
    ratio_names = [("t2_wielandt", "n²-n+1"), ("t2_cyclicity", "γ̂(n-1)+n"),
                   ("t2_cabdrive", "(γ̂-1)c+(γ̂+1)d")]
    if lb is BOTTOM:
        _acyclic_b(rep, T2, dB, dB_exact, nB, _empty_b_check(A) if nB == 0 else None)
        for name, k in ratio_names:
            for form in ("long", "short"):
                rep.skip(f"{name}_{form}", T2, k, "λ(B) is BOTTOM")
        for name, form, f in _FINITE_T2:
            rep.skip(f"{name}_{form}", T2, f, "λ(B) is BOTTOM")
        return rep
    if not lb < lam:
        raise AssertionError("subordinate matrix must have a smaller cycle mean")
    crit = critical_graph(A)
    _, gam, _ = _crit_shape(crit)
    P = graph_parameters(from_matrix(A), exact_params, node_limit)
    n, c, d = A.n, P.c, P.d
    delta = lam - lb
    amin, bmax, bmin = min_entry(A), max_entry(result.B), min_entry(result.B)
    norm = matrix_norm(A)
    p = {"n": n, "lambda_A": lam, "lambda_B": lb, "d_B": dB, "d_B_exact": dB_exact,
         "max_cyclicity": gam, "c": c, "d": d, "min_a": amin, "max_b": bmax,
         "norm_A": norm}
    ks = [n * n - n + 1, gam * (n - 1) + n, (gam - 1) * c + (gam + 1) * d]
    for (name, kf), K in zip(ratio_names, ks):
        fb = not dB_exact or (name == "t2_cabdrive" and P.fallback)
        long_v = (K * (lam - amin) + dB * (bmax - lb)) / delta
        short_v = K * norm / delta + dB
        rep.add(f"{name}_long", T2, f"(({kf})(λA - min a) + d_B(max b - λB)) / (λA - λB)",
                long_v, p, fb)
        rep.add(f"{name}_short", T2, f"({kf})‖A‖ / (λA - λB) + d_B", short_v, p, fb)
    if A.all_finite:
        rep.add("t2_finite_long", T2, "(2(λA - min a) + (λB - min b)) / (λA - λB)",
                (2 * (lam - amin) + (lb - bmin)) / delta, {**p, "min_b": bmin})
        rep.add("t2_finite_short", T2, "3‖A‖ / (λA - λB)", 3 * norm / delta, p)
        rep.add("t2_finite_cabdrive_long", T2, "2(λA - min a) / (λA - λB) + d_B",
                2 * (lam - amin) / delta + dB, p, not dB_exact)
        rep.add("t2_finite_cabdrive_short", T2, "2‖A‖ / (λA - λB) + d_B",
                2 * norm / delta + dB, p, not dB_exact)
    else:
        for name, form, f in _FINITE_T2:
            rep.skip(f"{name}_{form}", T2, f, "A has BOTTOM entries")
    return rep


def t2v_bounds(A: Matrix, result: SchemeResult, v: Vector, exact_params: bool = True,
               node_limit: int = DEFAULT_NODE_LIMIT) -> BoundReport:
    if not v.all_finite:
        raise ValueError("the vector must have finite entries")
    rep = BoundReport()
    lam, lb = result.lam, result.lambda_B
    if lb is BOTTOM:
        dB, dB_exact, nB = _b_params(result, exact_params, node_limit)
        _acyclic_b(rep, T2V, dB, dB_exact, nB, _empty_b_check(A, v) if nB == 0 else None)
        for name in ("t2v_general", "t2v_finite_long", "t2v_finite_short"):
            rep.skip(name, T2V, _T2V_FORMULAS[name], "λ(B) is BOTTOM")
        return rep
    n = A.n
    delta = lam - lb
    norm, vn = matrix_norm(A), vector_norm(v)
    p = {"n": n, "lambda_A": lam, "lambda_B": lb, "norm_A": norm, "norm_v": vn}
    rep.add("t2v_general", T2V, "(‖v‖ + (n-1)‖A‖) / (λA - λB)", (vn + (n - 1) * norm) / delta, p)
    if A.all_finite:
        amin, bmin = min_entry(A), min_entry(result.B)
        rep.add("t2v_finite_long", T2V, "(‖v‖ + (λA - min a) + (λB - min b)) / (λA - λB)",
                (vn + (lam - amin) + (lb - bmin)) / delta, {**p, "min_a": amin, "min_b": bmin})
        rep.add("t2v_finite_short", T2V, "(2‖A‖ + ‖v‖) / (λA - λB)", (2 * norm + vn) / delta, p)
    else:
        for name in ("t2v_finite_long", "t2v_finite_short"):
            rep.skip(name, T2V, _T2V_FORMULAS[name], "A has BOTTOM entries")
    return rep


# --------------------------------------------------------------------------
# earlier bounds from the literature

def literature_bounds(A: Matrix, v: Vector | None = None,
                      schemes: dict | None = None) -> BoundReport:
    """Hartmann-Arguelles matrix and vector bounds, Soto y Koelemeijer bound."""
    schemes = schemes or {}
    ha = schemes.get(HARTMANN_ARGUELLES) or run_scheme(A, HARTMANN_ARGUELLES)
    na = schemes.get(NACHTIGALL) or run_scheme(A, NACHTIGALL)
    n = A.n
    rep = BoundReport()
    norm = matrix_norm(A)
    lam = ha.lam
    if ha.lambda_B is BOTTOM:
        rep.skip("lit_ha_matrix", LIT, "max(2n², 2n²‖A‖ / (λA - λB_HA))",
                 "λ(B_HA) is BOTTOM")
        if v is not None:
            rep.skip("lit_ha_vector", LIT, "max(2n², (‖v‖ + n‖A‖) / (λA - λB_HA))",
                     "λ(B_HA) is BOTTOM")
    else:
        delta = lam - ha.lambda_B
        rep.add("lit_ha_matrix", LIT, "max(2n², 2n²‖A‖ / (λA - λB_HA))",
                max(Fraction(2 * n * n), 2 * n * n * norm / delta),
                {"n": n, "norm_A": norm, "lambda_B": ha.lambda_B})
        if v is not None:
            rep.add("lit_ha_vector", LIT, "max(2n², (‖v‖ + n‖A‖) / (λA - λB_HA))",
                    max(Fraction(2 * n * n), (vector_norm(v) + n * norm) / delta),
                    {"n": n, "norm_A": norm, "norm_v": vector_norm(v)})
    syk = "max(2n², 2‖A‖ / (λA - λB_N) + n + 1)"
    if not A.all_finite:
        rep.skip("lit_syk", LIT, syk, "A has BOTTOM entries")
    elif na.lambda_B is BOTTOM:
        rep.skip("lit_syk", LIT, syk, "λ(B_N) is BOTTOM")
    else:
        rep.add("lit_syk", LIT, syk,
                max(Fraction(2 * n * n), 2 * norm / (lam - na.lambda_B) + n + 1),
                {"n": n, "norm_A": norm, "lambda_B": na.lambda_B})
    return rep


# --------------------------------------------------------------------------
# combined

def scheme_bounds(A: Matrix, result: SchemeResult, exact_params: bool = True,
                  node_limit: int = DEFAULT_NODE_LIMIT, v: Vector | None = None,
                  ep: int | None = None) -> BoundReport:
    if result.scheme == CYCLE_THRESHOLD:
        rep = t1_bounds_ct(A, exact_params, node_limit)
    else:
        rep = t1_bounds(A, result.scheme, exact_params, node_limit, ep)
    rep.extend(t2_bounds(A, result, exact_params, node_limit))
    if v is not None:
        rep.extend(t2v_bounds(A, result, v, exact_params, node_limit))
    t1v, t2v = rep.best_value(T1), rep.best_value(T2)
    rep.add("t_combined", T, "max(best T1, best T2)", max(t1v, t2v),
            {"best_T1": t1v, "best_T2": t2v})
    return rep


@dataclass
class GlobalBound:
    per_scheme: dict          # scheme -> BoundReport
    best: Fraction
    best_scheme: str

    @property
    def ceiling(self) -> int:
        return max(0, math.ceil(self.best))


def global_transient_bound(A: Matrix, schemes=SCHEMES, exact_params: bool = True,
                           node_limit: int = DEFAULT_NODE_LIMIT,
                           results: dict | None = None) -> GlobalBound:
    """For each scheme max(best T1, best T2); the overall minimum bounds T(A)."""
    results = results or {}
    per = {}
    for s in schemes:
        r = results.get(s) or run_scheme(A, s, node_limit)
        per[s] = scheme_bounds(A, r, exact_params, node_limit)
    best_scheme = min(per, key=lambda s: per[s].best_value(T))
    return GlobalBound(per, per[best_scheme].best_value(T), best_scheme)
