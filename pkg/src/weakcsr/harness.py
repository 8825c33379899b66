"""Per-instance soundness checks shared by the fuzz command and the test-suite."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .bounds import LIT, T, T1, T2, T2V, literature_bounds, scheme_bounds
from .core import BOTTOM, Matrix, Vector
from .csr import (CYCLE_THRESHOLD, HARTMANN_ARGUELLES, NACHTIGALL, SCHEMES,
                  csr_decomposition, csr_terms, run_scheme, subordination_check)
from .digraph import DEFAULT_NODE_LIMIT, from_matrix, is_strongly_connected
from .generators import corpus_instance
from .oracle import (PowerCache, exact_t1, exact_t2, exact_transient,
                     verify_weak_csr)
from .spectral import critical_graph, select_representing


@dataclass
class Violation:
    check: str
    scheme: str | None
    detail: str


@dataclass
class SchemeOutcome:
    scheme: str
    removed: frozenset
    lambda_B: object
    exact_t1: int
    exact_t2: int
    exact_t2v: int | None
    best_t1: int
    best_t2: int
    best_t: Fraction
    weak_window: tuple


@dataclass
class InstanceOutcome:
    A: Matrix
    v: Vector | None
    transient: int
    gamma: int
    schemes: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    falsified: list = field(default_factory=list)   # violations by excluded formulas
    best_combined: Fraction | None = None
    lit_ha: Fraction | None = None
    decomposition_terms: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def strictly_dominates(self) -> bool:
        return self.lit_ha is not None and self.best_combined < self.lit_ha


def check_instance(A: Matrix, v: Vector | None = None, node_limit: int = DEFAULT_NODE_LIMIT,
                   exact_params: bool = True, checks=("soundness", "weak", "chain",
                                                      "dominance", "decomposition")
                   ) -> InstanceOutcome:
    """Compare every bound with the exact oracle values on one irreducible matrix."""
    if not is_strongly_connected(from_matrix(A)):
        raise ValueError("instance must be irreducible")
    P = PowerCache(A)
    TA = exact_transient(A, powers=P)
    out = InstanceOutcome(A, v, TA.value, TA.gamma_used)
    bad = out.violations
    crit = critical_graph(A)
    triple = csr_terms(A, select_representing(crit, "min_cycle"))
    results = {s: run_scheme(A, s, node_limit) for s in SCHEMES}
    for s, r in results.items():
        rep = scheme_bounds(A, r, exact_params, node_limit, v)
        t2 = exact_t2(A, r, triple).value
        t1 = exact_t1(A, r, triple, powers=P, t_ceiling=max(TA.value, t2)).value
        t2v = exact_t2(A, r, triple, v).value if v is not None else None
        if "soundness" in checks:
            exact = {T1: t1, T2: t2, T2V: t2v}
            for e in rep.entries:
                if not e.applicable or e.family not in exact or exact[e.family] is None:
                    continue
                if e.ceiling < exact[e.family]:
                    where = out.falsified if e.excluded else bad
                    where.append(Violation("soundness", s,
                                           f"{e.name}={e.value} < exact {e.family}={exact[e.family]}"))
            if TA.value > max(t1, t2):
                bad.append(Violation("soundness", s, f"T={TA.value} > max(T1={t1}, T2={t2})"))
            if rep.best(T) < TA.value:
                bad.append(Violation("soundness", s, f"combined bound {rep.best(T)} < T={TA.value}"))
        b1 = rep.best(T1)
        window = (b1, b1 + 2 * triple.gamma)
        if "weak" in checks:
            chk = verify_weak_csr(A, r, triple, *window, powers=P)
            if not chk.ok:
                bad.append(Violation("weak", s, f"expansion fails at {chk.violations[:3]}"))
        out.schemes[s] = SchemeOutcome(s, r.removed_nodes, r.lambda_B, t1, t2, t2v,
                                       b1, rep.best(T2), rep.best_value(T), window)
    if "chain" in checks:
        na, ha, ct = (results[s] for s in (NACHTIGALL, HARTMANN_ARGUELLES, CYCLE_THRESHOLD))
        if not (na.removed_nodes <= ha.removed_nodes <= ct.removed_nodes):
            bad.append(Violation("chain", None, "removed node sets are not nested"))
        if not (subordination_check(ct, ha) and subordination_check(ha, na)):
            bad.append(Violation("chain", None, "subordination fails"))
        if not (ct.lambda_B <= ha.lambda_B <= na.lambda_B < crit.lam):
            bad.append(Violation("chain", None,
                                 f"eigenvalues out of order: {ct.lambda_B}, {ha.lambda_B}, "
                                 f"{na.lambda_B}, {crit.lam}"))
    out.best_combined = min(o.best_t for o in out.schemes.values())
    lit = literature_bounds(A, v, results).get("lit_ha_matrix")
    out.lit_ha = lit.value
    if "dominance" in checks and lit.applicable and out.best_combined > lit.value:
        bad.append(Violation("dominance", None,
                             f"best bound {out.best_combined} > literature {lit.value}"))
    if "decomposition" in checks:
        dec = csr_decomposition(A, node_limit)
        out.decomposition_terms = len(dec.terms)
        if len(dec.terms) > A.n:
            bad.append(Violation("decomposition", None, "more than n terms"))
        for t in range(dec.t_min, dec.t_min + 2 * dec.gamma + 1):
            if dec.evaluate(t) != P[t]:
                bad.append(Violation("decomposition", None, f"mismatch at t={t}"))
                break
    return out


# --------------------------------------------------------------------------
# fuzzing

@dataclass
class FuzzSummary:
    seed: int
    count: int
    n_max: int
    weights: tuple
    failures: list = field(default_factory=list)   # (index, outcome, minimized A)
    strict_dominance: int = 0
    dominance_defined: int = 0
    boolean_instances: int = 0
    finite_instances: int = 0
    falsified: dict = field(default_factory=dict)   # excluded formula -> instance count

    @property
    def ok(self) -> bool:
        return not self.failures


def _run_one(args):
    seed, k, n_max, weights, finite_fraction, node_limit = args
    A, v = corpus_instance(seed, k, n_max, weights, finite_fraction)
    return k, A, v, check_instance(A, v, node_limit)


def minimize(A: Matrix, v: Vector | None, still_bad, node_limit=DEFAULT_NODE_LIMIT) -> Matrix:
    """Greedy shrink: drop edges and pull weights towards 0 while a failure persists."""
    rows = [list(r) for r in A.rows()]
    changed = True
    while changed:
        changed = False
        for i in range(A.n):
            for j in range(A.n):
                x = rows[i][j]
                if x is BOTTOM:
                    continue
                for y in (BOTTOM, Fraction(0), Fraction(int(x / 2))):
                    if y == x:
                        continue
                    rows[i][j] = y
                    M = Matrix(rows)
                    if is_strongly_connected(from_matrix(M)) and still_bad(M):
                        changed = True
                        break
                    rows[i][j] = x
    return Matrix(rows)


def fuzz(count: int = 500, n_max: int = 6, weights=(-9, 9), seed: int = 1,
         finite_fraction: float = 0.2, jobs: int = 1,
         node_limit: int = DEFAULT_NODE_LIMIT, progress=None) -> FuzzSummary:
    summary = FuzzSummary(seed, count, n_max, tuple(weights))
    tasks = [(seed, k, n_max, tuple(weights), finite_fraction, node_limit) for k in range(count)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, tasks, chunksize=8))
    else:
        results = []
        for t in tasks:
            results.append(_run_one(t))
            if progress:
                progress(len(results), count)
    for k, A, v, out in sorted(results, key=lambda r: r[0]):
        if A.all_finite:
            summary.finite_instances += 1
        if all(x == 0 for x in A.finite_entries()):
            summary.boolean_instances += 1
        if out.lit_ha is not None:
            summary.dominance_defined += 1
            if out.best_combined < out.lit_ha:
                summary.strict_dominance += 1
        for name in {x.detail.split("=")[0] for x in out.falsified}:
            summary.falsified[name] = summary.falsified.get(name, 0) + 1
        if not out.ok:
            kinds = {x.check for x in out.violations}

            def still_bad(M, kinds=kinds):
                try:
                    o = check_instance(M, v, node_limit)
                except Exception:
                    return False
                return any(x.check in kinds for x in o.violations)

            summary.failures.append((k, out, minimize(A, v, still_bad, node_limit)))
    return summary
