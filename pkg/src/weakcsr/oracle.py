"""Exact transients by direct scanning of matrix powers.

Scan ceilings are derived without the closed-form bounds, so comparing a
bound against these values is a genuine check: the eventual-periodicity
scan stops as soon as the defining relation holds, and the T2 ceilings come
from the geometric decay of ``B^t`` relative to the CSR term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .core import (BOTTOM, Matrix, Vector, kleene_star, mat_mul, mat_oplus,
                   mat_vec, scalar_times)
from .csr import CsrTriple, SchemeResult
from .digraph import Digraph, boolean_powers, boolean_rows, cyclicity, wielandt
from .spectral import critical_graph

HARD_SCAN_LIMIT = 100_000


class ScanLimitExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class TransientWitness:
    value: int
    gamma_used: int
    scan_ceiling: int
    violation_at: int | None

    def __post_init__(self):
        expect = 0 if self.violation_at is None else self.violation_at + 1
        if self.value != expect:
            raise ValueError("witness value must be one past the last violation")


class PowerCache:
    """Lazily extended list ``[A^0, A^1, ...]``."""

    def __init__(self, A: Matrix):
        self.A = A
        self._p = [Matrix.identity(A.n)]

    def __getitem__(self, t: int) -> Matrix:
        while len(self._p) <= t:
            self._p.append(mat_mul(self._p[-1], self.A))
        return self._p[t]


def _witness(last_bad, gamma, ceiling):
    return TransientWitness(0 if last_bad is None else last_bad + 1, gamma, ceiling, last_bad)


# --------------------------------------------------------------------------
# T(A)

def _periodic_at(P: PowerCache, t, gamma, shift) -> bool:
    return P[t + gamma] == scalar_times(shift, P[t])


def exact_transient(A: Matrix, gamma: int | None = None, powers: PowerCache | None = None,
                    limit: int = HARD_SCAN_LIMIT) -> TransientWitness:
    """Least T with ``A^{t+γ} = λ^γ ⊗ A^t`` for all t ≥ T (upward scan).

    The relation at one t carries over to every later t, so the first t
    where it holds is the answer.  γ defaults to the cyclicity of the
    critical graph.
    """
    crit = critical_graph(A)
    if gamma is None:
        gamma = crit.cyclicity()
    P = powers or PowerCache(A)
    shift = crit.lam * gamma
    for t in range(limit + 1):
        if _periodic_at(P, t, gamma, shift):
            return _witness(t - 1 if t else None, gamma, limit)
    raise ScanLimitExceeded(f"no periodicity up to t={limit}")


def exact_transient_downward(A: Matrix, ceiling: int, gamma: int | None = None,
                             powers: PowerCache | None = None) -> TransientWitness:
    """Same quantity, scanning from ``ceiling`` down to the last failure.

    Valid only if ``ceiling`` is at least the transient; the relation is
    checked at the ceiling itself and a failure there is reported.
    """
    crit = critical_graph(A)
    if gamma is None:
        gamma = crit.cyclicity()
    P = powers or PowerCache(A)
    shift = crit.lam * gamma
    if not _periodic_at(P, ceiling, gamma, shift):
        raise ScanLimitExceeded(f"ceiling {ceiling} is below the transient")
    for t in range(ceiling - 1, -1, -1):
        if not _periodic_at(P, t, gamma, shift):
            return _witness(t, gamma, ceiling)
    return _witness(None, gamma, ceiling)


# --------------------------------------------------------------------------
# T2 and T2(v)

def _decay_ceiling(lam_A, lam_B, star_val, csr_vals) -> int:
    """Smallest t from which ``λ_A^t c ≥ λ_B^t K`` for every finite c."""
    finite = [c for c in csr_vals if c is not BOTTOM]
    if star_val is BOTTOM or not finite:
        return 0
    return max(0, math.ceil((star_val - min(finite)) / (lam_A - lam_B)))


def _b_star(result: SchemeResult):
    lb = result.lambda_B
    return kleene_star(scalar_times(-lb, result.B))


def t2_scan_ceiling(A: Matrix, result: SchemeResult, triple: CsrTriple,
                    v: Vector | None = None) -> int:
    n = A.n
    lb = result.lambda_B
    if lb is BOTTOM:
        return n
    K = _b_star(result)
    lam = triple.lam
    prods = [triple.product(r) for r in range(triple.gamma)]
    ceil = 0
    if v is None:
        for i in range(n):
            for j in range(n):
                ceil = max(ceil, _decay_ceiling(lam, lb, K[i, j], [p[i, j] for p in prods]))
    else:
        Kv = mat_vec(K, v)
        pv = [mat_vec(p, v) for p in prods]
        for i in range(n):
            ceil = max(ceil, _decay_ceiling(lam, lb, Kv[i], [x[i] for x in pv]))
    return ceil + triple.gamma


def exact_t2(A: Matrix, result: SchemeResult, triple: CsrTriple,
             v: Vector | None = None) -> TransientWitness:
    """Least T with ``λ^t ⊗ C S^t R ≥ B^t`` (or its action on v) for all t ≥ T.

    ``B^0`` is the identity.
    """
    ceiling = t2_scan_ceiling(A, result, triple, v)
    PB = PowerCache(result.B)
    last_bad = None
    for t in range(ceiling + 1):
        lhs, rhs = triple.term(t), PB[t]
        if v is not None:
            ok = mat_vec(lhs, v) >= mat_vec(rhs, v)
        else:
            ok = lhs >= rhs
        if not ok:
            last_bad = t
    return _witness(last_bad, triple.gamma, ceiling)


def exact_t2v(A: Matrix, result: SchemeResult, triple: CsrTriple, v: Vector) -> TransientWitness:
    return exact_t2(A, result, triple, v)


# --------------------------------------------------------------------------
# T1

def exact_t1(A: Matrix, result: SchemeResult, triple: CsrTriple,
             powers: PowerCache | None = None, t_ceiling: int | None = None) -> TransientWitness:
    """Least T with ``A^t = λ^t ⊗ C S^t R ⊕ B^t`` for all t ≥ T.

    Past both T(A) and T2 the expansion holds automatically, so the scan
    stops at their maximum.
    """
    P = powers or PowerCache(A)
    if t_ceiling is None:
        t_ceiling = max(exact_transient(A, powers=P).value,
                        exact_t2(A, result, triple).value)
    PB = PowerCache(result.B)
    last_bad = None
    for t in range(t_ceiling + 1):
        if P[t] != mat_oplus(triple.term(t), PB[t]):
            last_bad = t
    return _witness(last_bad, triple.gamma, t_ceiling)


@dataclass
class WeakCsrCheck:
    t_from: int
    t_to: int
    violations: list = field(default_factory=list)   # (t, i, j)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_weak_csr(A: Matrix, result: SchemeResult, triple: CsrTriple,
                    t_from: int, t_to: int, powers: PowerCache | None = None) -> WeakCsrCheck:
    """Entrywise check of the weak CSR expansion on ``[t_from, t_to]``."""
    P = powers or PowerCache(A)
    PB = PowerCache(result.B)
    rep = WeakCsrCheck(t_from, t_to)
    for t in range(t_from, t_to + 1):
        lhs = P[t]
        rhs = mat_oplus(triple.term(t), PB[t])
        if lhs != rhs:
            rep.violations.extend((t, i, j) for i in range(A.n) for j in range(A.n)
                                  if lhs[i, j] != rhs[i, j])
    return rep


# --------------------------------------------------------------------------
# exploration penalty

def exact_ep(G: Digraph, comp, gamma: int) -> int:
    """Exploration penalty of a strongly connected component.

    For each node, the closed-walk lengths are read from Boolean powers up
    to ``Wi(|comp|) + γ``; the penalty is one past the last multiple of γ
    with no closed walk.  The component value is the maximum over its nodes.
    """
    own = cyclicity(G.subgraph(comp))
    if gamma < 1 or gamma % own:
        raise ValueError(f"gamma={gamma} is not a multiple of the component cyclicity {own}")
    rows, pos = boolean_rows(G, comp)
    m = len(rows)
    ceiling = wielandt(m) + gamma
    pw = boolean_powers(rows, ceiling)
    worst = 0
    for v in comp:
        k = pos[v]
        bit = 1 << k
        missing = [t for t in range(0, ceiling + 1, gamma) if not pw[t][k] & bit]
        if missing:
            worst = max(worst, missing[-1] + 1)
    return worst
