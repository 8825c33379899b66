"""CSR terms, weak CSR expansion schemes, CSR decomposition and local reductions.

Every CSR triple is built from the normalized matrix ``λ⁻A``, so
``C S^t R`` carries no eigenvalue factor; ``A^t`` is compared against
``λ^t ⊗ C S^t R``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .core import (BOTTOM, Matrix, Scalar, Vector, kleene_star, mat_mul,
                   mat_oplus, mat_power, mat_vec, restrict_edges, scalar_times,
                   subordinate)
from .digraph import (DEFAULT_NODE_LIMIT, GraphError, circumference, cycle_mean,
                      enumerate_cycles, from_matrix, is_nontrivial, scc,
                      wielandt)
from .spectral import (CriticalGraph, RepresentingSubgraph, _require_irreducible,
                       critical_graph, max_balance, max_cycle_mean, normalize,
                       select_representing)

TABLE_ENTRY_CAP = 10 ** 6

NACHTIGALL = "nachtigall"
HARTMANN_ARGUELLES = "hartmann_arguelles"
CYCLE_THRESHOLD = "cycle_threshold"
SCHEMES = (NACHTIGALL, HARTMANN_ARGUELLES, CYCLE_THRESHOLD)
SCHEME_ALIASES = {"nacht": NACHTIGALL, "ha": HARTMANN_ARGUELLES, "ct": CYCLE_THRESHOLD}


class InvalidSubgraphError(ValueError):
    pass


# --------------------------------------------------------------------------
# CSR terms

@dataclass(frozen=True, eq=False)
class CsrTriple:
    C: Matrix
    S: Matrix
    R: Matrix
    gamma: int
    subgraph: RepresentingSubgraph
    lam: Fraction
    table: tuple | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.C.n

    def product(self, t: int) -> Matrix:
        """``C S^t R``; periodic in t with period gamma."""
        if t < 0:
            raise ValueError("t must be nonnegative")
        r = t % self.gamma
        if self.table is not None:
            return self.table[r]
        return mat_mul(mat_mul(self.C, mat_power(self.S, r)), self.R)

    def term(self, t: int) -> Matrix:
        """``λ^t ⊗ C S^t R``."""
        return scalar_times(self.lam * t, self.product(t))

    def term_vec(self, t: int, v: Vector) -> Vector:
        return mat_vec(self.term(t), v)


def _validate_subgraph(crit: CriticalGraph, sub: RepresentingSubgraph):
    if not sub.edges <= crit.edges:
        raise InvalidSubgraphError("subgraph has non-critical edges")
    seen = set()
    for comp in sub.components:
        owners = {crit.sccs.component_of[v] for v in comp if v in crit.sccs.component_of}
        if len(owners) != 1 or not comp <= crit.nodes:
            raise InvalidSubgraphError("subgraph component is not inside one critical SCC")
        seen |= owners
    if len(seen) != len(crit.components) or len(seen) != len(sub.components):
        raise InvalidSubgraphError("need exactly one subgraph component per critical SCC")


def csr_terms(A: Matrix, sub: RepresentingSubgraph | None = None,
              table_cap: int = TABLE_ENTRY_CAP) -> CsrTriple:
    """CSR terms of ``A`` with respect to a representing subgraph.

    ``M = ((λ⁻A)^γ)*``; C keeps the columns of M at subgraph nodes, R keeps
    its rows there, and S is ``λ⁻A`` restricted to the subgraph edges.
    """
    crit = critical_graph(A)
    if sub is None:
        sub = select_representing(crit, "min_cycle")
    else:
        _validate_subgraph(crit, sub)
    lam, At = crit.lam, scalar_times(-crit.lam, A)
    gamma = sub.gamma
    M = kleene_star(mat_power(At, gamma))
    keep = sub.nodes
    n = A.n
    C = Matrix([[M[i, j] if j in keep else BOTTOM for j in range(n)] for i in range(n)])
    R = Matrix([[M[i, j] if i in keep else BOTTOM for j in range(n)] for i in range(n)])
    S = restrict_edges(At, sub.edges)
    table = None
    if gamma * n * n <= table_cap:
        rows = []
        CS = C
        for _ in range(gamma):
            rows.append(mat_mul(CS, R))
            CS = mat_mul(CS, S)
        table = tuple(rows)
    return CsrTriple(C, S, R, gamma, sub, lam, table)


def csr_product(triple: CsrTriple, t: int) -> Matrix:
    return triple.product(t)


def csr_walk_oracle(A: Matrix, mN: Iterable[int], gamma: int, t: int,
                    length_cap: int | None = None) -> Matrix:
    """Heaviest walks i -> j through ``mN`` with length ≡ t (mod gamma).

    Brute-force dynamic programming over (node, visited-mN) states for all
    lengths up to ``length_cap``.  ``A`` must be normalized (λ = 0).
    """
    n = A.n
    mN = frozenset(mN)
    need = gamma * n + n
    if length_cap is None:
        length_cap = need
    if length_cap < need:
        raise ValueError(f"length_cap must be at least gamma*n+n = {need}")
    lam = max_cycle_mean(A)
    if lam is not BOTTOM and lam != 0:
        raise ValueError("walk oracle expects a normalized matrix (λ = 0)")
    succ = [[(j, A[i, j]) for j in range(n) if A.is_finite(i, j)] for i in range(n)]
    r = t % gamma
    out = [[BOTTOM] * n for _ in range(n)]
    for i in range(n):
        cur = {(i, i in mN): Fraction(0)}
        for k in range(length_cap + 1):
            if k % gamma == r:
                for (v, f), w in cur.items():
                    if f and (out[i][v] is BOTTOM or w > out[i][v]):
                        out[i][v] = w
            nxt = {}
            for (v, f), w in cur.items():
                for u, a in succ[v]:
                    key = (u, f or u in mN)
                    s = w + a
                    if key not in nxt or s > nxt[key]:
                        nxt[key] = s
            cur = nxt
            if not cur:
                break
    return Matrix(out)


# --------------------------------------------------------------------------
# schemes

@dataclass(frozen=True, eq=False)
class SchemeResult:
    """Subordinate matrix B: rows and columns of ``removed_nodes`` set to BOTTOM."""

    scheme: str
    removed_nodes: frozenset
    B: Matrix
    lambda_B: Scalar
    mu: Scalar | None
    lam: Fraction

    @property
    def kept_nodes(self) -> frozenset:
        return frozenset(range(self.B.n)) - self.removed_nodes


def _result(scheme, A, removed, mu, lam) -> SchemeResult:
    B = subordinate(A, removed)
    return SchemeResult(scheme, frozenset(removed), B, max_cycle_mean(B), mu, lam)


def scheme_nachtigall(A: Matrix) -> SchemeResult:
    crit = critical_graph(A)
    return _result(NACHTIGALL, A, crit.nodes, None, crit.lam)


def _threshold_removal(G_of_level, levels, crit_nodes):
    """Sweep levels downward; stop at the first threshold graph having a
    nontrivial SCC with no critical node.

    Returns ``(mu, removed)``; mu is None if no level qualifies, and then the
    removal uses the lowest threshold graph.
    """
    last = None
    for mu in levels:
        T = G_of_level(mu)
        comps = [c for c in scc(T).components if is_nontrivial(T, c)]
        last = comps
        if any(not (c & crit_nodes) for c in comps):
            return mu, frozenset(v for c in comps if c & crit_nodes for v in c)
    removed = frozenset(v for c in (last or []) if c & crit_nodes for v in c)
    return None, removed


def scheme_hartmann_arguelles(A: Matrix) -> SchemeResult:
    """Threshold graphs of the max-balanced matrix.

    Candidate thresholds are the distinct balanced edge weights.
    """
    _require_irreducible(A, "the Hartmann-Arguelles scheme")
    bal = max_balance(A)
    Bm = bal.scaled
    G = from_matrix(Bm)
    crit_nodes = critical_graph(A).nodes
    levels = sorted(set(G.weights.values()), reverse=True)

    def at(mu):
        return G.subgraph(G.nodes, edges=[e for e, x in G.weights.items() if x >= mu])

    mu, removed = _threshold_removal(at, levels, crit_nodes)
    if mu is None:
        removed = frozenset(range(A.n))
        mu_out = BOTTOM
    else:
        mu_out = mu + bal.lam
    return _result(HARTMANN_ARGUELLES, A, removed, mu_out, bal.lam)


def scheme_cycle_threshold(A: Matrix, node_limit: int = DEFAULT_NODE_LIMIT) -> SchemeResult:
    """Threshold graphs formed by unions of cycles with mean at least mu.

    Enumerates every elementary cycle, so it refuses graphs above
    ``node_limit`` nodes.
    """
    crit = critical_graph(A)
    G = from_matrix(A)
    cycles = enumerate_cycles(G, node_limit=node_limit)
    means = [(cycle_mean(G, c), c) for c in cycles]
    levels = sorted({m for m, _ in means}, reverse=True)

    def at(mu):
        edges = set()
        for m, c in means:
            if m >= mu:
                edges.update((c[k], c[(k + 1) % len(c)]) for k in range(len(c)))
        return G.subgraph(edges=edges)

    mu, removed = _threshold_removal(at, levels, crit.nodes)
    return _result(CYCLE_THRESHOLD, A, removed, BOTTOM if mu is None else mu, crit.lam)


def run_scheme(A: Matrix, scheme: str, node_limit: int = DEFAULT_NODE_LIMIT) -> SchemeResult:
    scheme = SCHEME_ALIASES.get(scheme, scheme)
    if scheme == NACHTIGALL:
        return scheme_nachtigall(A)
    if scheme == HARTMANN_ARGUELLES:
        return scheme_hartmann_arguelles(A)
    if scheme == CYCLE_THRESHOLD:
        return scheme_cycle_threshold(A, node_limit)
    raise ValueError(f"unknown scheme {scheme!r}")


def subordination_check(r1: SchemeResult, r2: SchemeResult) -> bool:
    """True iff the digraph of r1.B is contained in that of r2.B."""
    return set(r1.B.support()) <= set(r2.B.support())


def weak_expansion(triple: CsrTriple, B: Matrix, t: int, Bt: Matrix | None = None) -> Matrix:
    """``λ^t ⊗ C S^t R ⊕ B^t``."""
    if Bt is None:
        Bt = mat_power(B, t)
    return mat_oplus(triple.term(t), Bt)


# --------------------------------------------------------------------------
# CSR decomposition

@dataclass(frozen=True, eq=False)
class CsrDecomposition:
    terms: tuple           # of (lambda_i, CsrTriple)
    t_min: int
    remainder: Matrix      # what is left once no cycle remains

    def evaluate(self, t: int) -> Matrix:
        out = Matrix.zeros(self.remainder.n)
        for _, tr in self.terms:
            out = mat_oplus(out, tr.term(t))
        return out

    @property
    def gamma(self) -> int:
        return math.lcm(*(tr.gamma for _, tr in self.terms)) if self.terms else 1


def csr_decomposition(A: Matrix, node_limit: int = DEFAULT_NODE_LIMIT) -> CsrDecomposition:
    """Peel off CSR terms by repeatedly removing the critical nodes.

    ``A^t`` equals the sum of the terms for every t ≥ ``t_min``.
    """
    if max_cycle_mean(A) is BOTTOM:
        raise ValueError("matrix has no cycle; no CSR terms")
    n = A.n
    terms = []
    cur = A
    while max_cycle_mean(cur) is not BOTTOM:
        crit = critical_graph(cur)
        terms.append((crit.lam, csr_terms(cur, select_representing(crit, "min_cycle"))))
        cur = subordinate(cur, crit.nodes)
    c, _ = circumference(from_matrix(A), node_limit)
    t_min = min(wielandt(n), (n - 2) * c + n) if n >= 2 else wielandt(n)
    return CsrDecomposition(tuple(terms), t_min, cur)


# --------------------------------------------------------------------------
# local reductions

def _min_over_residues(values):
    if any(x is BOTTOM for x in values):
        return BOTTOM
    return min(values)


def local_j_sets(A: Matrix, triple: CsrTriple, i: int, j: int | None = None,
                 l: int | None = None, v: Vector | None = None) -> frozenset:
    """Nodes whose detours are strictly lighter than the CSR term.

    Variant selected by the arguments: ``(i, j)``, ``(i, j, l)``, ``(i, v)``
    or ``(i, l, v)``.  A BOTTOM CSR value gives the empty set, since nothing
    is strictly below it.
    """
    _, At = normalize(A)
    S = kleene_star(At)
    n = A.n
    residues = range(triple.gamma) if l is None else [l]
    if v is None:
        if j is None:
            raise ValueError("give j or v")
        target = _min_over_residues([triple.product(r)[i, j] for r in residues])
        if target is BOTTOM:
            return frozenset()
        via = [S[i, s] + S[s, j] if S[i, s] is not BOTTOM and S[s, j] is not BOTTOM
               else BOTTOM for s in range(n)]
    else:
        if j is not None:
            raise ValueError("give either j or v")
        target = _min_over_residues([mat_vec(triple.product(r), v)[i] for r in residues])
        if target is BOTTOM:
            return frozenset()
        via = []
        for s in range(n):
            if S[i, s] is BOTTOM:
                via.append(BOTTOM)
                continue
            best = BOTTOM
            for k in range(n):
                if S[s, k] is not BOTTOM and v[k] is not BOTTOM:
                    x = S[i, s] + S[s, k] + v[k]
                    if x > best:
                        best = x
            via.append(best)
    return frozenset(s for s in range(n) if via[s] < target)


@dataclass(frozen=True, eq=False)
class LocalReduction:
    """Reduced data, all normalized by λ(A)."""

    J: frozenset
    A: Matrix          # λ⁻A with rows/columns in J cancelled
    triple: CsrTriple
    B: Matrix          # λ⁻B with rows/columns in J cancelled
    lam: Fraction


def local_reduce(A: Matrix, B: Matrix, J: Iterable[int], mode: str = "full") -> LocalReduction:
    J = frozenset(J)
    lam, At = normalize(A)
    Ar = subordinate(At, J)
    Br = subordinate(scalar_times(-lam, B), J)
    crit = critical_graph(Ar)
    triple = csr_terms(Ar, select_representing(crit, mode))
    return LocalReduction(J, Ar, triple, Br, lam)


def local_transient_agw(red: LocalReduction, i: int, j: int, l: int) -> int:
    """Least t with ``λ(B̃)^t ⊗ (λ(B̃)⁻B̃)*_ij ≤ (C̃S̃^lR̃)_ij`` (closed form)."""
    lb = max_cycle_mean(red.B)
    if lb is BOTTOM:
        return 0
    if lb >= 0:
        raise ValueError("reduced B must have cycle mean below that of A")
    K = kleene_star(scalar_times(-lb, red.B))[i, j]
    if K is BOTTOM:
        return 0
    c = red.triple.product(l)[i, j]
    if c is BOTTOM:
        raise ValueError("CSR entry is BOTTOM; the threshold is undefined")
    return max(0, math.ceil((K - c) / (-lb)))
