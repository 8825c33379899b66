"""Maximum cycle mean, critical graph, diagonal scalings and representing subgraphs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import (BOTTOM, Matrix, Scalar, Vector, diagonal_similarity,
                   kleene_star, scalar_times)
from .digraph import (Digraph, GraphError, SccDecomposition, cyclicity,
                      from_matrix, is_strongly_connected, nontrivial_components,
                      scc, shortest_cycle)


class ReducibleMatrixError(ValueError):
    pass


class AcyclicMatrixError(ValueError):
    """The digraph has no cycle, so the maximum cycle mean is BOTTOM."""


def is_irreducible(A: Matrix) -> bool:
    return is_strongly_connected(from_matrix(A))


def _require_irreducible(A: Matrix, what: str):
    if not is_irreducible(A):
        raise ReducibleMatrixError(
            f"{what} requires an irreducible matrix (strongly connected digraph); "
            "apply it per strongly connected component instead")


# --------------------------------------------------------------------------
# maximum cycle mean

def _karp(num, nodes, succ) -> Fraction | None:
    """Karp's recurrence on one SCC, in integer numerators."""
    nodes = sorted(nodes)
    m = len(nodes)
    src = nodes[0]
    D = [{src: 0}]
    for _ in range(m):
        prev = D[-1]
        cur = {}
        for u, du in prev.items():
            row = num[u]
            for w in succ[u]:
                s = du + row[w]
                if w not in cur or s > cur[w]:
                    cur[w] = s
        D.append(cur)
    best = None
    for v, dm in D[m].items():
        worst = None
        for k in range(m):
            dk = D[k].get(v)
            if dk is None:
                continue
            q = Fraction(dm - dk, m - k)
            if worst is None or q < worst:
                worst = q
        if best is None or worst > best:
            best = worst
    return best


def max_cycle_mean(A: Matrix) -> Scalar:
    """Largest mean weight of a cycle of D(A); BOTTOM when D(A) is acyclic."""
    G = from_matrix(A)
    num = A._num
    best = None
    for comp in nontrivial_components(G):
        lam = _karp(num, comp, {u: [w for w in G.succ[u] if w in comp] for u in comp})
        if lam is not None and (best is None or lam > best):
            best = lam
    if best is None:
        return BOTTOM
    return best / A._den


def normalize(A: Matrix) -> tuple[Scalar, Matrix]:
    """Return ``(λ, λ⁻ ⊗ A)``."""
    lam = max_cycle_mean(A)
    if lam is BOTTOM:
        raise AcyclicMatrixError("matrix has no cycle; its powers are nilpotent")
    return lam, scalar_times(-lam, A)


# --------------------------------------------------------------------------
# critical graph

@dataclass(frozen=True)
class CriticalGraph:
    lam: Fraction
    nodes: frozenset
    edges: frozenset
    graph: Digraph
    sccs: SccDecomposition

    @property
    def components(self) -> tuple:
        return self.sccs.components

    def component_graph(self, comp) -> Digraph:
        return self.graph.subgraph(comp)

    def cyclicity(self) -> int:
        return cyclicity(self.graph)


def critical_graph(A: Matrix) -> CriticalGraph:
    """Edges (i, j) with ã_ij + ã*_ji = 0, where à = λ⁻A."""
    lam, At = normalize(A)
    S = kleene_star(At)
    edges = set()
    for i, j in At.support():
        s = S[j, i]
        if s is not BOTTOM and At[i, j] + s == 0:
            edges.add((i, j))
    G = from_matrix(A).subgraph(edges=edges)
    return CriticalGraph(lam, G.nodes, frozenset(edges), G, scc(G))


def critical_cycle(A: Matrix) -> tuple:
    """One cycle of maximal mean (lexicographically smallest shortest one)."""
    crit = critical_graph(A)
    comp = crit.components[0]
    return shortest_cycle(crit.graph, comp)


# --------------------------------------------------------------------------
# scalings

@dataclass(frozen=True)
class Scaling:
    """Diagonal scaling ``scaled = D⁻(λ⁻A)D`` with ``D = diag(x)``."""

    lam: Fraction
    x: Vector
    scaled: Matrix


def _visualization_potentials(At: Matrix) -> list:
    S = kleene_star(At)
    return [max(v for v in row if v is not BOTTOM) for row in S.rows()]


def visualize(A: Matrix) -> Scaling:
    """Scaling after which all entries are ≤ 0 and critical entries are 0."""
    _require_irreducible(A, "visualize")
    lam, At = normalize(A)
    x = _visualization_potentials(At)
    return Scaling(lam, Vector(x), diagonal_similarity(At, x))


def max_balance(A: Matrix) -> Scaling:
    """Scaling with the cycle-cover property.

    Iterative contraction: on the current contracted graph compute its cycle
    mean, visualize it, then merge its critical components into super-nodes.
    Potentials act uniformly on the members of a super-node, so edges inside
    merged components are never touched again.  The cycle means are
    non-increasing across rounds, which is what makes every frozen edge lie on
    a cycle of edges at least as heavy.
    """
    _require_irreducible(A, "max_balance")
    n = A.n
    lam = max_cycle_mean(A)
    w = {(i, j): A[i, j] for i, j in A.support()}
    pot = [Fraction(0)] * n
    groups = [[i] for i in range(n)]
    merged = [False] * n           # whether a group is already a contracted component
    while True:
        m = len(groups)
        where = {v: g for g, members in enumerate(groups) for v in members}
        H = [[BOTTOM] * m for _ in range(m)]
        for (i, j), x in w.items():
            a, b = where[i], where[j]
            if a == b and merged[a]:
                continue
            if H[a][b] is BOTTOM or x > H[a][b]:
                H[a][b] = x
        Hm = Matrix(H)
        if max_cycle_mean(Hm) is BOTTOM:
            break
        crit = critical_graph(Hm)
        Ht = scalar_times(-crit.lam, Hm)
        y = _visualization_potentials(Ht)
        for (i, j) in w:
            a, b = where[i], where[j]
            if y[a] != y[b]:
                w[(i, j)] += y[b] - y[a]
        for g, members in enumerate(groups):
            for v in members:
                pot[v] += y[g]
        new_groups, new_merged, done = [], [], set()
        for comp in crit.components:
            new_groups.append(sorted(v for g in comp for v in groups[g]))
            new_merged.append(True)
            done |= comp
        for g in range(m):
            if g not in done:
                new_groups.append(groups[g])
                new_merged.append(merged[g])
        order = sorted(range(len(new_groups)), key=lambda k: new_groups[k][0])
        groups = [new_groups[k] for k in order]
        merged = [new_merged[k] for k in order]
    At = scalar_times(-lam, A)
    return Scaling(lam, Vector(pot), diagonal_similarity(At, pot))


def is_max_balanced(B: Matrix) -> bool:
    """Every edge lies on a cycle whose edges are all at least as heavy."""
    G = from_matrix(B)
    by_level = {}
    for e, x in G.weights.items():
        by_level.setdefault(x, []).append(e)
    for level, edges in by_level.items():
        T = G.subgraph(G.nodes, edges=[e for e, x in G.weights.items() if x >= level])
        comp_of = scc(T).component_of
        for i, j in edges:
            if comp_of[i] != comp_of[j]:
                return False
    return True


def cut_balance_violations(B: Matrix) -> list:
    """Vertex sets S whose heaviest outgoing and incoming edges differ.

    Exhaustive over all 2^n - 2 proper nonempty subsets.
    """
    n = B.n
    bad = []
    edges = [(i, j, B[i, j]) for i, j in B.support()]
    for mask in range(1, (1 << n) - 1):
        out = inn = BOTTOM
        for i, j, x in edges:
            si, sj = (mask >> i) & 1, (mask >> j) & 1
            if si and not sj and x > out:
                out = x
            elif sj and not si and x > inn:
                inn = x
        if out != inn:
            bad.append(frozenset(k for k in range(n) if (mask >> k) & 1))
    return bad


# --------------------------------------------------------------------------
# representing subgraphs

@dataclass(frozen=True)
class RepresentingSubgraph:
    """A completely reducible critical subgraph, one component per critical SCC.

    ``components[l]`` lies inside ``critical_components[l]`` and has
    cyclicity ``gammas[l]``.
    """

    mode: str
    nodes: frozenset
    edges: frozenset
    components: tuple
    critical_components: tuple
    gammas: tuple

    @property
    def gamma(self) -> int:
        return math.lcm(*self.gammas)

    @property
    def per_scc_gamma(self) -> dict:
        return dict(zip(self.components, self.gammas))

    @property
    def max_girth(self) -> int:
        return max(self.gammas) if self.mode == "min_cycle" else None


def select_representing(crit: CriticalGraph, mode: str = "min_cycle") -> RepresentingSubgraph:
    if mode not in ("min_cycle", "full"):
        raise ValueError("mode must be 'min_cycle' or 'full'")
    if not crit.nodes:
        raise GraphError("critical graph is empty")
    comps, gammas, edges = [], [], set()
    for comp in crit.components:
        if mode == "min_cycle":
            cyc = shortest_cycle(crit.graph, comp)
            es = {(cyc[k], cyc[(k + 1) % len(cyc)]) for k in range(len(cyc))}
            comps.append(frozenset(cyc))
            gammas.append(len(cyc))
        else:
            es = {e for e in crit.edges if e[0] in comp and e[1] in comp}
            comps.append(comp)
            gammas.append(cyclicity(crit.graph.subgraph(comp)))
        edges |= es
    nodes = frozenset(v for c in comps for v in c)
    return RepresentingSubgraph(mode, nodes, frozenset(edges), tuple(comps),
                                tuple(crit.components), tuple(gammas))
