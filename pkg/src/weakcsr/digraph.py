"""Weighted digraphs of max-plus matrices and their structural parameters."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .core import BOTTOM, Matrix, Scalar

DEFAULT_NODE_LIMIT = 20


class GraphError(ValueError):
    pass


class SearchLimitExceeded(GraphError):
    """An exponential search was refused because the graph is too large."""

    def __init__(self, what, size, limit):
        self.size = size
        self.limit = limit
        super().__init__(
            f"{what}: graph has {size} nodes, above node_limit={limit}; "
            f"raise the limit or use the |G| / |G|-1 bounds")


@dataclass(frozen=True, eq=False)
class Digraph:
    """Edge-weighted digraph on a subset of the indices ``0..n-1``.

    ``weights`` maps each edge ``(i, j)`` to its finite weight.
    """

    n: int
    nodes: frozenset
    weights: Mapping = field(repr=False)
    succ: dict = field(init=False, repr=False)
    pred: dict = field(init=False, repr=False)

    def __post_init__(self):
        succ = {v: [] for v in sorted(self.nodes)}
        pred = {v: [] for v in sorted(self.nodes)}
        for (i, j) in sorted(self.weights):
            if i not in self.nodes or j not in self.nodes:
                raise GraphError(f"edge {(i, j)} leaves the node set")
            succ[i].append(j)
            pred[j].append(i)
        object.__setattr__(self, "succ", {k: tuple(v) for k, v in succ.items()})
        object.__setattr__(self, "pred", {k: tuple(v) for k, v in pred.items()})

    @property
    def edges(self) -> frozenset:
        return frozenset(self.weights)

    def __len__(self):
        return len(self.nodes)

    def __eq__(self, other):
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.nodes == other.nodes and dict(self.weights) == dict(other.weights)

    def __hash__(self):
        return hash((self.nodes, frozenset(self.weights.items())))

    def has_edge(self, i, j) -> bool:
        return (i, j) in self.weights

    def weight(self, i, j) -> Scalar:
        return self.weights.get((i, j), BOTTOM)

    def subgraph(self, nodes: Iterable[int] | None = None, edges=None) -> "Digraph":
        """Induced subgraph on ``nodes`` or the subgraph formed by ``edges``.

        With ``edges`` given, the node set defaults to the edges' endpoints.
        """
        if edges is not None:
            edges = set(edges)
            if nodes is None:
                nodes = {v for e in edges for v in e}
            nodes = frozenset(nodes)
            w = {e: self.weights[e] for e in edges}
        else:
            nodes = frozenset(self.nodes if nodes is None else nodes)
            w = {e: x for e, x in self.weights.items()
                 if e[0] in nodes and e[1] in nodes}
        return Digraph(self.n, nodes, w)

    def to_matrix(self) -> Matrix:
        return Matrix([[self.weights.get((i, j), BOTTOM) for j in range(self.n)]
                       for i in range(self.n)])


def from_matrix(A: Matrix, support_only: bool = False) -> Digraph:
    """The digraph with an edge ``(i, j)`` exactly when ``a_ij`` is finite."""
    w = {(i, j): A[i, j] for i, j in A.support()}
    if support_only:
        nodes = frozenset(v for e in w for v in e)
    else:
        nodes = frozenset(range(A.n))
    return Digraph(A.n, nodes, w)


# --------------------------------------------------------------------------
# strongly connected components

@dataclass(frozen=True)
class SccDecomposition:
    components: tuple          # tuple of frozensets, ordered by smallest node
    component_of: dict
    condensation_edges: frozenset

    def nontrivial(self, G: Digraph) -> list:
        return [c for c in self.components if is_nontrivial(G, c)]


def _tarjan(G: Digraph):
    index = {}
    low = {}
    on_stack = set()
    stack = []
    comps = []
    counter = 0
    for root in sorted(G.nodes):
        if root in index:
            continue
        # iterative Tarjan: frames are (node, iterator position)
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, pos = work[-1]
            succ = G.succ[v]
            if pos < len(succ):
                work[-1] = (v, pos + 1)
                w = succ[pos]
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, 0))
                elif w in on_stack:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                comps.append(frozenset(comp))
    return comps


def scc(G: Digraph) -> SccDecomposition:
    """Strongly connected components, numbered by their smallest node."""
    comps = sorted(_tarjan(G), key=min)
    comp_of = {v: k for k, c in enumerate(comps) for v in c}
    cond = frozenset((comp_of[i], comp_of[j]) for (i, j) in G.weights
                     if comp_of[i] != comp_of[j])
    return SccDecomposition(tuple(comps), comp_of, cond)


def is_nontrivial(G: Digraph, comp) -> bool:
    """An SCC is nontrivial if it contains a cycle."""
    if len(comp) > 1:
        return True
    (v,) = tuple(comp)
    return G.has_edge(v, v)


def nontrivial_components(G: Digraph) -> list:
    return [c for c in scc(G).components if is_nontrivial(G, c)]


def is_strongly_connected(G: Digraph) -> bool:
    return len(G.nodes) > 0 and len(scc(G).components) == 1


def is_completely_reducible(G: Digraph) -> bool:
    """No edge joins two distinct strongly connected components."""
    return not scc(G).condensation_edges


# --------------------------------------------------------------------------
# cyclicity and girth

def _component_cyclicity(G: Digraph, comp) -> int:
    root = min(comp)
    level = {root: 0}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in G.succ[u]:
            if w in comp and w not in level:
                level[w] = level[u] + 1
                queue.append(w)
    g = 0
    for (u, v) in G.weights:
        if u in comp and v in comp:
            g = math.gcd(g, level[u] + 1 - level[v])
    return g


def cyclicity_per_scc(G: Digraph) -> dict:
    """Map each nontrivial SCC to the gcd of its closed-walk lengths."""
    return {c: _component_cyclicity(G, c) for c in nontrivial_components(G)}


def cyclicity(G: Digraph) -> int:
    """lcm of the cyclicities of the nontrivial SCCs."""
    per = cyclicity_per_scc(G)
    if not per:
        raise GraphError("cyclicity undefined: graph has no cycle")
    return math.lcm(*per.values())


def _shortest_cycle_through(G: Digraph, comp, s) -> int | None:
    dist = {s: 0}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for w in G.succ[u]:
            if w not in comp:
                continue
            if w == s:
                return dist[u] + 1
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return None


def girth_per_scc(G: Digraph) -> dict:
    out = {}
    for c in nontrivial_components(G):
        out[c] = min(_shortest_cycle_through(G, c, s) for s in c)
    return out


def max_girth(G: Digraph) -> int:
    per = girth_per_scc(G)
    if not per:
        raise GraphError("girth undefined: graph has no cycle")
    return max(per.values())


def max_cyclicity(G: Digraph) -> int:
    per = cyclicity_per_scc(G)
    if not per:
        raise GraphError("cyclicity undefined: graph has no cycle")
    return max(per.values())


def girth(G: Digraph):
    """Return ``(girth_per_scc, max_girth)``."""
    return girth_per_scc(G), max_girth(G)


def shortest_cycle(G: Digraph, comp) -> tuple:
    """Lexicographically smallest shortest cycle in ``comp``.

    The cycle is returned as a node tuple starting at its smallest node.
    """
    comp = frozenset(comp)
    g = min(_shortest_cycle_through(G, comp, s) for s in comp
            if _shortest_cycle_through(G, comp, s) is not None)
    for s in sorted(comp):
        allowed = {v for v in comp if v > s} | {s}
        # back[k] = nodes that reach s in exactly k steps inside `allowed`
        back = [{s}]
        for _ in range(g):
            prev = back[-1]
            back.append({u for u in allowed for w in G.succ[u]
                         if w in prev and w in allowed})
        if s not in back[g]:
            continue
        cycle = [s]
        u = s
        for k in range(g - 1, 0, -1):
            u = min(w for w in G.succ[u] if w in allowed and w != s
                    and w in back[k])
            cycle.append(u)
        return tuple(cycle)
    raise GraphError("component has no cycle")


# --------------------------------------------------------------------------
# cycles, paths (exponential searches)

def _guard(G, node_limit, what):
    if len(G.nodes) > node_limit:
        raise SearchLimitExceeded(what, len(G.nodes), node_limit)


def enumerate_cycles(G: Digraph, node_limit: int = DEFAULT_NODE_LIMIT) -> list:
    """All elementary cycles (Johnson's algorithm).

    Each cycle is a tuple of nodes starting at its smallest node; the list is
    sorted by (length, nodes).
    """
    _guard(G, node_limit, "cycle enumeration")
    cycles = []
    order = sorted(G.nodes)
    for idx, s in enumerate(order):
        allowed = set(order[idx:])
        sub = G.subgraph(allowed)
        comp = next((c for c in scc(sub).components if s in c), None)
        if comp is None or not is_nontrivial(sub, comp):
            continue
        cycles.extend(_johnson_from(sub, comp, s))
    cycles.sort(key=lambda c: (len(c), c))
    return cycles


def _johnson_from(G: Digraph, comp, s):
    blocked = set()
    B = {v: set() for v in comp}
    path = [s]
    found = []

    def unblock(u):
        stack = [u]
        while stack:
            x = stack.pop()
            if x in blocked:
                blocked.discard(x)
                stack.extend(B[x])
                B[x].clear()

    # iterative version of the classic CIRCUIT procedure
    blocked.add(s)
    stack = [(s, iter([w for w in G.succ[s] if w in comp]), False)]
    while stack:
        v, it, closed = stack[-1]
        w = next(it, None)
        if w is not None:
            if w == s:
                found.append(tuple(path))
                stack[-1] = (v, it, True)
            elif w not in blocked:
                path.append(w)
                blocked.add(w)
                stack.append((w, iter([x for x in G.succ[w] if x in comp]), False))
            continue
        stack.pop()
        if closed:
            unblock(v)
        else:
            for w2 in G.succ[v]:
                if w2 in comp:
                    B[w2].add(v)
        path.pop()
        if stack:
            u, it_u, closed_u = stack[-1]
            stack[-1] = (u, it_u, closed_u or closed)
    return found


def cycle_weight(G: Digraph, cycle) -> Scalar:
    total = 0
    for k, u in enumerate(cycle):
        total += G.weights[(u, cycle[(k + 1) % len(cycle)])]
    return total


def cycle_mean(G: Digraph, cycle):
    return cycle_weight(G, cycle) / len(cycle)


def circumference_exact(G: Digraph, node_limit: int = DEFAULT_NODE_LIMIT) -> int:
    """Length of a longest elementary cycle (0 if acyclic)."""
    _guard(G, node_limit, "circumference")
    best = 0
    order = sorted(G.nodes)
    for s in order:
        # cycles whose smallest node is s
        stack = [(s, 1 << s, 0)]
        while stack:
            u, seen, length = stack.pop()
            for w in G.succ[u]:
                if w == s:
                    best = max(best, length + 1)
                elif w > s and not (seen >> w) & 1:
                    stack.append((w, seen | (1 << w), length + 1))
        if best == len(order):
            break
    return best


def cabdrive_exact(G: Digraph, node_limit: int = DEFAULT_NODE_LIMIT) -> int:
    """Length (in edges) of a longest elementary path."""
    _guard(G, node_limit, "cab driver's diameter")
    best = 0
    top = len(G.nodes) - 1
    for s in sorted(G.nodes):
        stack = [(s, 1 << s, 0)]
        while stack:
            u, seen, length = stack.pop()
            if length > best:
                best = length
            for w in G.succ[u]:
                if not (seen >> w) & 1:
                    stack.append((w, seen | (1 << w), length + 1))
        if best == top:
            break
    return best


def circumference_bound(G: Digraph) -> int:
    return len(G.nodes)


def cabdrive_bound(G: Digraph) -> int:
    return max(len(G.nodes) - 1, 0)


def circumference(G: Digraph, node_limit: int = DEFAULT_NODE_LIMIT):
    """``(value, exact)``: exact search when allowed, else the |G| bound."""
    try:
        return circumference_exact(G, node_limit), True
    except SearchLimitExceeded:
        return circumference_bound(G), False


def cabdrive(G: Digraph, node_limit: int = DEFAULT_NODE_LIMIT):
    try:
        return cabdrive_exact(G, node_limit), True
    except SearchLimitExceeded:
        return cabdrive_bound(G), False


# --------------------------------------------------------------------------
# Boolean powers, index, Wielandt-type bounds

def wielandt(n: int) -> int:
    """Wielandt number: 0 for n = 1, else (n-1)^2 + 1."""
    if n < 1:
        raise ValueError("n must be positive")
    return 0 if n == 1 else (n - 1) ** 2 + 1


def boolean_rows(G: Digraph, nodes=None) -> tuple[list, dict]:
    """Adjacency bitsets over a local numbering of ``nodes``."""
    nodes = sorted(G.nodes if nodes is None else nodes)
    pos = {v: k for k, v in enumerate(nodes)}
    rows = []
    for v in nodes:
        r = 0
        for w in G.succ[v]:
            if w in pos:
                r |= 1 << pos[w]
        rows.append(r)
    return rows, pos


def boolean_mul(X: list, Y: list) -> list:
    out = []
    for r in X:
        acc = 0
        k = 0
        while r:
            if r & 1:
                acc |= Y[k]
            r >>= 1
            k += 1
        out.append(acc)
    return out


def boolean_powers(rows: list, count: int) -> list:
    """``[P^0, P^1, ..., P^count]`` of a Boolean matrix given as bitsets."""
    m = len(rows)
    P = [1 << k for k in range(m)]
    out = [P]
    for _ in range(count):
        P = boolean_mul(P, rows)
        out.append(P)
    return out


def boolean_index(G: Digraph) -> int:
    """Least T with Boolean ``P^{t+γ} = P^t`` for all t ≥ T."""
    if not is_strongly_connected(G):
        raise GraphError("boolean index requires a strongly connected graph")
    gamma = cyclicity(G)
    rows, _ = boolean_rows(G)
    pw = boolean_powers(rows, wielandt(len(G.nodes)) + gamma + 1)
    for t in range(len(pw) - gamma):
        if pw[t + gamma] == pw[t]:
            return t
    raise AssertionError("boolean index exceeded the Wielandt bound")


@dataclass(frozen=True)
class IndexBounds:
    wielandt: int
    schwarz: int
    dulmage_mendelsohn: int
    kim: int

    def minimum(self) -> int:
        return min(self.wielandt, self.schwarz, self.dulmage_mendelsohn, self.kim)


def index_bounds_from_params(size: int, gamma: int, g: int) -> IndexBounds:
    r, s = divmod(size, gamma)
    return IndexBounds(
        wielandt=wielandt(size),
        schwarz=gamma * wielandt(r) + s,
        dulmage_mendelsohn=size + (size - 2) * g,
        kim=gamma * r + (r - 2) * g + s,
    )


def index_bounds(G: Digraph) -> IndexBounds:
    """Upper bounds on the Boolean index of a strongly connected graph."""
    if not is_strongly_connected(G) or not is_nontrivial(G, G.nodes):
        raise GraphError("index bounds require a strongly connected graph with a cycle")
    return index_bounds_from_params(len(G.nodes), cyclicity(G), max_girth(G))


@dataclass(frozen=True)
class GraphParams:
    size: int
    circumference: int
    circumference_exact: bool
    cabdrive: int
    cabdrive_exact: bool
    girth_per_scc: dict
    cyclicity_per_scc: dict

    @property
    def max_girth(self):
        return max(self.girth_per_scc.values()) if self.girth_per_scc else None

    @property
    def max_cyclicity(self):
        return max(self.cyclicity_per_scc.values()) if self.cyclicity_per_scc else None


def graph_params(G: Digraph, node_limit: int = DEFAULT_NODE_LIMIT) -> GraphParams:
    c, c_exact = circumference(G, node_limit)
    d, d_exact = cabdrive(G, node_limit)
    return GraphParams(len(G.nodes), c, c_exact, d, d_exact,
                       girth_per_scc(G), cyclicity_per_scc(G))
