"""Undirected simple graphs over basis states, and the subset quantities
(edge boundary, conductance, induced subgraph, Cheeger constant) the
transition bounds are built from.

Nodes are dense integers 0..n-1; adjacency is stored in compressed
neighbor-list (CSR) form.  For hypercubes the node id is the bitstring
label, so qubit k's flip partner of node z is z ^ (1 << k).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np
import scipy.sparse as sp

from .errors import GenerationError, ParameterError, ValidationError

__all__ = [
    "Graph",
    "NodeSet",
    "random_regular",
    "hypercube",
    "edge_boundary",
    "conductance",
    "induced_subgraph",
    "max_degree_in",
    "avg_degree_in",
    "bfs_farthest_pair",
    "cheeger_constant",
    "connected_components",
    "graph_to_json",
    "graph_from_json",
]


class Graph:
    """Immutable undirected simple graph in CSR neighbor-list form.

    Attributes:
        n: node count.
        indptr, indices: CSR neighbor lists, neighbors of i sorted in
            indices[indptr[i]:indptr[i+1]].
        d: declared regularity degree, or None.
        hypercube_bits: set when the graph is an n_q-dimensional hypercube
            (used for compact serialization).
    """

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray,
                 d: Optional[int] = None, hypercube_bits: Optional[int] = None,
                 validate: bool = True):
        self.n = int(n)
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.d = None if d is None else int(d)
        self.hypercube_bits = hypercube_bits
        self._adj = None
        if validate:
            self._check_invariants()
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]],
                   d: Optional[int] = None, **kw) -> "Graph":
        edges = [(int(i), int(j)) for i, j in edges]
        for i, j in edges:
            if i == j:
                raise ValidationError(f"self-loop at node {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise ValidationError(f"edge ({i},{j}) outside 0..{n - 1}")
        if len(set(frozenset(e) for e in edges)) != len(edges):
            raise ValidationError("duplicate edges")
        deg = np.zeros(n, dtype=np.int64)
        for i, j in edges:
            deg[i] += 1
            deg[j] += 1
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(deg, out=indptr[1:])
        indices = np.empty(indptr[-1], dtype=np.int64)
        fill = indptr[:-1].copy()
        for i, j in edges:
            indices[fill[i]] = j
            fill[i] += 1
            indices[fill[j]] = i
            fill[j] += 1
        for i in range(n):
            indices[indptr[i]:indptr[i + 1]].sort()
        return cls(n, indptr, indices, d=d, **kw)

    def _check_invariants(self):
        if self.n < 0 or len(self.indptr) != self.n + 1:
            raise ValidationError("malformed indptr")
        deg = np.diff(self.indptr)
        for i in range(self.n):
            nbrs = self.neighbors(i)
            if len(nbrs) and (np.any(np.diff(nbrs) <= 0)):
                raise ValidationError(f"neighbors of {i} not sorted/unique")
            if np.any(nbrs == i):
                raise ValidationError(f"self-loop at node {i}")
        # undirectedness: j in N(i) <=> i in N(j)
        rows = np.repeat(np.arange(self.n), deg)
        fwd = set(zip(rows.tolist(), self.indices.tolist()))
        for i, j in fwd:
            if (j, i) not in fwd:
                raise ValidationError(f"edge ({i},{j}) has no reverse")
        if self.d is not None and self.n and not np.all(deg == self.d):
            raise ValidationError(f"graph declared {self.d}-regular but is not")

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def degree(self, i: int) -> int:
        return int(self.indptr[i + 1] - self.indptr[i])

    @property
    def num_edges(self) -> int:
        return len(self.indices) // 2

    def edges(self) -> list[tuple[int, int]]:
        """Edge list with i < j, sorted lexicographically."""
        out = []
        for i in range(self.n):
            for j in self.neighbors(i):
                if i < j:
                    out.append((i, int(j)))
        return out

    def adjacency(self) -> sp.csr_array:
        """Cached sparse adjacency matrix (float64 data)."""
        if self._adj is None:
            data = np.ones(len(self.indices), dtype=np.float64)
            self._adj = sp.csr_array((data, self.indices, self.indptr),
                                     shape=(self.n, self.n))
        return self._adj

    def adjacency_matvec(self, x: np.ndarray) -> np.ndarray:
        return self.adjacency() @ x

    def __repr__(self):
        tag = f", hypercube={self.hypercube_bits}" if self.hypercube_bits else ""
        return f"Graph(n={self.n}, m={self.num_edges}, d={self.d}{tag})"


@dataclass(frozen=True)
class NodeSet:
    """A subset of a graph's nodes, tied to its parent graph."""

    members: frozenset
    graph: Graph

    def __post_init__(self):
        for i in self.members:
            if not (0 <= i < self.graph.n):
                raise ValidationError(f"node {i} outside parent graph")

    def __len__(self):
        return len(self.members)

    def sorted(self) -> np.ndarray:
        return np.fromiter(sorted(self.members), dtype=np.int64,
                           count=len(self.members))


def _as_nodes(g: Graph, v, require_nonempty: bool = True) -> np.ndarray:
    """Normalize a NodeSet/iterable into a sorted unique id array."""
    if isinstance(v, NodeSet):
        if v.graph is not g:
            raise ValidationError("NodeSet belongs to a different graph")
        arr = v.sorted()
    else:
        arr = np.unique(np.fromiter((int(i) for i in v), dtype=np.int64))
    if arr.size and (arr[0] < 0 or arr[-1] >= g.n):
        raise ValidationError("node ids outside graph")
    if require_nonempty and arr.size == 0:
        raise ValidationError("empty node set")
    return arr


def random_regular(n: int, d: int, seed: int, max_retries: int = 1000) -> Graph:
    """Random connected d-regular simple graph on n nodes, deterministic
    for a fixed seed.

    Uses the pairing (configuration) model with repair of clashing stubs;
    disconnected results are regenerated.
    """
    if n <= 0 or d < 0:
        raise ParameterError("n must be positive and d non-negative")
    if (n * d) % 2 != 0:
        raise ParameterError(f"n*d = {n * d} is odd; no {d}-regular graph on {n} nodes")
    if d >= n:
        raise ParameterError(f"need d < n, got d={d}, n={n}")
    if d == 0 and n > 1:
        raise ParameterError("d=0 graph on >1 nodes cannot be connected")
    rng = np.random.default_rng(seed)

    def try_pairing():
        edges = set()
        stubs = list(range(n)) * d
        while stubs:
            potential = {}
            rng.shuffle(stubs)
            it = iter(stubs)
            for s1, s2 in zip(it, it):
                if s1 > s2:
                    s1, s2 = s2, s1
                if s1 != s2 and (s1, s2) not in edges:
                    edges.add((s1, s2))
                else:
                    potential[s1] = potential.get(s1, 0) + 1
                    potential[s2] = potential.get(s2, 0) + 1
            if potential and not _suitable(edges, potential):
                return None
            stubs = [node for node, c in potential.items() for _ in range(c)]
        return edges

    for _ in range(max_retries):
        edges = try_pairing()
        if edges is None:
            continue
        g = Graph.from_edges(n, sorted(edges), d=d)
        if len(connected_components(g)) == 1:
            return g
    raise GenerationError(
        f"no simple connected {d}-regular graph on {n} nodes after {max_retries} tries")


def _suitable(edges: set, potential: dict) -> bool:
    """True if the leftover stubs can still be paired into new simple edges."""
    nodes = list(potential)
    for a in range(len(nodes)):
        for b in range(a + 1, len(nodes)):
            s1, s2 = nodes[a], nodes[b]
            if s1 > s2:
                s1, s2 = s2, s1
            if (s1, s2) not in edges:
                return True
    return False


def hypercube(n_q: int) -> Graph:
    """n_q-dimensional hypercube: 2**n_q nodes, adjacency = single bit flips."""
    if not (1 <= n_q <= 24):
        raise ParameterError(f"n_q={n_q} outside 1..24")
    n = 1 << n_q
    ids = np.arange(n, dtype=np.int64)[:, None]
    nbrs = ids ^ (np.int64(1) << np.arange(n_q, dtype=np.int64))[None, :]
    nbrs.sort(axis=1)
    indptr = np.arange(n + 1, dtype=np.int64) * n_q
    # construction guarantees the invariants; skip the O(n log n) recheck
    return Graph(n, indptr, nbrs.ravel(), d=n_q, hypercube_bits=n_q,
                 validate=False)


def _member_mask(g: Graph, nodes: np.ndarray) -> np.ndarray:
    mask = np.zeros(g.n, dtype=bool)
    mask[nodes] = True
    return mask


def _neighbors_of_set(g: Graph, nodes: np.ndarray) -> np.ndarray:
    """Concatenated neighbor lists of the given nodes."""
    if nodes.size == 0:
        return np.empty(0, dtype=np.int64)
    parts = [g.indices[g.indptr[i]:g.indptr[i + 1]] for i in nodes]
    return np.concatenate(parts)


def edge_boundary(g: Graph, v) -> int:
    """Number of edges with exactly one endpoint in v."""
    nodes = _as_nodes(g, v, require_nonempty=False)
    mask = _member_mask(g, nodes)
    nbrs = _neighbors_of_set(g, nodes)
    return int(np.count_nonzero(~mask[nbrs]))


def conductance(g: Graph, v) -> Fraction:
    """phi(v) = |edge boundary| / |v|, exact rational."""
    nodes = _as_nodes(g, v)
    return Fraction(edge_boundary(g, nodes), len(nodes))


def induced_subgraph(g: Graph, v) -> tuple[Graph, np.ndarray]:
    """Subgraph on v with only internal edges, nodes re-indexed 0..|v|-1.

    Returns (subgraph, old_ids) where old_ids[new] = original node id.
    """
    nodes = _as_nodes(g, v)
    mask = _member_mask(g, nodes)
    new_id = np.full(g.n, -1, dtype=np.int64)
    new_id[nodes] = np.arange(len(nodes))
    indptr = np.zeros(len(nodes) + 1, dtype=np.int64)
    rows = []
    for k, i in enumerate(nodes):
        nbrs = g.neighbors(i)
        internal = new_id[nbrs[mask[nbrs]]]
        internal.sort()
        rows.append(internal)
        indptr[k + 1] = indptr[k] + len(internal)
    indices = np.concatenate(rows) if rows else np.empty(0, dtype=np.int64)
    sub = Graph(len(nodes), indptr, indices, validate=False)
    return sub, nodes


def max_degree_in(g: Graph, v) -> int:
    """Maximum degree of the subgraph induced by v."""
    nodes = _as_nodes(g, v)
    mask = _member_mask(g, nodes)
    best = 0
    for i in nodes:
        nbrs = g.neighbors(i)
        best = max(best, int(np.count_nonzero(mask[nbrs])))
    return best


def avg_degree_in(g: Graph, v) -> Fraction:
    """Average induced degree of v in a d-regular graph, as d - phi(v).

    Cross-checks the identity against a direct degree sum (both exact).
    """
    nodes = _as_nodes(g, v)
    if g.d is None or not np.all(g.degrees() == g.d):
        raise ValidationError("avg_degree_in requires a regular parent graph")
    phi = conductance(g, nodes)
    mask = _member_mask(g, nodes)
    total = sum(int(np.count_nonzero(mask[g.neighbors(i)])) for i in nodes)
    direct = Fraction(total, len(nodes))
    identity = g.d - phi
    if direct != identity:
        raise AssertionError(
            f"degree identity violated: {direct} != {identity}")
    return identity


def _bfs_levels(g: Graph, source: int) -> np.ndarray:
    level = np.full(g.n, -1, dtype=np.int64)
    level[source] = 0
    frontier = [source]
    depth = 0
    while frontier:
        depth += 1
        nxt = []
        for i in frontier:
            for j in g.neighbors(i):
                if level[j] < 0:
                    level[j] = depth
                    nxt.append(int(j))
        frontier = nxt
    return level


def bfs_farthest_pair(g: Graph) -> tuple[int, int]:
    """Heuristic farthest node pair by double-sweep BFS; ties broken by
    lowest node id, so the result is deterministic."""
    if g.n == 0:
        raise ValidationError("empty graph")
    lv0 = _bfs_levels(g, 0)
    if np.any(lv0 < 0):
        raise ValidationError("graph is disconnected")
    u = int(np.argmax(lv0))       # argmax returns the lowest index on ties
    lvu = _bfs_levels(g, u)
    w = int(np.argmax(lvu))
    return u, w


def cheeger_constant(g: Graph) -> Fraction:
    """phi_0 = min conductance over non-empty subsets of at most half the
    nodes, by exhaustive enumeration (|V| <= 20)."""
    n = g.n
    if n > 20:
        raise ParameterError(f"brute-force Cheeger limited to 20 nodes, got {n}")
    if n < 2:
        raise ParameterError("Cheeger constant needs at least 2 nodes")
    masks = np.arange(1, 1 << n, dtype=np.uint32)
    sizes = np.bitwise_count(masks).astype(np.int64)
    boundary = np.zeros(masks.shape, dtype=np.int64)
    for i, j in g.edges():
        boundary += ((masks >> i) ^ (masks >> j)) & 1
    keep = 2 * sizes <= n
    ratios = boundary[keep] / sizes[keep]
    kept_b = boundary[keep]
    kept_s = sizes[keep]
    near = np.flatnonzero(ratios <= ratios.min() * (1 + 1e-12) + 1e-300)
    best = min(Fraction(int(kept_b[k]), int(kept_s[k])) for k in near)
    return best


def connected_components(g: Graph) -> list[NodeSet]:
    """Partition of the nodes into maximal connected sets, ordered by
    smallest member."""
    seen = np.zeros(g.n, dtype=bool)
    comps = []
    for start in range(g.n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        members = []
        while stack:
            i = stack.pop()
            members.append(i)
            for j in g.neighbors(i):
                if not seen[j]:
                    seen[j] = True
                    stack.append(int(j))
        comps.append(NodeSet(frozenset(members), g))
    return comps


def graph_to_json(g: Graph) -> dict:
    if g.hypercube_bits is not None:
        return {"hypercube": g.hypercube_bits}
    return {"n": g.n, "d": g.d, "edges": [[i, j] for i, j in g.edges()]}


def graph_from_json(obj: dict) -> Graph:
    if "hypercube" in obj:
        return hypercube(int(obj["hypercube"]))
    return Graph.from_edges(int(obj["n"]), obj["edges"],
                            d=obj.get("d"))
