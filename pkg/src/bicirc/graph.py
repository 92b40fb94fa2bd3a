"""Graph representation, edge-list ingestion and the cycle-sign rule.

Vertices are 0..n-1 and edges are unordered pairs (u, v) with u < v,
indexed in lexicographic order.  Both orderings are fixed once and for
all so that signs, resampling streams and serialized output are
reproducible across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    Disconnected,
    DuplicateEdge,
    EmptyGraph,
    MalformedLine,
    NotACycle,
    SelfLoop,
    TooFewEdges,
)


class Graph:
    """Immutable simple undirected graph with canonical edge indexing."""

    __slots__ = ("n", "edges", "adj", "deg", "_edge_index", "_indptr", "_nbrs", "_eids")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        pairs = []
        seen = set()
        for u, v in edges:
            if u == v:
                raise SelfLoop(f"self-loop at vertex {u}")
            if u > v:
                u, v = v, u
            if not (0 <= u and v < n):
                raise MalformedLine(f"vertex out of range in edge ({u}, {v})")
            if (u, v) in seen:
                raise DuplicateEdge(f"edge ({u}, {v}) appears twice")
            seen.add((u, v))
            pairs.append((u, v))
        pairs.sort()
        self.n = n
        self.edges = tuple(pairs)
        self._edge_index = {e: i for i, e in enumerate(self.edges)}
        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for eid, (u, v) in enumerate(self.edges):
            adj[u].append((v, eid))
            adj[v].append((u, eid))
        for lst in adj:
            lst.sort()
        self.adj = tuple(tuple(lst) for lst in adj)
        self.deg = tuple(len(lst) for lst in self.adj)
        # CSR mirror for the numba walk kernel.
        indptr = np.zeros(n + 1, dtype=np.int64)
        for v in range(n):
            indptr[v + 1] = indptr[v] + self.deg[v]
        nbrs = np.empty(indptr[-1], dtype=np.int64)
        eids = np.empty(indptr[-1], dtype=np.int64)
        pos = 0
        for v in range(n):
            for w, eid in self.adj[v]:
                nbrs[pos] = w
                eids[pos] = eid
                pos += 1
        nbrs.flags.writeable = False
        eids.flags.writeable = False
        indptr.flags.writeable = False
        self._indptr = indptr
        self._nbrs = nbrs
        self._eids = eids

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_id(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        return self._edge_index[(u, v)]

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in self._edge_index

    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self._indptr, self._nbrs, self._eids

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class DirectedCycle:
    """A directed cycle v0 -> v1 -> ... -> v0, rotated to start at its
    lowest vertex.  Length 2 denotes both orientations of one edge."""

    vertices: tuple[int, ...]

    def __post_init__(self):
        vs = tuple(self.vertices)
        if len(vs) < 2 or len(set(vs)) != len(vs):
            raise NotACycle(f"not a cycle: {vs}")
        k = vs.index(min(vs))
        object.__setattr__(self, "vertices", vs[k:] + vs[:k])

    @property
    def start_vertex(self) -> int:
        return self.vertices[0]

    def __len__(self) -> int:
        return len(self.vertices)


def parse_edge_list(text: str | bytes) -> Graph:
    """Parse the one-edge-per-line format.  '#' starts a comment line.

    Vertex ids that are not already exactly 0..n-1 are renumbered in
    order of first appearance, so parsing a canonically serialized
    graph is the identity.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    raw_pairs: list[tuple[int, int]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise MalformedLine(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise MalformedLine(f"line {lineno}: non-integer vertex in {line!r}") from None
        if u < 0 or v < 0:
            raise MalformedLine(f"line {lineno}: negative vertex id in {line!r}")
        if u == v:
            raise SelfLoop(f"line {lineno}: self-loop at vertex {u}")
        raw_pairs.append((u, v))
    if not raw_pairs:
        raise EmptyGraph("no edges in input")
    ids: dict[int, int] = {}
    for u, v in raw_pairs:
        ids.setdefault(u, len(ids))
        ids.setdefault(v, len(ids))
    if set(ids) == set(range(len(ids))):
        remap = {x: x for x in ids}
    else:
        remap = ids
    pairs = [(remap[u], remap[v]) for u, v in raw_pairs]
    return Graph(len(ids), pairs)


def serialize_edge_list(g: Graph) -> str:
    """Canonical writer: edges in lexicographic order, one per line."""
    return "".join(f"{u} {v}\n" for u, v in g.edges)


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return False
    seen = [False] * g.n
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        v = stack.pop()
        for w, _ in g.adj[v]:
            if not seen[w]:
                seen[w] = True
                count += 1
                stack.append(w)
    return count == g.n


def validate_bicircular_instance(g: Graph) -> None:
    """Raise unless g is connected with m >= n (the bicircular setting)."""
    if not is_connected(g):
        raise Disconnected(f"graph with n={g.n}, m={g.m} is not connected")
    if g.m < g.n:
        raise TooFewEdges(f"m={g.m} < n={g.n}: the basis set is empty")


def is_basis(g: Graph, r) -> bool:
    """True iff r spans g with every component unicyclic.

    Components are found by BFS; the test suite cross-checks against an
    independent union-find implementation.
    """
    r = set(r)
    if len(r) != g.n:
        return False
    adj: list[list[int]] = [[] for _ in range(g.n)]
    for eid in r:
        u, v = g.edges[eid]
        adj[u].append(v)
        adj[v].append(u)
    comp = [-1] * g.n
    ncomp = 0
    for s in range(g.n):
        if comp[s] >= 0:
            continue
        comp[s] = ncomp
        stack = [s]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if comp[w] < 0:
                    comp[w] = ncomp
                    stack.append(w)
        ncomp += 1
    vcount = [0] * ncomp
    ecount = [0] * ncomp
    for v in range(g.n):
        vcount[comp[v]] += 1
    for eid in r:
        ecount[comp[g.edges[eid][0]]] += 1
    return all(vcount[c] == ecount[c] for c in range(ncomp))


def cycle_orientation_sign(g: Graph, cycle) -> int:
    """Sign of a directed traversal of a cycle of length >= 3.

    A step u -> v contributes +1 if u < v and -1 otherwise.  Odd cycles
    take the product over all steps; even cycles skip the step whose
    undirected edge has the least edge index, so that the two traversal
    directions always get opposite signs.  Sign +1 marks the bad
    orientation.
    """
    vs = cycle.vertices if isinstance(cycle, DirectedCycle) else tuple(cycle)
    ell = len(vs)
    if ell < 3:
        raise NotACycle(f"orientation sign needs length >= 3, got {ell}")
    if len(set(vs)) != ell:
        raise NotACycle(f"repeated vertex in {vs}")
    steps = []
    for i in range(ell):
        u, v = vs[i], vs[(i + 1) % ell]
        if not g.has_edge(u, v):
            raise NotACycle(f"({u}, {v}) is not an edge")
        steps.append((g.edge_id(u, v), 1 if u < v else -1))
    skip = min(eid for eid, _ in steps) if ell % 2 == 0 else None
    sign = 1
    for eid, s in steps:
        if eid != skip:
            sign *= s
    return sign


def arrow_support(g: Graph, arrows: Sequence[int]) -> frozenset[int]:
    """Undirected edge set underlying an arrow configuration."""
    return frozenset(g.edge_id(v, w) for v, w in enumerate(arrows))


def prod_degrees(g: Graph) -> int:
    p = 1
    for d in g.deg:
        p *= d
    return p
