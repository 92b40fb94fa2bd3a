"""Independent oracles and stubs used by the test suite."""

from __future__ import annotations

from collections import Counter

from bicirc.families import random_connected_graph
from bicirc.graph import Graph, validate_bicircular_instance
from bicirc.rng import ResamplingTable


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1


def uf_is_basis(g: Graph, r) -> bool:
    """Re-implementation of the basis predicate via union-find, kept
    independent of bicirc.graph.is_basis."""
    r = set(r)
    if len(r) != g.n:
        return False
    uf = UnionFind(g.n)
    for eid in r:
        uf.union(*g.edges[eid])
    vcount = Counter(uf.find(v) for v in range(g.n))
    ecount = Counter(uf.find(g.edges[eid][0]) for eid in r)
    return all(vcount[root] == ecount.get(root, 0) for root in vcount)


def all_directed_cycles(g: Graph):
    """Every directed traversal of every simple cycle of length >= 3,
    anchored at the cycle's lowest vertex (so each cycle appears exactly
    twice, once per direction).  Brute-force DFS; small graphs only."""
    out = []

    def dfs(path, s):
        u = path[-1]
        for w, _ in g.adj[u]:
            if w == s and len(path) >= 3:
                out.append(tuple(path))
            elif w > s and w not in path:
                path.append(w)
                dfs(path, s)
                path.pop()

    for s in range(g.n):
        dfs([s], s)
    return out


def biased_sample_support(g: Graph, seed: int) -> frozenset[int]:
    """Negative-control sampler: a walk that accepts the first cycle it
    closes, regardless of length or orientation.  Its output support is
    often not a basis at all."""
    table = ResamplingTable(g, seed)
    arrows = [-1] * g.n
    fixed = [False] * g.n
    for start in range(g.n):
        if fixed[start]:
            continue
        in_walk = {start}
        walk = [start]
        cur = start
        while True:
            nxt = table.next_neighbor(cur)
            arrows[cur] = nxt
            if fixed[nxt] or nxt in in_walk:
                for v in walk:
                    fixed[v] = True
                break
            in_walk.add(nxt)
            walk.append(nxt)
            cur = nxt
    return frozenset(g.edge_id(v, w) for v, w in enumerate(arrows))


def random_valid_graph(n: int, m: int, seed: int) -> Graph:
    """Random connected simple graph with m >= n (a valid instance)."""
    assert m >= n
    g = random_connected_graph(n, m, seed)
    validate_bicircular_instance(g)
    return g
