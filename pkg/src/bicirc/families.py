"""Small graph families used as test fixtures and CLI demo inputs."""

from __future__ import annotations

import random

from .graph import Graph


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs n >= 3")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle_with_chord(n: int = 4, chord: tuple[int, int] = (0, 2)) -> Graph:
    edges = [(i, (i + 1) % n) for i in range(n)]
    edges.append(chord)
    return Graph(n, edges)


def random_connected_graph(n: int, m: int, seed: int) -> Graph:
    """Uniformly messy connected simple graph: random attachment tree plus
    random extra edges up to m."""
    if m < n - 1 or m > n * (n - 1) // 2:
        raise ValueError(f"no simple connected graph with n={n}, m={m}")
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    edges = set()
    for i in range(1, n):
        u, v = order[i], order[rng.randrange(i)]
        edges.add((min(u, v), max(u, v)))
    candidates = [
        (u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in edges
    ]
    rng.shuffle(candidates)
    for e in candidates[: m - len(edges)]:
        edges.add(e)
    return Graph(n, sorted(edges))
