"""Perfect samplers for bases and Gibbs arrow configurations.

Two engines draw from the same resampling table:

* sample_parallel -- resample every vertex on any occurring bad event,
  all at once, until none occurs (pure Python; reference engine).
* sample_lerw -- a loop-erasing random walk with a popping erasure
  rule (numba kernel; the O(n^2) production engine).

For the deterministic-orientation variant the two engines agree trace
for trace on a shared table (strong convergence); for the Gibbs
variant they agree in distribution.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .errors import BicircError
from .graph import Graph, arrow_support, cycle_orientation_sign, validate_bicircular_instance
from .rng import ResamplingTable, derive_seed


@dataclass(frozen=True)
class Deterministic:
    """Erase 2-cycles and cycles carrying the bad (+1) orientation."""


@dataclass(frozen=True)
class Gibbs:
    """Retain 2-cycles w.p. gamma2 and longer cycles w.p. gamma."""

    gamma2: float
    gamma: float

    def __post_init__(self):
        if not (0.0 <= self.gamma2 <= 1.0):
            raise BicircError(f"gamma2 must be in [0, 1], got {self.gamma2}")
        if not (0.0 < self.gamma <= 1.0):
            raise BicircError(f"gamma must be in (0, 1], got {self.gamma}")


@dataclass(frozen=True)
class BadEvent:
    kind: str  # "two-cycle" or "cycle"
    vertices: tuple[int, ...]
    edge: Optional[int] = None  # set for two-cycles


@dataclass(frozen=True)
class SampleReport:
    """Outcome of one sampler run.

    resampled excludes each vertex's first draw, so steps = n + resampled.
    """

    seed: int
    resampled: int
    steps: int
    basis: Optional[frozenset[int]] = None
    arrows: Optional[tuple[int, ...]] = None

    def to_json_dict(self) -> dict:
        d: dict = {}
        if self.basis is not None:
            d["basis"] = sorted(self.basis)
        if self.arrows is not None:
            d["arrows"] = list(self.arrows)
        d["resampled"] = self.resampled
        d["steps"] = self.steps
        d["seed"] = self.seed
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def functional_cycles(g: Graph, arrows: Sequence[int]) -> list[tuple[int, ...]]:
    """All directed cycles of the functional graph, each rotated to start
    at its lowest vertex, sorted by that vertex.  Cycles are vertex-disjoint."""
    n = g.n
    color = [0] * n
    cycles = []
    for v in range(n):
        if color[v]:
            continue
        path = []
        pos: dict[int, int] = {}
        u = v
        while color[u] == 0 and u not in pos:
            pos[u] = len(path)
            path.append(u)
            u = arrows[u]
        if color[u] == 0:  # closed a new cycle at u
            cyc = path[pos[u]:]
            k = cyc.index(min(cyc))
            cycles.append(tuple(cyc[k:] + cyc[:k]))
        for w in path:
            color[w] = 1
    cycles.sort(key=lambda c: c[0])
    return cycles


def _bad_cycles(g, arrows, variant, table, accepted):
    """Cycles of `arrows` that are currently bad under `variant`.

    For Gibbs, `accepted` memoizes cycles whose auxiliary coin already
    came up true; their vertices are never resampled, so the memo stays
    valid across iterations of the parallel engine.
    """
    bad = []
    for cyc in functional_cycles(g, arrows):
        if isinstance(variant, Deterministic):
            if len(cyc) == 2 or cycle_orientation_sign(g, cyc) == 1:
                bad.append(cyc)
        else:
            key = frozenset(cyc)
            if key in accepted:
                continue
            retain = variant.gamma2 if len(cyc) == 2 else variant.gamma
            if table.next_coin(cyc[0]) < 1.0 - retain:
                bad.append(cyc)
            else:
                accepted.add(key)
    return bad


def occurring_bad_events(
    g: Graph,
    arrows: Sequence[int],
    variant: Deterministic | Gibbs = Deterministic(),
    table: Optional[ResamplingTable] = None,
) -> list[BadEvent]:
    """Bad events present in a fully assigned configuration.

    The Gibbs variant consumes one auxiliary coin per present cycle
    from the table (required in that case).
    """
    if isinstance(variant, Gibbs) and table is None:
        raise BicircError("the Gibbs variant needs a resampling table for its coins")
    events = []
    for cyc in _bad_cycles(g, arrows, variant, table, set()):
        if len(cyc) == 2:
            events.append(BadEvent("two-cycle", cyc, edge=g.edge_id(*cyc)))
        else:
            events.append(BadEvent("cycle", cyc))
    return events


def _report(g, variant, seed, arrows, resampled):
    if isinstance(variant, Deterministic):
        return SampleReport(
            seed=seed,
            resampled=resampled,
            steps=g.n + resampled,
            basis=arrow_support(g, arrows),
        )
    return SampleReport(
        seed=seed, resampled=resampled, steps=g.n + resampled, arrows=tuple(arrows)
    )


def sample_parallel(
    g: Graph, table: ResamplingTable, variant: Deterministic | Gibbs = Deterministic()
) -> SampleReport:
    """Initialize all arrows, then repeatedly redraw every vertex lying on
    an occurring bad event until none occurs."""
    validate_bicircular_instance(g)
    arrows = [table.next_neighbor(v) for v in range(g.n)]
    accepted: set = set()
    resampled = 0
    while True:
        bad = _bad_cycles(g, arrows, variant, table, accepted)
        if not bad:
            break
        bad_vertices = sorted({v for cyc in bad for v in cyc})
        for v in bad_vertices:
            arrows[v] = table.next_neighbor(v)
        resampled += len(bad_vertices)
    return _report(g, variant, table.seed, arrows, resampled)


def sample_lerw(
    g: Graph, table: ResamplingTable, variant: Deterministic | Gibbs = Deterministic()
) -> SampleReport:
    """Loop-erasing random walk engine, always starting the next walk at
    the lowest unfixed vertex."""
    validate_bicircular_instance(g)
    indptr, nbrs, eids = g.csr()
    nbf = np.asarray(table.neighbor_frontier, dtype=np.int64)
    cof = np.asarray(table.coin_frontier, dtype=np.int64)
    deterministic = isinstance(variant, Deterministic)
    gamma2 = 0.0 if deterministic else variant.gamma2
    gamma = 0.5 if deterministic else variant.gamma
    arrows = np.empty(g.n, dtype=np.int64)
    resampled, steps = _kernels.lerw_run(
        indptr,
        nbrs,
        eids,
        np.uint64(table.seed),
        nbf,
        cof,
        deterministic,
        gamma2,
        gamma,
        arrows,
    )
    table.neighbor_frontier = [int(x) for x in nbf]
    table.coin_frontier = [int(x) for x in cof]
    return _report(g, variant, table.seed, [int(a) for a in arrows], int(resampled))


def sample_lerw_batch(
    g: Graph,
    seeds: Sequence[int],
    variant: Deterministic | Gibbs = Deterministic(),
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Many independent runs (fresh table per seed) through one kernel call.

    Returns (arrows matrix, resampled counts, step counts), row per seed.
    """
    validate_bicircular_instance(g)
    indptr, nbrs, eids = g.csr()
    seeds_arr = np.asarray([int(s) & ((1 << 64) - 1) for s in seeds], dtype=np.uint64)
    deterministic = isinstance(variant, Deterministic)
    gamma2 = 0.0 if deterministic else variant.gamma2
    gamma = 0.5 if deterministic else variant.gamma
    arrows = np.empty((len(seeds_arr), g.n), dtype=np.int64)
    resampled = np.empty(len(seeds_arr), dtype=np.int64)
    steps = np.empty(len(seeds_arr), dtype=np.int64)
    _kernels.lerw_batch(
        indptr, nbrs, eids, seeds_arr, deterministic, gamma2, gamma, arrows, resampled, steps
    )
    return arrows, resampled, steps


def sample_basis(g: Graph, seed: int, via: str = "deterministic") -> SampleReport:
    """One uniform basis.  via='deterministic' uses the orientation-sign
    rule; via='gibbs' uses the equivalent (gamma2=0, gamma=0.5) sampler."""
    table = ResamplingTable(g, seed)
    if via == "deterministic":
        return sample_lerw(g, table, Deterministic())
    if via == "gibbs":
        rep = sample_lerw(g, table, Gibbs(0.0, 0.5))
        return SampleReport(
            seed=rep.seed,
            resampled=rep.resampled,
            steps=rep.steps,
            basis=arrow_support(g, rep.arrows),
        )
    raise ValueError(f"unknown engine {via!r}")


def sample_gibbs(g: Graph, seed: int, gamma2: float, gamma: float) -> SampleReport:
    return sample_lerw(g, ResamplingTable(g, seed), Gibbs(gamma2, gamma))


def derive_sample_seeds(master: int, tag: int, count: int) -> list[int]:
    """Slot seeds for a batch: seed k depends only on (master, tag, k),
    so a k-sample run is a prefix of a (k+1)-sample run."""
    return [derive_seed(master, tag, i) for i in range(count)]
