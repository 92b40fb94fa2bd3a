"""Exact counting oracles and the two FPRAS counters.

The oracles (basis enumeration, partition function, exact expected
resample count) brute-force desk-scale instances behind explicit
guards.  The counters reduce counting to sampling: a telescoping
edge-deletion product, and a two-stage annealing over the Gibbs
family (gamma2, gamma).
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels
from .errors import EmptySupport, TooLarge, ZeroRatio
from .graph import Graph, cycle_orientation_sign, is_basis, prod_degrees, validate_bicircular_instance
from .rng import derive_seed
from .sampler import Deterministic, Gibbs, functional_cycles, sample_lerw_batch

ENUMERATION_GUARD = 10**6


@dataclass(frozen=True)
class CountEstimate:
    estimate: float
    epsilon: float
    method: str  # "exact" | "telescope" | "anneal"
    samples_used: int
    seed: int
    success_prob: float = 0.75
    diagnostics: dict = field(default_factory=dict, compare=False, repr=False)

    def to_json_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "epsilon": self.epsilon,
            "method": self.method,
            "samples": self.samples_used,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


@dataclass(frozen=True)
class DeletionSequence:
    """Spanning unicyclic base plus the remaining edges in removal order
    (highest edge id first).  Every prefix graph keeps the base, hence
    stays connected with m >= n."""

    base_edges: frozenset[int]
    removal_order: tuple[int, ...]


@dataclass(frozen=True)
class AnnealSchedule:
    stage: str  # "one" | "two"
    beta_grid: tuple[float, ...]
    delta_beta: float
    samples_per_level: int


def enumerate_bases(g: Graph) -> list[frozenset[int]]:
    """All bases, by exhausting n-subsets of edges (lexicographic order)."""
    if math.comb(g.m, g.n) > ENUMERATION_GUARD:
        raise TooLarge(f"C({g.m}, {g.n}) exceeds the enumeration guard")
    return [
        frozenset(r)
        for r in itertools.combinations(range(g.m), g.n)
        if is_basis(g, r)
    ]


def _iter_configs(g: Graph):
    """Every arrow configuration, as a tuple of head vertices."""
    return itertools.product(*[[w for w, _ in g.adj[v]] for v in range(g.n)])


def _guard_configs(g: Graph):
    if prod_degrees(g) > ENUMERATION_GUARD:
        raise TooLarge("prod(deg) exceeds the enumeration guard")


def exact_partition_function(g: Graph, gamma2: float, gamma: float) -> float:
    """Z_{gamma2,gamma} by full enumeration (0^0 = 1 convention)."""
    _guard_configs(g)
    total = 0.0
    for arrows in _iter_configs(g):
        c2 = c = 0
        for cyc in functional_cycles(g, arrows):
            if len(cyc) == 2:
                c2 += 1
            else:
                c += 1
        total += gamma2**c2 * gamma**c
    return total


def exact_gibbs_distribution(g: Graph, gamma2: float, gamma: float) -> dict[tuple, float]:
    """Exact probabilities of every arrow configuration under the Gibbs
    weights, restricted to the support."""
    _guard_configs(g)
    weights: dict[tuple, float] = {}
    for arrows in _iter_configs(g):
        c2 = c = 0
        for cyc in functional_cycles(g, arrows):
            if len(cyc) == 2:
                c2 += 1
            else:
                c += 1
        w = gamma2**c2 * gamma**c
        if w > 0.0:
            weights[arrows] = w
    z = sum(weights.values())
    return {k: w / z for k, w in weights.items()}


def exact_expected_resamples(g: Graph) -> float:
    """Exact expected resampled-variable count of the deterministic
    sampler: (|one-flaw states weighted by event size|) / |flawless states|."""
    _guard_configs(g)
    flawless = 0
    weighted = 0
    for arrows in _iter_configs(g):
        bad_sizes = []
        for cyc in functional_cycles(g, arrows):
            if len(cyc) == 2 or cycle_orientation_sign(g, cyc) == 1:
                bad_sizes.append(len(cyc))
        if not bad_sizes:
            flawless += 1
        elif len(bad_sizes) == 1:
            weighted += bad_sizes[0]
    if flawless == 0:
        raise EmptySupport("no flawless configuration")
    return weighted / flawless


def build_deletion_sequence(g: Graph, seed: int = 0) -> DeletionSequence:
    """DFS spanning tree plus the lowest non-tree edge as the base; the
    rest removed in descending edge-id order.  Deterministic; the seed
    argument is accepted for interface symmetry only."""
    validate_bicircular_instance(g)
    tree: set[int] = set()
    seen = [False] * g.n
    stack = [0]
    seen[0] = True
    while stack:
        v = stack.pop()
        for w, eid in g.adj[v]:
            if not seen[w]:
                seen[w] = True
                tree.add(eid)
                stack.append(w)
    non_tree = sorted(set(range(g.m)) - tree)
    base = frozenset(tree | {non_tree[0]})
    removal = tuple(sorted(non_tree[1:], reverse=True))
    return DeletionSequence(base_edges=base, removal_order=removal)


def subgraph(g: Graph, edge_ids) -> Graph:
    """Spanning subgraph on the same vertex set."""
    return Graph(g.n, [g.edges[e] for e in sorted(edge_ids)])


def count_exact(g: Graph, seed: int = 0) -> CountEstimate:
    validate_bicircular_instance(g)
    return CountEstimate(
        estimate=float(len(enumerate_bases(g))),
        epsilon=0.0,
        method="exact",
        samples_used=0,
        seed=seed,
        success_prob=1.0,
    )


def telescope_sample_count(g: Graph, epsilon: float) -> int:
    return math.ceil(40 * g.n * g.m / epsilon**2)


def count_fpras_telescope(g: Graph, epsilon: float, seed: int) -> CountEstimate:
    """Estimate |B| as the inverse of a product of edge-deletion ratios,
    each the mean of t basis-membership indicators.

    Guarantee: relative error <= epsilon with probability >= 3/4.
    """
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must be in (0, 1)")
    validate_bicircular_instance(g)
    seq = build_deletion_sequence(g)
    t = telescope_sample_count(g, epsilon)
    remaining = set(range(g.m))
    product = 1.0
    samples_used = 0
    ratios = []
    for level, eid in enumerate(seq.removal_order):
        sub = subgraph(g, remaining)
        u, v = g.edges[eid]
        seeds = [derive_seed(seed, 1, level, s) for s in range(t)]
        arrows, _, _ = sample_lerw_batch(sub, seeds, Deterministic())
        xbar = float(np.mean((arrows[:, u] != v) & (arrows[:, v] != u)))
        if xbar == 0.0:
            raise ZeroRatio(f"all {t} sampled bases of level {level} contain edge {eid}")
        product *= xbar
        samples_used += t
        ratios.append({"edge": eid, "mean": xbar, "samples": t})
        remaining.discard(eid)
    return CountEstimate(
        estimate=1.0 / product,
        epsilon=epsilon,
        method="telescope",
        samples_used=samples_used,
        seed=seed,
        diagnostics={"ratios": ratios, "t": t},
    )


def make_anneal_schedules(g: Graph, epsilon: float) -> tuple[AnnealSchedule, AnnealSchedule]:
    """Fixed inverse-temperature grids for the two annealing stages.

    Stage one cools the 2-cycle weight gamma2 = e^-beta from 1 down to
    1/(2n^2) (the grid endpoint; the jump to gamma2 = 0 is a separate
    ratio), with spacing <= 2/n so each level ratio is >= 1/e since the
    2-cycle count is at most n/2.  Stage two cools gamma from 1 to
    exactly 1/2 with spacing <= 3/n (long-cycle count <= n/3).
    """
    n = g.n
    beta_max1 = math.log(2 * n * n)
    k1 = max(1, math.ceil(n * beta_max1 / 2.0))
    grid1 = tuple(beta_max1 * i / k1 for i in range(k1 + 1))
    beta_max2 = math.log(2.0)
    k2 = max(1, math.ceil(n * beta_max2 / 3.0))
    grid2 = tuple(beta_max2 * i / k2 for i in range(k2 + 1))
    levels1 = k1 + 1  # grid ratios plus the jump to gamma2 = 0
    s1 = math.ceil(32 * levels1 / epsilon**2)
    s2 = math.ceil(32 * k2 / epsilon**2)
    return (
        AnnealSchedule("one", grid1, beta_max1 / k1, s1),
        AnnealSchedule("two", grid2, beta_max2 / k2, s2),
    )


def _gibbs_cycle_counts(g, seeds, gamma2, gamma):
    arrows, _, _ = sample_lerw_batch(g, seeds, Gibbs(gamma2, gamma))
    c2 = np.empty(arrows.shape[0], dtype=np.int64)
    c = np.empty(arrows.shape[0], dtype=np.int64)
    _kernels.cycle_counts_batch(arrows, c2, c)
    return c2, c


def count_fpras_anneal(g: Graph, epsilon: float, seed: int) -> CountEstimate:
    """Two-stage annealed product estimator for |B|.

    Starts from the closed form Z_{1,1} = prod(deg) and multiplies the
    estimated ratios Z(next)/Z(level) = E[e^{-dbeta * H}] down to
    Z_{0,1}, then to Z_{0,1/2} = |B|.
    """
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must be in (0, 1)")
    validate_bicircular_instance(g)
    sched1, sched2 = make_anneal_schedules(g, epsilon)
    estimate = float(prod_degrees(g))
    samples_used = 0
    level_ratios = []

    grid = sched1.beta_grid
    for k in range(len(grid) - 1):
        gamma2 = math.exp(-grid[k])
        dbeta = grid[k + 1] - grid[k]
        seeds = [derive_seed(seed, 2, k, s) for s in range(sched1.samples_per_level)]
        c2, _ = _gibbs_cycle_counts(g, seeds, gamma2, 1.0)
        vals = np.exp(-dbeta * c2.astype(np.float64))
        ratio = float(np.mean(vals))
        se = float(np.std(vals, ddof=1) / math.sqrt(len(vals)))
        estimate *= ratio
        samples_used += len(seeds)
        level_ratios.append({"stage": "one", "level": k, "ratio": ratio, "se": se})

    # Jump to gamma2 = 0: the fraction of 2-cycle-free configurations at
    # the terminal temperature, >= 1/2 by the choice gamma2 = 1/(2n^2).
    gamma2_end = math.exp(-grid[-1])
    seeds = [derive_seed(seed, 3, 0, s) for s in range(sched1.samples_per_level)]
    c2, _ = _gibbs_cycle_counts(g, seeds, gamma2_end, 1.0)
    jump = float(np.mean(c2 == 0))
    if jump == 0.0:
        raise ZeroRatio("no 2-cycle-free sample at the stage-one endpoint")
    jump_se = float(np.std((c2 == 0).astype(np.float64), ddof=1) / math.sqrt(len(c2)))
    estimate *= jump
    samples_used += len(seeds)

    grid = sched2.beta_grid
    for k in range(len(grid) - 1):
        gamma = math.exp(-grid[k])
        dbeta = grid[k + 1] - grid[k]
        seeds = [derive_seed(seed, 4, k, s) for s in range(sched2.samples_per_level)]
        _, c = _gibbs_cycle_counts(g, seeds, 0.0, gamma)
        vals = np.exp(-dbeta * c.astype(np.float64))
        ratio = float(np.mean(vals))
        se = float(np.std(vals, ddof=1) / math.sqrt(len(vals)))
        estimate *= ratio
        samples_used += len(seeds)
        level_ratios.append({"stage": "two", "level": k, "ratio": ratio, "se": se})

    return CountEstimate(
        estimate=estimate,
        epsilon=epsilon,
        method="anneal",
        samples_used=samples_used,
        seed=seed,
        diagnostics={
            "level_ratios": level_ratios,
            "stage_one_jump": {"ratio": jump, "se": jump_se},
            "schedules": (sched1, sched2),
        },
    )
