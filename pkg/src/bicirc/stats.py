"""Chi-square goodness-of-fit helpers for sampler verification."""

from __future__ import annotations

import math
from typing import Mapping, Sequence

from scipy.stats import chi2


def mean_and_se(values: Sequence[float]) -> tuple[float, float]:
    """Sample mean and its standard error."""
    n = len(values)
    mean = sum(values) / n
    if n < 2:
        return mean, float("inf")
    var = sum((x - mean) ** 2 for x in values) / (n - 1)
    return mean, math.sqrt(var / n)


def bernoulli_se(p_hat: float, n: int) -> float:
    return math.sqrt(max(p_hat * (1.0 - p_hat), 0.0) / n)


def chi_square_gof(
    counts: Mapping, probs: Mapping, total: int
) -> tuple[float, int]:
    """Chi-square statistic against expected probabilities.

    Any observed outcome outside the support of `probs` makes the
    statistic infinite: a perfect sampler never produces it.
    """
    for key, c in counts.items():
        if c > 0 and key not in probs:
            return float("inf"), max(len(probs) - 1, 1)
    stat = 0.0
    for key, p in probs.items():
        expected = p * total
        observed = counts.get(key, 0)
        stat += (observed - expected) ** 2 / expected
    return stat, len(probs) - 1


def chi_square_threshold(df: int, significance: float = 1e-3) -> float:
    return float(chi2.ppf(1.0 - significance, df))


def chi_square_uniform_test(
    counts: Mapping, support: Sequence, total: int, significance: float = 1e-3
) -> tuple[float, float, bool]:
    """(statistic, threshold, passed) for a uniform target on `support`."""
    probs = {key: 1.0 / len(support) for key in support}
    stat, df = chi_square_gof(counts, probs, total)
    threshold = chi_square_threshold(df, significance)
    return stat, threshold, stat < threshold
