"""Small confidence-interval helpers for the Monte-Carlo estimators."""
from __future__ import annotations

import math
from statistics import NormalDist


def hoeffding_radius(n: int, alpha: float, tests: int = 1) -> float:
    """Two-sided Hoeffding radius for ``n`` bounded samples, union bound over ``tests``."""
    if n <= 0:
        return math.inf
    return math.sqrt(math.log(2 * max(tests, 1) / alpha) / (2 * n))


def z_value(confidence: float) -> float:
    return NormalDist().inv_cdf(0.5 + confidence / 2)


def wilson_interval(successes: int, n: int, confidence: float = 0.95) -> tuple:
    if n == 0:
        return (0.0, 1.0)
    z = z_value(confidence)
    p = successes / n
    den = 1 + z * z / n
    mid = (p + z * z / (2 * n)) / den
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den
    return (max(0.0, mid - half), min(1.0, mid + half))
