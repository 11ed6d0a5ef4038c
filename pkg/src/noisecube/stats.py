"""Seeded random streams and interval estimates shared by the Monte Carlo drivers."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy.stats import binomtest


class Estimate(NamedTuple):
    value: float
    stderr: float


class Proportion(NamedTuple):
    successes: int
    trials: int
    rate: float
    low: float
    high: float
    confidence: float


def substreams(seed, count: int, *key: int) -> list[np.random.Generator]:
    """Independent generators for ``count`` tasks, keyed by ``(seed, *key)``.

    Results depend only on the seed and the task index, never on the order in
    which tasks are executed.
    """
    root = np.random.SeedSequence([int(seed), *map(int, key)])
    return [np.random.default_rng(child) for child in root.spawn(count)]


def make_rng(seed, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, key)]))


def mean_estimate(samples: np.ndarray) -> Estimate:
    samples = np.asarray(samples, dtype=float)
    if samples.size == 1:
        return Estimate(float(samples[0]), math.nan)
    if np.all(samples == samples[0]):
        return Estimate(float(samples[0]), 0.0)
    mean = float(samples.mean())
    return Estimate(mean, float(samples.std(ddof=1) / math.sqrt(samples.size)))


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> Proportion:
    if trials < 1:
        raise ValueError("need at least one trial")
    ci = binomtest(int(successes), int(trials)).proportion_ci(
        confidence_level=confidence, method="wilson")
    return Proportion(int(successes), int(trials), successes / trials,
                      float(ci.low), float(ci.high), confidence)
