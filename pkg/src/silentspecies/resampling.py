"""Subsample accumulation curves and percentile-bootstrap confidence
intervals for richness estimates.

All randomness flows from a single 64-bit seed; each replicate derives its
own stream via SeedSequence spawn keys, so results are bit-identical
regardless of how many worker threads execute the replicates. Replicate
results are always reduced in replicate-index order.
"""

from __future__ import annotations

import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidSize, SubsampleTooLarge
from .estimators import RichnessEstimate, chao1, chao1_counts, chao2
from .tally import AbundanceTally, IncidenceTally, Tally, spectrum

THREADS_ENV = "SILENTSPECIES_THREADS"

LOW_REPLICATE_THRESHOLD = 100


@dataclass(frozen=True)
class AccumulationPoint:
    """Average richness estimates over subsamples of k tokens."""

    k: int
    replicates: int
    mean_s_obs: float
    mean_s_hat: float
    sd_s_hat: float


@dataclass(frozen=True)
class BootstrapResult:
    """Percentile bootstrap interval around a plug-in estimate."""

    point: float
    lower: float
    upper: float
    level: float
    replicates: int
    seed: int


def resolve_workers(threads: int | None = None) -> int:
    """Worker count: explicit argument, else SILENTSPECIES_THREADS
    (0 = auto), else all CPUs."""
    if threads is None:
        threads = int(os.environ.get(THREADS_ENV, "0") or "0")
    if threads == 0:
        threads = os.cpu_count() or 1
    return max(1, threads)


def _map_replicates(
    fn: Callable[[int], np.ndarray], replicates: int, workers: int
) -> list[np.ndarray]:
    """Apply fn to each replicate index, preserving index order."""
    if workers <= 1 or replicates == 1:
        return [fn(i) for i in range(replicates)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(replicates)))


def _estimate_from_counts(values: np.ndarray, mode_chao2: bool = False,
                          m: int = 0,
                          small_sample_correction: bool = False) -> RichnessEstimate:
    """Chao estimate straight from a vector of per-species counts."""
    nonzero = values[values > 0]
    s_obs = int(nonzero.size)
    if s_obs == 0:
        # Possible only for tiny incidence resamples; treat as fully covered.
        name = "chao2" if mode_chao2 else "chao1"
        return RichnessEstimate(0, 0, 0, 0.0, 0.0, 1.0, name)
    f1 = int(np.count_nonzero(nonzero == 1))
    f2 = int(np.count_nonzero(nonzero == 2))
    est = chao1_counts(s_obs, f1, f2)
    if mode_chao2 and small_sample_correction and m >= 2:
        f0 = est.f0_hat * (m - 1) / m
        s_hat = s_obs + f0
        est = RichnessEstimate(s_obs, f1, f2, f0, s_hat, s_obs / s_hat,
                               "chao2-bc" if est.used_fallback else "chao2")
    return est


def _rng(seed: int, *spawn_key: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=spawn_key)
    )


def accumulate(
    tally: AbundanceTally,
    sizes: Sequence[int],
    replicates: int,
    seed: int,
    threads: int | None = None,
) -> list[AccumulationPoint]:
    """Accumulation curve: for each subsample size k, draw `replicates`
    subsamples of k tokens without replacement, re-estimate richness, and
    average S_obs and S_hat over replicates.
    """
    if replicates < 1:
        raise InvalidSize(f"replicates must be >= 1, got {replicates}")
    species = sorted(tally.counts)
    counts = np.array([tally.counts[s] for s in species], dtype=np.int64)
    n = int(counts.sum())
    for k in sizes:
        if k <= 0:
            raise InvalidSize(f"subsample size must be positive, got {k}")
        if k > n:
            raise SubsampleTooLarge(f"k={k} exceeds total token count n={n}")
    workers = resolve_workers(threads)
    points: list[AccumulationPoint] = []
    for size_idx, k in enumerate(sizes):

        def one(rep: int, _size_idx: int = size_idx, _k: int = k) -> np.ndarray:
            rng = _rng(seed, _size_idx, rep)
            draw = rng.multivariate_hypergeometric(counts, _k)
            est = _estimate_from_counts(draw)
            return np.array([est.s_obs, est.s_hat])

        results = _map_replicates(one, replicates, workers)
        stacked = np.vstack(results)
        s_obs_vals, s_hat_vals = stacked[:, 0], stacked[:, 1]
        sd = float(np.std(s_hat_vals, ddof=1)) if replicates > 1 else 0.0
        points.append(
            AccumulationPoint(
                k=k,
                replicates=replicates,
                mean_s_obs=float(s_obs_vals.mean()),
                mean_s_hat=float(s_hat_vals.mean()),
                sd_s_hat=sd,
            )
        )
    return points


def _sample_coverage(f1: int, f2: int, total: int) -> float:
    """Good-Turing estimate of the fraction of the assemblage already
    observed, used to size the resampling population."""
    if f1 == 0:
        return 1.0
    if f2 > 0:
        adj = (total - 1) * f1 / ((total - 1) * f1 + 2 * f2)
    else:
        adj = (total - 1) * (f1 - 1) / ((total - 1) * (f1 - 1) + 2)
    return 1.0 - (f1 / total) * adj


def _augmented_probs(
    values: np.ndarray, total: int, f0_hat: float, f1: int, f2: int
) -> np.ndarray:
    """Resampling probabilities over observed species plus the estimated
    unseen ones.

    Resampling straight from the empirical frequencies loses singletons and
    biases every replicate's richness below the plug-in estimate; appending
    the estimated unseen species (with detection-adjusted probabilities for
    the observed ones) removes that bias.
    """
    rel = values / total
    c_hat = _sample_coverage(f1, f2, total)
    f0 = int(round(f0_hat))
    undetected = rel * (1.0 - rel) ** total
    denom = float(undetected.sum())
    lam = (1.0 - c_hat) / denom if denom > 0 else 0.0
    p_obs = np.clip(rel * (1.0 - lam * (1.0 - rel) ** total), 0.0, None)
    if f0 > 0:
        p_unseen = np.full(f0, (1.0 - c_hat) / f0)
        probs = np.concatenate([p_obs, p_unseen])
    else:
        probs = p_obs
    return probs / probs.sum()


def bootstrap_ci(
    tally: Tally,
    replicates: int,
    level: float,
    seed: int,
    threads: int | None = None,
    small_sample_correction: bool = False,
) -> dict[str, BootstrapResult]:
    """Percentile bootstrap intervals for s_hat and coverage.

    Abundance tallies are resampled by drawing n tokens with replacement
    from the augmented assemblage (observed species plus the estimated
    unseen ones). Incidence tallies redraw each species' presence across m
    samples from its augmented per-sample rate; per-sample composition is
    not retained in a tally, so cross-species correlation within samples is
    not modelled.
    """
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must be in (0,1), got {level}")
    if replicates < 1:
        raise InvalidSize(f"replicates must be >= 1, got {replicates}")
    if replicates < LOW_REPLICATE_THRESHOLD:
        warnings.warn(
            f"bootstrap with {replicates} replicates; "
            f">= {LOW_REPLICATE_THRESHOLD} recommended",
            stacklevel=2,
        )

    incidence = isinstance(tally, IncidenceTally)
    if incidence:
        values = np.array(
            [tally.incidences[s] for s in sorted(tally.incidences)],
            dtype=np.int64,
        )
        m = tally.m
        point = chao2(spectrum(tally), small_sample_correction)
        # presence probability per (observed + unseen) species, scaled so
        # expected total incidences match the augmented assemblage
        probs = _augmented_probs(values, m, point.f0_hat, point.f1, point.f2)
        presence = np.clip(probs * values.sum() / m, 0.0, 1.0)
    else:
        values = np.array(
            [tally.counts[s] for s in sorted(tally.counts)], dtype=np.int64
        )
        n = int(values.sum())
        point = chao1(spectrum(tally))
        probs = _augmented_probs(values, n, point.f0_hat, point.f1, point.f2)

    def one(rep: int) -> np.ndarray:
        rng = _rng(seed, rep)
        if incidence:
            draw = rng.binomial(m, presence)
            est = _estimate_from_counts(
                draw, mode_chao2=True, m=m,
                small_sample_correction=small_sample_correction,
            )
        else:
            draw = rng.multinomial(n, probs)
            est = _estimate_from_counts(draw)
        return np.array([est.s_hat, est.coverage])

    workers = resolve_workers(threads)
    stacked = np.vstack(_map_replicates(one, replicates, workers))
    alpha = (1.0 - level) / 2.0

    def interval(col: int, point_value: float) -> BootstrapResult:
        lower, upper = np.quantile(stacked[:, col], [alpha, 1.0 - alpha])
        return BootstrapResult(
            point=point_value,
            lower=float(lower),
            upper=float(upper),
            level=level,
            replicates=replicates,
            seed=seed,
        )

    return {
        "s_hat": interval(0, point.s_hat),
        "coverage": interval(1, point.coverage),
    }
