"""Synthetic populations with known true richness, used as a ground-truth
oracle for validating the estimators end to end."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpec
from .tally import AbundanceTally, IncidenceTally, ObservationRecord, tally_incidence

UNIFORM = "uniform"
ZIPF = "zipf"
LOGNORMAL = "lognormal"

DISTRIBUTIONS = (UNIFORM, ZIPF, LOGNORMAL)


@dataclass(frozen=True)
class PopulationSpec:
    """A population of s_true species with a chosen relative-abundance
    shape. `alpha` applies to zipf, `sigma` to lognormal; `seed` only
    matters for lognormal, whose abundances are themselves random."""

    s_true: int
    distribution: str = UNIFORM
    alpha: float = 1.0
    sigma: float = 1.0
    seed: int = 0


def generate(spec: PopulationSpec) -> np.ndarray:
    """Relative abundance vector of length s_true, summing to 1."""
    if spec.s_true < 1:
        raise InvalidSpec(f"s_true must be >= 1, got {spec.s_true}")
    if spec.distribution == UNIFORM:
        probs = np.full(spec.s_true, 1.0 / spec.s_true)
    elif spec.distribution == ZIPF:
        if spec.alpha <= 0:
            raise InvalidSpec(f"zipf alpha must be > 0, got {spec.alpha}")
        weights = np.arange(1, spec.s_true + 1, dtype=float) ** -spec.alpha
        probs = weights / weights.sum()
    elif spec.distribution == LOGNORMAL:
        if spec.sigma <= 0:
            raise InvalidSpec(f"lognormal sigma must be > 0, got {spec.sigma}")
        rng = np.random.default_rng(spec.seed)
        weights = rng.lognormal(mean=0.0, sigma=spec.sigma, size=spec.s_true)
        probs = weights / weights.sum()
    else:
        raise InvalidSpec(f"unknown distribution {spec.distribution!r}")
    return probs


def _species_labels(count: int) -> list[str]:
    width = max(4, len(str(count)))
    return [f"sp{i:0{width}d}" for i in range(1, count + 1)]


def sample(population: np.ndarray, n: int, seed: int) -> AbundanceTally:
    """Draw n tokens (exact multinomial) from the population and tally."""
    if n < 1:
        raise InvalidSpec(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed))
    draws = rng.multinomial(n, population)
    labels = _species_labels(population.size)
    counts = {labels[i]: int(c) for i, c in enumerate(draws) if c > 0}
    return AbundanceTally(counts, n)


def sample_site_records(
    population: np.ndarray,
    m: int,
    per_site_n: int,
    detection: float = 1.0,
    seed: int = 0,
) -> list[ObservationRecord]:
    """Draw m independent sites of per_site_n tokens each and return the
    per-site observation records. `detection` < 1 independently thins each
    observed token before it is recorded."""
    if m < 1:
        raise InvalidSpec(f"m must be >= 1, got {m}")
    if per_site_n < 1:
        raise InvalidSpec(f"per_site_n must be >= 1, got {per_site_n}")
    if not 0.0 < detection <= 1.0:
        raise InvalidSpec(f"detection must be in (0,1], got {detection}")
    labels = _species_labels(population.size)
    site_width = max(4, len(str(m)))
    records: list[ObservationRecord] = []
    for site in range(m):
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=seed, spawn_key=(site,))
        )
        draws = rng.multinomial(per_site_n, population)
        if detection < 1.0:
            draws = rng.binomial(draws, detection)
        sample_id = f"site{site + 1:0{site_width}d}"
        for i in np.nonzero(draws)[0]:
            records.append(
                ObservationRecord(sample_id, labels[i], int(draws[i]))
            )
    return records


def sample_sites(
    population: np.ndarray,
    m: int,
    per_site_n: int,
    detection: float = 1.0,
    seed: int = 0,
) -> IncidenceTally:
    """Incidence tally over m independently drawn sites. Raises EmptyDataset
    if detection thinning removed every observation."""
    return tally_incidence(
        sample_site_records(population, m, per_site_n, detection, seed)
    )
