"""Chao-type richness estimators, coverage, and diversity proxies.

The estimator needs only three numbers from a frequency spectrum: S_obs (the
number of distinct species seen), f1 (singletons) and f2 (doubletons). The
classic form estimates the unseen species count as f1^2 / (2*f2); when f2 = 0
the bias-corrected continuity completion f1*(f1-1)/2 is used instead and the
result is labelled "-bc" so the substitution stays auditable. The estimate is
a lower bound on the true richness, which makes the derived coverage
S_obs / S_hat an upper bound on the fraction of species already observed.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import InsufficientSamples
from .tally import (
    ABUNDANCE,
    INCIDENCE,
    AbundanceTally,
    FrequencySpectrum,
    IncidenceTally,
    Tally,
)


@dataclass(frozen=True)
class ConfidenceInterval:
    lower: float
    upper: float
    level: float
    replicates: int


@dataclass(frozen=True)
class RichnessEstimate:
    """Observed and estimated species richness, with coverage."""

    s_obs: int
    f1: int
    f2: int
    f0_hat: float
    s_hat: float
    coverage: float
    estimator_name: str
    ci: ConfidenceInterval | None = None

    @property
    def used_fallback(self) -> bool:
        return self.estimator_name.endswith("-bc")

    def with_ci(self, ci: ConfidenceInterval) -> "RichnessEstimate":
        return replace(self, ci=ci)


@dataclass(frozen=True)
class DiversityProxies:
    """Type-token ratio (abundance) or sample-type ratio (incidence)."""

    types: int
    tokens_or_samples: int
    ttr: float | None = None
    str_: float | None = None

    @property
    def value(self) -> float:
        v = self.ttr if self.ttr is not None else self.str_
        assert v is not None
        return v


def coverage_of(s_obs: float, s_hat: float) -> float:
    """Observed over estimated richness; an upper bound on true coverage
    because the unseen-species estimate is a lower bound."""
    if s_hat <= 0:
        raise ValueError("s_hat must be positive")
    return s_obs / s_hat


def _unseen(f1: int, f2: int) -> tuple[float, bool]:
    """Estimated unseen species count and whether the f2=0 fallback fired."""
    if f1 == 0:
        return 0.0, False
    if f2 > 0:
        return f1 * f1 / (2.0 * f2), False
    return f1 * (f1 - 1) / 2.0, True


def _estimate(s_obs: int, f1: int, f2: int, base_name: str) -> RichnessEstimate:
    f0_hat, fallback = _unseen(f1, f2)
    name = base_name + "-bc" if fallback else base_name
    s_hat = s_obs + f0_hat
    return RichnessEstimate(
        s_obs=s_obs,
        f1=f1,
        f2=f2,
        f0_hat=f0_hat,
        s_hat=s_hat,
        coverage=coverage_of(s_obs, s_hat),
        estimator_name=name,
    )


def chao1_counts(s_obs: int, f1: int, f2: int) -> RichnessEstimate:
    """Chao1 straight from (S_obs, f1, f2), e.g. published table rows."""
    return _estimate(s_obs, f1, f2, "chao1")


def chao1(spec: FrequencySpectrum) -> RichnessEstimate:
    """Abundance-based Chao estimate from a frequency spectrum."""
    if spec.mode != ABUNDANCE:
        raise ValueError("chao1 expects an abundance spectrum; use chao2")
    return _estimate(spec.s_obs, spec.f1, spec.f2, "chao1")


def chao2(
    spec: FrequencySpectrum, small_sample_correction: bool = False
) -> RichnessEstimate:
    """Incidence-based Chao estimate; same arithmetic applied to the
    incidence spectrum Q_r.

    With `small_sample_correction` the unseen-species estimate is scaled by
    (m-1)/m, the standard small-sample factor. It is off by default so the
    uncorrected arithmetic is reproduced verbatim.
    """
    if spec.mode != INCIDENCE:
        raise ValueError("chao2 expects an incidence spectrum; use chao1")
    est = _estimate(spec.s_obs, spec.f1, spec.f2, "chao2")
    if small_sample_correction:
        m = spec.n_or_m
        if m < 2:
            raise InsufficientSamples(
                f"small-sample correction needs m >= 2, got m={m}"
            )
        f0_hat = est.f0_hat * (m - 1) / m
        s_hat = est.s_obs + f0_hat
        est = replace(
            est,
            f0_hat=f0_hat,
            s_hat=s_hat,
            coverage=coverage_of(est.s_obs, s_hat),
        )
    return est


def diversity_proxies(tally: Tally) -> DiversityProxies:
    """TTR (types/tokens) for abundance data, STR (samples/types) for
    incidence data."""
    if isinstance(tally, AbundanceTally):
        return DiversityProxies(
            types=tally.types,
            tokens_or_samples=tally.n,
            ttr=tally.types / tally.n,
        )
    if isinstance(tally, IncidenceTally):
        return DiversityProxies(
            types=tally.types,
            tokens_or_samples=tally.m,
            str_=tally.m / tally.types,
        )
    raise TypeError(f"unsupported tally type {type(tally).__name__}")
