"""Grouped estimation tables: one richness estimate per group plus a pooled
total, top-N group selection, and per-group diversity/coverage correlation.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

from .errors import EmptyDataset
from .estimators import RichnessEstimate, chao1, chao2, diversity_proxies
from .stats import RegressionResult, pearson
from .tally import (
    ABUNDANCE,
    AbundanceTally,
    GroupedDataset,
    IncidenceTally,
    Tally,
    spectrum,
)

TOTAL_KEY = "Total"


@dataclass(frozen=True)
class GroupReportRow:
    """One table row: a group's diversity proxies and richness estimate."""

    group_key: str
    types: int
    tokens_or_samples: int
    ttr_or_str: float
    f1: int
    f2: int
    coverage: float
    s_hat: float
    estimator_name: str

    @property
    def used_fallback(self) -> bool:
        return self.estimator_name.endswith("-bc")


def merge_tallies(tallies: Sequence[Tally]) -> Tally:
    """Pool tallies of one kind. Abundance counts are summed per species;
    incidence counts and sample totals are summed (sampling sites are
    disjoint across groups)."""
    if not tallies:
        raise EmptyDataset("nothing to merge")
    if isinstance(tallies[0], AbundanceTally):
        counts: dict[str, int] = {}
        for t in tallies:
            assert isinstance(t, AbundanceTally)
            for species, c in t.counts.items():
                counts[species] = counts.get(species, 0) + c
        return AbundanceTally(counts, sum(counts.values()))
    incidences: dict[str, int] = {}
    m = 0
    for t in tallies:
        assert isinstance(t, IncidenceTally)
        for species, c in t.incidences.items():
            incidences[species] = incidences.get(species, 0) + c
        m += t.m
    return IncidenceTally(incidences, m)


def estimate_tally(
    tally: Tally, small_sample_correction: bool = False
) -> RichnessEstimate:
    spec = spectrum(tally)
    if spec.mode == ABUNDANCE:
        return chao1(spec)
    return chao2(spec, small_sample_correction)


def summarize(
    key: str, tally: Tally, small_sample_correction: bool = False
) -> GroupReportRow:
    """Single report row for one tally."""
    est = estimate_tally(tally, small_sample_correction)
    proxies = diversity_proxies(tally)
    return GroupReportRow(
        group_key=key,
        types=proxies.types,
        tokens_or_samples=proxies.tokens_or_samples,
        ttr_or_str=proxies.value,
        f1=est.f1,
        f2=est.f2,
        coverage=est.coverage,
        s_hat=est.s_hat,
        estimator_name=est.estimator_name,
    )


def report(
    dataset: GroupedDataset,
    sort_by: str = "coverage",
    ascending: bool = False,
    small_sample_correction: bool = False,
) -> list[GroupReportRow]:
    """One row per group plus a pooled Total row (estimated on the merged
    tally, not by summing per-group estimates). The Total row is always
    last; group rows are sorted by `sort_by` with group-key tiebreak."""
    if not dataset.groups:
        raise EmptyDataset("grouped dataset has no groups")
    rows = [
        summarize(key, tally, small_sample_correction)
        for key, tally in sorted(dataset.groups.items())
    ]
    rows.sort(key=lambda row: (getattr(row, sort_by), row.group_key),
              reverse=not ascending)
    pooled = merge_tallies([dataset.groups[k] for k in sorted(dataset.groups)])
    rows.append(summarize(TOTAL_KEY, pooled, small_sample_correction))
    return rows


def _group_size(tally: Tally, size_by: str) -> int:
    if size_by == "types":
        return tally.types
    if isinstance(tally, AbundanceTally):
        return tally.n
    return sum(tally.incidences.values())


def top_n(
    dataset: GroupedDataset, n: int, size_by: str = "tokens"
) -> GroupedDataset:
    """Keep the n largest groups by total observations (or by type count
    with size_by="types"); ties broken by group key."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > len(dataset.groups):
        warnings.warn(
            f"top_n: requested {n} groups but only {len(dataset.groups)} "
            "exist; returning all",
            stacklevel=2,
        )
        n = len(dataset.groups)
    ranked = sorted(
        dataset.groups.items(),
        key=lambda item: (-_group_size(item[1], size_by), item[0]),
    )
    return GroupedDataset(dict(ranked[:n]), dataset.group_field, dataset.mode)


def group_xy(
    dataset: GroupedDataset,
    x: str = "ttr",
    y: str = "coverage",
    small_sample_correction: bool = False,
) -> tuple[list[float], list[float]]:
    """Per-group (x, y) value pairs in group-key order. x is "ttr", "str",
    or "one-minus-ttr"; y is "coverage" or "s_hat"."""
    xs: list[float] = []
    ys: list[float] = []
    for key in sorted(dataset.groups):
        tally = dataset.groups[key]
        proxies = diversity_proxies(tally)
        est = estimate_tally(tally, small_sample_correction)
        if x in ("ttr", "str"):
            xs.append(proxies.value)
        elif x == "one-minus-ttr":
            xs.append(1.0 - proxies.value)
        else:
            raise ValueError(f"unknown x column {x!r}")
        if y == "coverage":
            ys.append(est.coverage)
        elif y == "s_hat":
            ys.append(est.s_hat)
        else:
            raise ValueError(f"unknown y column {y!r}")
    return xs, ys


def per_group_correlation(
    dataset: GroupedDataset,
    x: str = "ttr",
    y: str = "coverage",
    small_sample_correction: bool = False,
) -> RegressionResult:
    """Pearson correlation of a per-group diversity proxy against per-group
    coverage (or richness)."""
    xs, ys = group_xy(dataset, x, y, small_sample_correction)
    return pearson(xs, ys)
