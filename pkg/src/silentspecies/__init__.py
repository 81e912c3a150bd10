"""Unseen-species richness and coverage estimation for observational
collections: frequency tallying, Chao1/Chao2 estimators, bootstrap
uncertainty, accumulation curves, grouped analyses, and diversity-proxy
correlation."""

from .analysis import (
    GroupReportRow,
    group_xy,
    merge_tallies,
    per_group_correlation,
    report,
    summarize,
    top_n,
)
from .errors import (
    DegenerateVariance,
    EmptyDataset,
    InsufficientPoints,
    InsufficientSamples,
    InvalidSize,
    InvalidSpec,
    SchemaError,
    SilentSpeciesError,
    SubsampleTooLarge,
)
from .estimators import (
    ConfidenceInterval,
    DiversityProxies,
    RichnessEstimate,
    chao1,
    chao1_counts,
    chao2,
    coverage_of,
    diversity_proxies,
)
from .resampling import (
    AccumulationPoint,
    BootstrapResult,
    accumulate,
    bootstrap_ci,
)
from .stats import RegressionResult, TrendFit, pearson, polyfit
from .synth import (
    PopulationSpec,
    generate,
    sample,
    sample_site_records,
    sample_sites,
)
from .tally import (
    ABUNDANCE,
    INCIDENCE,
    AbundanceTally,
    FrequencySpectrum,
    GroupedDataset,
    IncidenceTally,
    ObservationRecord,
    group_by,
    spectrum,
    tally_abundance,
    tally_incidence,
)
from .version import __version__

__all__ = [
    "__version__",
    "ABUNDANCE",
    "INCIDENCE",
    "AbundanceTally",
    "AccumulationPoint",
    "BootstrapResult",
    "ConfidenceInterval",
    "DegenerateVariance",
    "DiversityProxies",
    "EmptyDataset",
    "FrequencySpectrum",
    "GroupReportRow",
    "GroupedDataset",
    "IncidenceTally",
    "InsufficientPoints",
    "InsufficientSamples",
    "InvalidSize",
    "InvalidSpec",
    "ObservationRecord",
    "PopulationSpec",
    "RegressionResult",
    "RichnessEstimate",
    "SchemaError",
    "SilentSpeciesError",
    "SubsampleTooLarge",
    "TrendFit",
    "accumulate",
    "bootstrap_ci",
    "chao1",
    "chao1_counts",
    "chao2",
    "coverage_of",
    "diversity_proxies",
    "generate",
    "group_by",
    "group_xy",
    "merge_tallies",
    "pearson",
    "per_group_correlation",
    "polyfit",
    "report",
    "sample",
    "sample_site_records",
    "sample_sites",
    "spectrum",
    "summarize",
    "tally_abundance",
    "tally_incidence",
    "top_n",
]
