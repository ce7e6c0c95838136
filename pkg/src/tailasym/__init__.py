"""Directional extreme-tail association between two real-valued series.

Estimate how strongly the largest values of one series pair with the largest
values of another, separately in each direction, and test whether the two
directions differ -- all from ranks, with multiplier-bootstrap inference and
exactly solvable copula models to validate against.
"""

__version__ = "0.1.0"

from ._kernels import HAVE_COMPILED, backend_name
from .bootstrap import (
    MultiplierScheme,
    SweepVerdict,
    TestResult,
    bootstrap_delta,
    bootstrap_eta,
    draw_multipliers,
    normal_quantile,
    summarize_rejection,
    test_delta_zero,
    test_eta_zero,
    unit_exponential_scheme,
    weighted_reverse_rank,
)
from .copulas import (
    KhoudrajiGumbelCopula,
    MaxFactorCopula,
    NelsenCopula,
    PopulationValues,
    copula_cdf,
    khoudraji_gumbel_delta_closed_form,
    parse_model_spec,
    population_values,
    sample,
    stable_tail_dependence,
    survival_copula,
    tail_copula,
    tail_dependence_chi,
)
from .errors import (
    DomainError,
    EmptyIntersection,
    InvalidB,
    InvalidModelSpec,
    InvalidN,
    IoError,
    KOutOfRange,
    LengthMismatch,
    MissingColumn,
    NonFinite,
    NonPositivePrice,
    QuadratureFailure,
    SeriesTooShort,
    TailAsymError,
    TiesPresent,
    UnparsableValue,
)
from .estimators import (
    DeltaEstimate,
    Direction,
    EtaEstimate,
    TailCopulaGrid,
    delta_kn,
    delta_sweep,
    empirical_tail_copula_slice,
    eta_from_tail_copula,
    eta_kn,
    eta_sweep,
    eta_upper_bound,
)
from .pipeline import (
    AcfSummary,
    AnalysisConfig,
    Report,
    SeriesTable,
    acf,
    default_kgrid,
    emit_report,
    load_csv,
    log_returns,
    render_report,
    run_pair_analysis,
    tail_view,
)
from .ranks import (
    ConcomitantRanks,
    PairedSample,
    concomitant_ranks,
    make_sample,
    reverse_ranks,
)

__all__ = [
    "__version__",
    "HAVE_COMPILED",
    "backend_name",
    # ranks
    "PairedSample",
    "ConcomitantRanks",
    "make_sample",
    "reverse_ranks",
    "concomitant_ranks",
    # estimators
    "Direction",
    "EtaEstimate",
    "DeltaEstimate",
    "TailCopulaGrid",
    "eta_kn",
    "eta_sweep",
    "delta_kn",
    "delta_sweep",
    "empirical_tail_copula_slice",
    "eta_from_tail_copula",
    "eta_upper_bound",
    # copulas
    "NelsenCopula",
    "KhoudrajiGumbelCopula",
    "MaxFactorCopula",
    "PopulationValues",
    "copula_cdf",
    "survival_copula",
    "tail_copula",
    "stable_tail_dependence",
    "tail_dependence_chi",
    "population_values",
    "khoudraji_gumbel_delta_closed_form",
    "sample",
    "parse_model_spec",
    # bootstrap
    "MultiplierScheme",
    "unit_exponential_scheme",
    "draw_multipliers",
    "weighted_reverse_rank",
    "bootstrap_eta",
    "bootstrap_delta",
    "TestResult",
    "SweepVerdict",
    "test_eta_zero",
    "test_delta_zero",
    "summarize_rejection",
    "normal_quantile",
    # pipeline
    "SeriesTable",
    "AcfSummary",
    "AnalysisConfig",
    "Report",
    "load_csv",
    "log_returns",
    "tail_view",
    "acf",
    "default_kgrid",
    "run_pair_analysis",
    "render_report",
    "emit_report",
    # errors
    "TailAsymError",
    "LengthMismatch",
    "NonFinite",
    "TiesPresent",
    "KOutOfRange",
    "DomainError",
    "InvalidN",
    "InvalidB",
    "SeriesTooShort",
    "IoError",
    "MissingColumn",
    "UnparsableValue",
    "EmptyIntersection",
    "NonPositivePrice",
    "InvalidModelSpec",
    "QuadratureFailure",
]
