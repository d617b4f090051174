"""
volclust - Analyse du regroupement de volatilité des séries financières.

Autocorrélations, séries de contrôle, indice de regroupement par fenêtre
glissante, asymétries et tables de transition.
"""

__version__ = "0.1.0"
__author__ = "volclust Contributors"

from .logging_config import init_logging, get_logger
from .errors import (
    VolClustError,
    IngestError,
    InvalidParameterError,
    DegenerateInputError,
    EmptyCategoryError,
    ConfigError,
    OutputError,
)
from .ingest import PriceSeries, ResultManifest, parse_price_csv, read_price_file, write_outputs
from .returns import ReturnSeries, compute_returns, normalize_returns
from .stats import AcfSeries, Histogram, acf, histogram_pdf, noise_band
from .surrogate import (
    Extreme,
    IndicatorSequence,
    binarize,
    block_indicator,
    gaussian_surrogate,
    random_indicator,
    rank_rearrange,
    select_extremes,
    shuffle,
    swap_extremes,
)
from .cluster import (
    ClusteringProfile,
    clustering_index,
    clustering_profile,
    sigma_empirical,
    sigma_extreme,
    sigma_gaussian,
    window_counts,
)
from .asym import (
    AsymmetryProfile,
    TransitionMatrix,
    asymmetry_ls,
    asymmetry_pm,
    asymmetry_profile,
    transition_matrix,
    transition_matrix_signed,
)
from .config import RunConfig, build_config
from .core import AnalysisRunner, run_analysis

__all__ = [
    "init_logging",
    "get_logger",
    # Errors
    "VolClustError",
    "IngestError",
    "InvalidParameterError",
    "DegenerateInputError",
    "EmptyCategoryError",
    "ConfigError",
    "OutputError",
    # Data
    "PriceSeries",
    "ResultManifest",
    "parse_price_csv",
    "read_price_file",
    "write_outputs",
    "ReturnSeries",
    "compute_returns",
    "normalize_returns",
    # Statistics
    "AcfSeries",
    "Histogram",
    "acf",
    "histogram_pdf",
    "noise_band",
    # Surrogates
    "Extreme",
    "IndicatorSequence",
    "binarize",
    "block_indicator",
    "gaussian_surrogate",
    "random_indicator",
    "rank_rearrange",
    "select_extremes",
    "shuffle",
    "swap_extremes",
    # Clustering
    "ClusteringProfile",
    "clustering_index",
    "clustering_profile",
    "sigma_empirical",
    "sigma_extreme",
    "sigma_gaussian",
    "window_counts",
    "AsymmetryProfile",
    "TransitionMatrix",
    "asymmetry_ls",
    "asymmetry_pm",
    "asymmetry_profile",
    "transition_matrix",
    "transition_matrix_signed",
    # Runs
    "RunConfig",
    "build_config",
    "AnalysisRunner",
    "run_analysis",
]
