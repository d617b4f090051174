"""
Autocorrelation functions and empirical densities.

``acf`` is the overlap-local estimator: for every lag the pairs
(x_t, x_{t+lag}) are correlated with each side centered and scaled by its own
mean and standard deviation over the overlap.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import stats as sps

from .errors import DegenerateInputError, InvalidParameterError
from .logging_config import get_logger
from .returns import ReturnSeries

logger = get_logger(__name__)

DEFAULT_MAX_LAG = 100
DEFAULT_BINS = 50
NOISE_Z = 1.96


@dataclass(frozen=True, eq=False)
class AcfSeries:
    lags: np.ndarray
    values: np.ndarray
    n_obs: int
    noise_band: float

    def inside_band_fraction(self, first_lag: int = 1) -> float:
        """Fraction of lags >= first_lag whose |value| is below the noise band."""
        tail = np.abs(self.values[first_lag:])
        if tail.size == 0:
            return float("nan")
        return float(np.mean(tail < self.noise_band))


@dataclass(frozen=True, eq=False)
class Histogram:
    bin_edges: np.ndarray
    densities: np.ndarray
    reference: Optional[np.ndarray] = None

    @property
    def bin_centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])

    @property
    def bin_widths(self) -> np.ndarray:
        return np.diff(self.bin_edges)

    @property
    def mass(self) -> float:
        return float(np.sum(self.densities * self.bin_widths))


def noise_band(n_obs: int) -> float:
    """95% white-noise band for sample autocorrelations."""
    return NOISE_Z / np.sqrt(n_obs)


def _lag_correlation(x: np.ndarray, lag: int) -> float:
    a = x[: len(x) - lag]
    b = x[lag:]
    da = a - a.mean()
    db = b - b.mean()
    denom = np.sqrt(np.mean(da * da) * np.mean(db * db))
    if denom == 0.0:
        # Constant overlap on one side: no linear association is measurable.
        return 0.0
    return float(np.clip(np.mean(da * db) / denom, -1.0, 1.0))


def acf(x, max_lag: int = DEFAULT_MAX_LAG) -> AcfSeries:
    """
    Autocorrelation for lags 0..max_lag.

    Raises:
        InvalidParameterError: max_lag < 1 or len(x) <= max_lag + 1
        DegenerateInputError: constant input
    """
    x = np.asarray(x, dtype=np.float64)
    if isinstance(max_lag, bool) or not isinstance(max_lag, (int, np.integer)) or max_lag < 1:
        raise InvalidParameterError(f"max_lag must be a positive integer, got {max_lag!r}")
    if x.ndim != 1 or len(x) <= max_lag + 1:
        raise InvalidParameterError(f"need more than max_lag + 1 = {max_lag + 1} observations, got {len(x)}")
    if float(np.ptp(x)) == 0.0:
        raise DegenerateInputError("autocorrelation of a constant sequence is undefined")

    values = np.empty(max_lag + 1, dtype=np.float64)
    values[0] = 1.0
    for lag in range(1, max_lag + 1):
        values[lag] = _lag_correlation(x, lag)

    return AcfSeries(
        lags=np.arange(max_lag + 1),
        values=values,
        n_obs=len(x),
        noise_band=float(noise_band(len(x))),
    )


def histogram_pdf(rs: ReturnSeries, bins: int = DEFAULT_BINS) -> Histogram:
    """
    Density histogram over [min, max] with equal-width bins, plus the
    standard normal density sampled at the bin centers.
    """
    if isinstance(bins, bool) or not isinstance(bins, (int, np.integer)) or bins < 2:
        raise InvalidParameterError(f"bins must be an integer >= 2, got {bins!r}")
    if len(rs) == 0:
        raise DegenerateInputError("histogram of an empty series")

    if abs(rs.mu) > 1e-6 or abs(rs.sigma - 1.0) > 1e-6:
        logger.debug("Histogram of %s on non-normalized values (mu=%g, sigma=%g)", rs.symbol, rs.mu, rs.sigma)

    densities, edges = np.histogram(rs.values, bins=int(bins), density=True)
    centers = 0.5 * (edges[:-1] + edges[1:])
    return Histogram(bin_edges=edges, densities=densities, reference=sps.norm.pdf(centers))


def rank_correlation(a: AcfSeries, b: AcfSeries, first_lag: int = 1) -> float:
    """Spearman correlation of two ACF curves over lags first_lag..max_lag."""
    if len(a.values) != len(b.values):
        raise InvalidParameterError("ACF curves must cover the same lags")
    rho = sps.spearmanr(a.values[first_lag:], b.values[first_lag:])[0]
    return float(rho)
