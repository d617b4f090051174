"""
Moving-window clustering statistics.

A window of n trading days slides over an indicator sequence one day at a
time; m is the number of marked days inside the window. The clustering index

    R_n = sigma_e / sigma_G

compares the spread of m around its mean P*n with the binomial spread
sqrt(n P (1 - P)) of an iid sequence. R_n is 1 for an iid sequence and
tends to sqrt(n) for the extreme block sequence (all marked days
consecutive) when P*N and (1 - P)*N are much larger than n.
"""

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional

import numpy as np
from scipy import stats as sps

from .errors import DegenerateInputError, InvalidParameterError
from .logging_config import get_logger
from .returns import ReturnSeries
from .seeding import make_rng
from .surrogate import Extreme, ExtremeLike, IndicatorSequence, as_extreme, binarize, fraction_count

logger = get_logger(__name__)

DEFAULT_N_MAX = 240


@dataclass(frozen=True, eq=False)
class WindowCountDistribution:
    """Per-window counts m for window size n (N - n + 1 windows)."""

    n: int
    counts: np.ndarray

    @property
    def n_windows(self) -> int:
        return len(self.counts)

    @cached_property
    def frequency_array(self) -> np.ndarray:
        """Occurrences of m = 0..n."""
        return np.bincount(self.counts, minlength=self.n + 1)

    @property
    def frequency(self) -> dict[int, int]:
        return {m: int(c) for m, c in enumerate(self.frequency_array)}


@dataclass(frozen=True)
class ClusteringRow:
    n: int
    sigma_e: float
    sigma_g: float
    r_n: float
    r_lim: float


@dataclass
class ClusteringProfile:
    p_pct: float
    which: str
    rows: list[ClusteringRow] = field(default_factory=list)

    def row(self, n: int) -> ClusteringRow:
        for row in self.rows:
            if row.n == n:
                return row
        raise KeyError(n)


def _check_window(n: int, n_obs: int) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or not 1 <= n <= n_obs:
        raise InvalidParameterError(f"window size must satisfy 1 <= n <= N={n_obs}, got {n!r}")
    return int(n)


def _check_probability(P: float) -> float:
    P = float(P)
    if not 0.0 <= P <= 1.0:
        raise InvalidParameterError(f"P must lie in [0, 1], got {P}")
    return P


# =============================================================================
# WINDOW COUNTS
# =============================================================================

def window_counts(ind: IndicatorSequence, n: int) -> WindowCountDistribution:
    """counts[t] = sum(bits[t:t+n]) for t = 0..N-n, by a running sum."""
    n = _check_window(n, len(ind))
    running = np.concatenate(([0], np.cumsum(ind.bits, dtype=np.int64)))
    return WindowCountDistribution(n=n, counts=running[n:] - running[:-n])


def binomial_reference(n: int, P: float, n_windows: int) -> np.ndarray:
    """Expected window-count frequencies of an iid sequence, m = 0..n."""
    P = _check_probability(P)
    return n_windows * sps.binom.pmf(np.arange(n + 1), n, P)


# =============================================================================
# SPREADS
# =============================================================================

def sigma_gaussian(n: int, P: float) -> float:
    """Binomial standard deviation sqrt(n P (1 - P))."""
    P = _check_probability(P)
    return math.sqrt(n * P * (1.0 - P))


def sigma_gaussian_binomial_sum(n: int, P: float) -> float:
    """
    [sum_m (m - P n)^2 C(n, m) P^m (1 - P)^(n - m)]^(1/2), accumulated from
    log-space probabilities so large n does not overflow.
    """
    P = _check_probability(P)
    m = np.arange(n + 1)
    weights = np.exp(sps.binom.logpmf(m, n, P))
    return math.sqrt(float(np.sum((m - P * n) ** 2 * weights)))


def sigma_gaussian_monte_carlo(n: int, P: float, n_obs: int, seed: int) -> float:
    """
    sigma_e of the largest-P fraction of one simulated standard-normal
    series of length n_obs. Validation only; the index uses sigma_gaussian.
    """
    P = _check_probability(P)
    rng = make_rng(seed)
    draws = ReturnSeries.from_values(rng.standard_normal(n_obs), symbol="gaussian")
    return sigma_empirical(binarize(draws, 100.0 * P, Extreme.LARGEST), n)


def sigma_from_counts(dist: WindowCountDistribution, P: float) -> float:
    """Root-mean-square deviation of the counts from P*n."""
    m = np.arange(dist.n + 1)
    deviations = (m - P * dist.n) ** 2
    return math.sqrt(float(np.dot(dist.frequency_array, deviations)) / dist.n_windows)


def sigma_empirical(ind: IndicatorSequence, n: int) -> float:
    """
    sqrt(mean_t (counts[t] - P n)^2) with P = k/N. Deviations are taken from
    P*n, not from the sample mean of the counts.
    """
    return sigma_from_counts(window_counts(ind, n), ind.P)


def _block_size(n_obs: int, n: int, P: float) -> tuple[int, float]:
    P = _check_probability(P)
    if n_obs < 1 or n < 1:
        raise InvalidParameterError(f"N and n must be positive, got N={n_obs}, n={n}")
    k = fraction_count(n_obs, P)
    if k < n or n_obs - k < n:
        raise InvalidParameterError(
            f"window n={n} larger than a block (ones={k}, zeros={n_obs - k})"
        )
    return k, k / n_obs


def sigma_extreme(n_obs: int, n: int, P: float) -> float:
    """
    sigma_e of the extreme block sequence, closed form:

        [n^2 (N - n - 1) P (1 - P) + n (n + 1)(2n + 1) / 6
         - n^3 (P^2 + (1 - P)^2)] / (N - n + 1)

    P*N is rounded half up to an integer count and P recomputed from it.
    """
    _, P = _block_size(n_obs, n, P)
    variance = (
        n * n * (n_obs - n - 1) * P * (1.0 - P)
        + n * (n + 1) * (2 * n + 1) / 6.0
        - n ** 3 * (P * P + (1.0 - P) ** 2)
    ) / (n_obs - n + 1)
    return math.sqrt(variance)


def sigma_extreme_explicit(n_obs: int, n: int, P: float) -> float:
    """Unsimplified form: full-ones windows, full-zeros windows, one ramp."""
    k, P = _block_size(n_obs, n, P)
    mean = P * n
    ramp = float(np.sum((np.arange(n + 1) - mean) ** 2))
    variance = ((k - n) * (n - mean) ** 2 + (n_obs - k - n) * mean ** 2 + ramp) / (n_obs - n + 1)
    return math.sqrt(variance)


def sigma_limit(n: int, P: float) -> float:
    """N -> infinity limit of sigma_extreme: sqrt(n^2 P (1 - P))."""
    P = _check_probability(P)
    return math.sqrt(n * n * P * (1.0 - P))


# =============================================================================
# INDEX
# =============================================================================

def clustering_index_of(ind: IndicatorSequence, n: int) -> float:
    """R_n of an indicator sequence, using its realized fraction P = k/N."""
    if ind.k == 0 or ind.k == len(ind):
        raise DegenerateInputError(f"clustering index undefined for P={ind.P} (no variation)")
    return sigma_empirical(ind, n) / sigma_gaussian(n, ind.P)


def clustering_index(rs: ReturnSeries, p_pct: float, n: int, which: ExtremeLike = Extreme.LARGEST) -> float:
    """R_n of the largest (or smallest) p% of |returns|."""
    _check_window(n, len(rs))
    return clustering_index_of(binarize(rs, p_pct, which), n)


def profile_of(ind: IndicatorSequence, n_range: Iterable[int], p_pct: float, which: str) -> ClusteringProfile:
    """One ClusteringRow per window size, from a fixed indicator."""
    if ind.k == 0 or ind.k == len(ind):
        raise DegenerateInputError(f"clustering index undefined for P={ind.P} (no variation)")
    profile = ClusteringProfile(p_pct=float(p_pct), which=str(which))
    for n in n_range:
        sigma_e = sigma_empirical(ind, n)
        sigma_g = sigma_gaussian(n, ind.P)
        profile.rows.append(ClusteringRow(
            n=int(n),
            sigma_e=sigma_e,
            sigma_g=sigma_g,
            r_n=sigma_e / sigma_g,
            r_lim=math.sqrt(n),
        ))
    return profile


def clustering_profile(
    rs: ReturnSeries,
    p_pct: float,
    n_max: int = DEFAULT_N_MAX,
    which: ExtremeLike = Extreme.LARGEST,
    n_range: Optional[Iterable[int]] = None,
) -> ClusteringProfile:
    """R_n for n = 1..n_max (or an explicit n_range)."""
    if n_range is None:
        _check_window(n_max, len(rs))
        n_range = range(1, int(n_max) + 1)
    else:
        n_range = [_check_window(n, len(rs)) for n in n_range]

    which = as_extreme(which)
    ind = binarize(rs, p_pct, which)
    logger.debug(
        "Clustering profile %s p=%s %s: k=%d of N=%d",
        rs.symbol, p_pct, which.value, ind.k, len(ind),
    )
    return profile_of(ind, n_range, p_pct, which.value)
