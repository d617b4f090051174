"""
Control series for volatility-clustering experiments.

- gaussian_surrogate: iid draws with the empirical mean and std
- rank_rearrange: surrogate values placed at the positions of equally ranked
  empirical values (rank by |value|)
- shuffle: uniform random permutation
- swap_extremes: j-th largest |r| exchanged with j-th smallest |r|
- select_extremes / binarize: largest/smallest p% by |r| as index sets or 0/1
- block_indicator / random_indicator: maximal-clustering and iid references

Rank ties are broken by the earlier date. The number of extremes is
k = floor(P*N + 1/2) with P = p/100.
"""

import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Union

import numpy as np

from .errors import DegenerateInputError, InvalidParameterError
from .logging_config import get_logger
from .returns import ReturnSeries
from .seeding import make_rng

logger = get_logger(__name__)


class Extreme(str, Enum):
    LARGEST = "largest"
    SMALLEST = "smallest"


ExtremeLike = Union[Extreme, str]


def as_extreme(which: ExtremeLike) -> Extreme:
    try:
        return Extreme(which)
    except ValueError:
        raise InvalidParameterError(f"which must be 'largest' or 'smallest', got {which!r}") from None


@dataclass(frozen=True, eq=False)
class IndicatorSequence:
    """0/1 marking of an extreme-fluctuation subset."""

    bits: np.ndarray  # uint8

    def __post_init__(self):
        bits = np.asarray(self.bits)
        if bits.ndim != 1 or not np.all((bits == 0) | (bits == 1)):
            raise InvalidParameterError("indicator bits must be a 1-D sequence of 0/1")
        object.__setattr__(self, "bits", bits.astype(np.uint8))

    def __len__(self) -> int:
        return len(self.bits)

    @cached_property
    def k(self) -> int:
        return int(self.bits.sum(dtype=np.int64))

    @property
    def P(self) -> float:
        return self.k / len(self.bits) if len(self.bits) else 0.0


@dataclass(frozen=True, eq=False)
class ExtremeSelection:
    indices_large: np.ndarray  # sorted ascending
    indices_small: np.ndarray  # sorted ascending
    p_pct: float

    @property
    def k(self) -> int:
        return len(self.indices_large)


# =============================================================================
# RANKING
# =============================================================================

def fraction_count(n_obs: int, P: float) -> int:
    """round-half-up(P * N)."""
    return int(math.floor(P * n_obs + 0.5))


def extreme_count(n_obs: int, p_pct: float) -> int:
    """k for a percentage p, i.e. fraction_count with P = p/100."""
    return fraction_count(n_obs, p_pct / 100.0)


def descending_order(values: np.ndarray) -> np.ndarray:
    """Indices by |value| descending, earlier index first on ties."""
    return np.argsort(-np.abs(values), kind="stable")


def ascending_order(values: np.ndarray) -> np.ndarray:
    """Indices by |value| ascending, earlier index first on ties."""
    return np.argsort(np.abs(values), kind="stable")


def _check_pct(p_pct: float, allow_zero: bool) -> float:
    p = float(p_pct)
    low_ok = p >= 0 if allow_zero else p > 0
    if not (low_ok and p <= 50):
        bound = "[0, 50]" if allow_zero else "(0, 50]"
        raise InvalidParameterError(f"p must lie in {bound}, got {p_pct!r}")
    return p


def _two_sided_count(n_obs: int, p_pct: float) -> int:
    return min(extreme_count(n_obs, p_pct), n_obs // 2)


def _extreme_positions(values: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Top-k and bottom-k positions by |value|, each in rank order. The bottom
    set is drawn from the positions left after the top set, so a tie across
    the two cut-offs never puts one day in both.
    """
    large = descending_order(values)[:k]
    taken = np.zeros(len(values), dtype=bool)
    taken[large] = True
    ascending = ascending_order(values)
    small = ascending[~taken[ascending]][:k]
    return large, small


# =============================================================================
# SURROGATES
# =============================================================================

def gaussian_surrogate(rs: ReturnSeries, seed: int) -> ReturnSeries:
    """N iid Normal(mu_R, sigma_R) draws on the same dates."""
    if rs.is_constant or rs.sigma == 0.0:
        raise DegenerateInputError(f"cannot draw a Gaussian surrogate for {rs.symbol}: zero variance")
    rng = make_rng(seed)
    return rs.with_values(rng.normal(rs.mu, rs.sigma, size=len(rs)))


def rank_rearrange(empirical: ReturnSeries, surrogate: ReturnSeries) -> ReturnSeries:
    """
    Place the surrogate value of |rank| j at the position of the empirical
    value of |rank| j. Surrogate signs are kept; dates are the empirical ones.
    """
    if len(empirical) != len(surrogate):
        raise InvalidParameterError(
            f"length mismatch: empirical {len(empirical)} vs surrogate {len(surrogate)}"
        )
    out = np.empty(len(empirical), dtype=np.float64)
    out[descending_order(empirical.values)] = surrogate.values[descending_order(surrogate.values)]
    return empirical.with_values(out)


def shuffle(rs: ReturnSeries, seed: int) -> ReturnSeries:
    """Uniform random permutation of the values; dates stay in place."""
    rng = make_rng(seed)
    values = rs.values.copy()
    rng.shuffle(values)
    return rs.with_values(values)


def swap_extremes(rs: ReturnSeries, p_pct: float) -> ReturnSeries:
    """
    Exchange the j-th largest and j-th smallest |r| for j = 1..k.

    Applying it twice restores the series, except when tied |r| of opposite
    signs sit on a cut-off: the second pass may then pick another member of
    the tie.
    """
    _check_pct(p_pct, allow_zero=True)
    k = _two_sided_count(len(rs), p_pct)
    values = rs.values.copy()
    if k == 0:
        return rs.with_values(values)

    large, small = _extreme_positions(rs.values, k)
    values[large], values[small] = rs.values[small], rs.values[large]
    logger.debug("Swapped %d extreme pairs in %s", k, rs.symbol)
    return rs.with_values(values)


def select_extremes(rs: ReturnSeries, p_pct: float) -> ExtremeSelection:
    """Top-k and bottom-k positions by |r|."""
    p = _check_pct(p_pct, allow_zero=False)
    k = _two_sided_count(len(rs), p)
    if k == 0:
        raise DegenerateInputError(f"p={p_pct} selects no observation out of {len(rs)}")

    large, small = _extreme_positions(rs.values, k)
    return ExtremeSelection(
        indices_large=np.sort(large),
        indices_small=np.sort(small),
        p_pct=p,
    )


def indicator_from_indices(n_obs: int, indices: np.ndarray) -> IndicatorSequence:
    bits = np.zeros(n_obs, dtype=np.uint8)
    bits[indices] = 1
    return IndicatorSequence(bits)


def binarize(rs: ReturnSeries, p_pct: float, which: ExtremeLike = Extreme.LARGEST) -> IndicatorSequence:
    """1 on the chosen extreme set, 0 elsewhere."""
    which = as_extreme(which)
    selection = select_extremes(rs, p_pct)
    indices = selection.indices_large if which is Extreme.LARGEST else selection.indices_small
    return indicator_from_indices(len(rs), indices)


# =============================================================================
# REFERENCE INDICATORS
# =============================================================================

def _check_fraction(n_obs: int, P: float) -> int:
    if n_obs < 1:
        raise InvalidParameterError(f"N must be positive, got {n_obs}")
    if not 0.0 <= P <= 1.0:
        raise InvalidParameterError(f"P must lie in [0, 1], got {P}")
    return fraction_count(n_obs, P)


def block_indicator(n_obs: int, P: float, ones_first: bool = True) -> IndicatorSequence:
    """Extreme block sequence: all k = round(P*N) ones consecutive."""
    k = _check_fraction(n_obs, P)
    bits = np.zeros(n_obs, dtype=np.uint8)
    if ones_first:
        bits[:k] = 1
    elif k:
        bits[-k:] = 1
    return IndicatorSequence(bits)


def random_indicator(n_obs: int, P: float, seed: int) -> IndicatorSequence:
    """k = round(P*N) ones at uniformly random positions."""
    k = _check_fraction(n_obs, P)
    rng = make_rng(seed)
    bits = np.zeros(n_obs, dtype=np.uint8)
    bits[rng.choice(n_obs, size=k, replace=False)] = 1
    return IndicatorSequence(bits)
