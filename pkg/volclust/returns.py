"""
Simple returns over tau trading days and their normalized form.

Standard deviations use the population convention (divide by N) everywhere.
"""

import dataclasses
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import DegenerateInputError, InvalidParameterError
from .ingest import PriceSeries


@dataclass(frozen=True, eq=False)
class ReturnSeries:
    """Returns r(t) dated at the later day t, with cached mean and std."""

    symbol: str
    tau: int
    dates: np.ndarray   # datetime64[D]
    values: np.ndarray  # float64

    def __post_init__(self):
        dates = np.asarray(self.dates, dtype="datetime64[D]")
        values = np.asarray(self.values, dtype=np.float64)
        if dates.shape != values.shape or values.ndim != 1:
            raise InvalidParameterError("dates and values must be 1-D arrays of equal length")
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)

    @cached_property
    def mu(self) -> float:
        if len(self.values) == 0:
            return float("nan")
        return float(np.mean(self.values))

    @cached_property
    def sigma(self) -> float:
        if len(self.values) == 0:
            return float("nan")
        return float(np.std(self.values))

    @property
    def is_constant(self) -> bool:
        return len(self.values) == 0 or float(np.ptp(self.values)) == 0.0

    def with_values(self, values: np.ndarray, symbol: Optional[str] = None) -> "ReturnSeries":
        """Same dates and tau, new values."""
        return dataclasses.replace(self, values=np.asarray(values, dtype=np.float64), symbol=symbol or self.symbol)

    @classmethod
    def from_values(
        cls,
        values,
        symbol: str = "synthetic",
        tau: int = 1,
        start: str = "2000-01-03",
    ) -> "ReturnSeries":
        """Build a series on consecutive business days starting at ``start``."""
        values = np.asarray(values, dtype=np.float64)
        dates = np.busday_offset(np.datetime64(start, "D"), np.arange(len(values)), roll="forward")
        return cls(symbol=symbol, tau=tau, dates=dates, values=values)


def compute_returns(prices: PriceSeries, tau: int = 1) -> ReturnSeries:
    """r(t) = (p(t) - p(t - tau)) / p(t - tau) for every admissible t."""
    if isinstance(tau, bool) or not isinstance(tau, (int, np.integer)) or tau <= 0:
        raise InvalidParameterError(f"tau must be a positive integer, got {tau!r}")
    if tau >= len(prices):
        raise InvalidParameterError(f"tau={tau} must be smaller than the series length {len(prices)}")

    p = prices.closes
    values = (p[tau:] - p[:-tau]) / p[:-tau]
    return ReturnSeries(symbol=prices.symbol, tau=int(tau), dates=prices.dates[tau:], values=values)


def normalize_returns(rs: ReturnSeries) -> ReturnSeries:
    """(r - mu) / sigma; order and dates preserved."""
    if rs.is_constant or rs.sigma == 0.0:
        raise DegenerateInputError(f"cannot normalize {rs.symbol}: zero variance")
    return rs.with_values((rs.values - rs.mu) / rs.sigma)
