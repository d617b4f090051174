"""
Asymmetry indices and next-day transition tables.

Categories by |r|: Largest (top p%), Smallest (bottom p%), Rest. Signed
variants split each category into rise (r > 0) and fall (r <= 0); zero
returns count as falls so the six-way partition is exhaustive.
"""

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np
import pandas as pd

from .cluster import DEFAULT_N_MAX, _check_window, clustering_index_of
from .errors import DegenerateInputError, EmptyCategoryError, InvalidParameterError
from .logging_config import get_logger
from .returns import ReturnSeries
from .surrogate import IndicatorSequence, indicator_from_indices, select_extremes

logger = get_logger(__name__)

CATEGORY_LABELS = ("Largest", "Smallest", "Rest")
SIGNED_LABELS = tuple(f"{c} ({s})" for c in CATEGORY_LABELS for s in ("rise", "fall"))

LARGEST, SMALLEST, REST = 0, 1, 2


@dataclass(frozen=True)
class AsymmetryRow:
    n: int
    a_ls: float
    a_pm: float
    r_l: float
    r_s: float
    r_plus: float
    r_minus: float


@dataclass
class AsymmetryProfile:
    p_pct: float
    rows: list[AsymmetryRow] = field(default_factory=list)

    def row(self, n: int) -> AsymmetryRow:
        for row in self.rows:
            if row.n == n:
                return row
        raise KeyError(n)


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    """Row = category on day t, column = category on day t + 1."""

    labels: tuple[str, ...]
    probs: np.ndarray
    support: np.ndarray

    def entry(self, given: str, then: str) -> float:
        return float(self.probs[self.labels.index(given), self.labels.index(then)])

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.probs, columns=list(self.labels))
        frame.insert(0, "condition", list(self.labels))
        return frame

    def to_paired_frame(self) -> pd.DataFrame:
        """Signed table with one 'rise/fall' column per category."""
        if self.labels != SIGNED_LABELS:
            raise InvalidParameterError("paired layout only applies to the signed table")
        frame = pd.DataFrame({"condition": list(self.labels)})
        for j, category in enumerate(CATEGORY_LABELS):
            rise, fall = self.probs[:, 2 * j], self.probs[:, 2 * j + 1]
            frame[f"{category} (rise/fall)"] = [f"{a:.4f}/{b:.4f}" for a, b in zip(rise, fall)]
        return frame


def normalized_difference(a: float, b: float) -> float:
    """(a - b) / (a + b) for nonnegative indices."""
    total = a + b
    if total <= 0:
        raise DegenerateInputError(f"asymmetry undefined for indices {a} and {b}")
    return (a - b) / total


# =============================================================================
# CATEGORIES
# =============================================================================

def categorize(rs: ReturnSeries, p_pct: float) -> np.ndarray:
    """0 = Largest, 1 = Smallest, 2 = Rest for every day."""
    selection = select_extremes(rs, p_pct)
    categories = np.full(len(rs), REST, dtype=np.int64)
    categories[selection.indices_large] = LARGEST
    categories[selection.indices_small] = SMALLEST
    return categories


def categorize_signed(rs: ReturnSeries, p_pct: float) -> np.ndarray:
    """2 * category + (0 for rise, 1 for fall)."""
    return 2 * categorize(rs, p_pct) + (rs.values <= 0).astype(np.int64)


def _transition(categories: np.ndarray, labels: tuple[str, ...]) -> TransitionMatrix:
    size = len(labels)
    counts = np.zeros((size, size), dtype=np.int64)
    np.add.at(counts, (categories[:-1], categories[1:]), 1)
    support = counts.sum(axis=1)

    empty = [labels[i] for i in np.flatnonzero(support == 0)]
    if empty:
        raise EmptyCategoryError(f"no day with a successor falls in {', '.join(empty)}")

    return TransitionMatrix(labels=labels, probs=counts / support[:, None], support=support)


def transition_matrix(rs: ReturnSeries, p_pct: float) -> TransitionMatrix:
    """P(category on t+1 | category on t) over Largest/Smallest/Rest."""
    if len(rs) < 2:
        raise InvalidParameterError("transition table needs at least 2 returns")
    return _transition(categorize(rs, p_pct), CATEGORY_LABELS)


def transition_matrix_signed(rs: ReturnSeries, p_pct: float) -> TransitionMatrix:
    """Same with rise/fall split, 6 x 6."""
    if len(rs) < 2:
        raise InvalidParameterError("transition table needs at least 2 returns")
    return _transition(categorize_signed(rs, p_pct), SIGNED_LABELS)


# =============================================================================
# ASYMMETRY
# =============================================================================

@dataclass(frozen=True, eq=False)
class _Indicators:
    large: IndicatorSequence
    small: IndicatorSequence
    plus: Optional[IndicatorSequence]
    minus: Optional[IndicatorSequence]


def _indicators(rs: ReturnSeries, p_pct: float, signed: bool) -> _Indicators:
    selection = select_extremes(rs, p_pct)
    large = indicator_from_indices(len(rs), selection.indices_large)
    small = indicator_from_indices(len(rs), selection.indices_small)
    if not signed:
        return _Indicators(large, small, None, None)

    top = selection.indices_large
    rising = rs.values[top] > 0
    if rising.all() or not rising.any():
        side = "positive" if rising.all() else "negative"
        raise DegenerateInputError(
            f"top {p_pct}% of {rs.symbol} is one-sided (only {side} returns)"
        )
    return _Indicators(
        large,
        small,
        indicator_from_indices(len(rs), top[rising]),
        indicator_from_indices(len(rs), top[~rising]),
    )


def asymmetry_ls(rs: ReturnSeries, p_pct: float, n: int) -> float:
    """(R_l - R_s) / (R_l + R_s)."""
    _check_window(n, len(rs))
    ind = _indicators(rs, p_pct, signed=False)
    return normalized_difference(clustering_index_of(ind.large, n), clustering_index_of(ind.small, n))


def asymmetry_pm(rs: ReturnSeries, p_pct: float, n: int) -> float:
    """
    (R_+ - R_-) / (R_+ + R_-) where the top p% by |r| is split by sign and
    each part is indexed with its own realized fraction.
    """
    _check_window(n, len(rs))
    ind = _indicators(rs, p_pct, signed=True)
    return normalized_difference(clustering_index_of(ind.plus, n), clustering_index_of(ind.minus, n))


def asymmetry_profile(
    rs: ReturnSeries,
    p_pct: float,
    n_max: int = DEFAULT_N_MAX,
    n_range: Optional[Iterable[int]] = None,
) -> AsymmetryProfile:
    """Both asymmetries and their four component indices for every n."""
    if n_range is None:
        _check_window(n_max, len(rs))
        n_range = range(1, int(n_max) + 1)
    else:
        n_range = [_check_window(n, len(rs)) for n in n_range]

    ind = _indicators(rs, p_pct, signed=True)
    profile = AsymmetryProfile(p_pct=float(p_pct))
    for n in n_range:
        r_l, r_s = clustering_index_of(ind.large, n), clustering_index_of(ind.small, n)
        r_plus, r_minus = clustering_index_of(ind.plus, n), clustering_index_of(ind.minus, n)
        profile.rows.append(AsymmetryRow(
            n=int(n),
            a_ls=normalized_difference(r_l, r_s),
            a_pm=normalized_difference(r_plus, r_minus),
            r_l=r_l,
            r_s=r_s,
            r_plus=r_plus,
            r_minus=r_minus,
        ))
    logger.debug("Asymmetry profile %s p=%s: %d rows", rs.symbol, p_pct, len(profile.rows))
    return profile
