"""
Published next-day conditional-probability tables (p = 20%) for seven
series, and a helper that compares a computed table against them.

Row/column order follows ``asym.CATEGORY_LABELS`` and ``asym.SIGNED_LABELS``.
"""

import re
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .asym import CATEGORY_LABELS, SIGNED_LABELS, TransitionMatrix
from .errors import InvalidParameterError

PUBLISHED_P_PCT = 20.0
TOLERANCE = 0.015


@dataclass(frozen=True)
class PublishedTables:
    symbol: str
    period: Optional[tuple[str, str]]
    three_way: tuple[tuple[float, ...], ...]
    six_way: tuple[tuple[float, ...], ...]


@dataclass(frozen=True)
class Comparison:
    symbol: str
    signed: bool
    max_abs_diff: float
    worst_entry: tuple[str, str]
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_abs_diff <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "symbol": self.symbol,
            "signed": self.signed,
            "max_abs_diff": self.max_abs_diff,
            "worst_entry": list(self.worst_entry),
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


# Six-way rows: Largest(rise), Largest(fall), Smallest(rise), Smallest(fall),
# Rest(rise), Rest(fall); columns in the same order.
PUBLISHED = {
    "NASDAQ": PublishedTables(
        symbol="NASDAQ",
        period=("1971-02-08", "2009-06-30"),
        three_way=(
            (0.3947, 0.1156, 0.4897),
            (0.1265, 0.2401, 0.6334),
            (0.1597, 0.2148, 0.6255),
        ),
        six_way=(
            (0.2054, 0.1514, 0.0551, 0.0724, 0.3319, 0.1838),
            (0.1856, 0.2438, 0.0365, 0.0681, 0.2122, 0.2538),
            (0.0451, 0.0573, 0.1437, 0.1023, 0.3624, 0.2892),
            (0.0790, 0.0767, 0.1226, 0.1100, 0.3471, 0.2646),
            (0.0742, 0.0582, 0.1269, 0.0934, 0.4475, 0.1998),
            (0.0737, 0.1255, 0.1183, 0.0888, 0.2888, 0.3049),
        ),
    ),
    "SP500": PublishedTables(
        symbol="SP500",
        period=None,
        three_way=(
            (0.2999, 0.1556, 0.5445),
            (0.1440, 0.2305, 0.6255),
            (0.1853, 0.2046, 0.6101),
        ),
        six_way=(
            (0.1634, 0.0954, 0.0922, 0.0797, 0.3150, 0.2543),
            (0.1598, 0.1831, 0.0697, 0.0690, 0.2602, 0.2582),
            (0.0678, 0.0622, 0.1307, 0.1195, 0.3497, 0.2701),
            (0.0808, 0.0794, 0.1053, 0.1025, 0.3210, 0.3110),
            (0.0963, 0.0764, 0.1224, 0.0979, 0.3590, 0.2480),
            (0.0864, 0.1139, 0.1003, 0.0857, 0.3047, 0.3090),
        ),
    ),
    "HSI": PublishedTables(
        symbol="HSI",
        period=None,
        three_way=(
            (0.3226, 0.1568, 0.5206),
            (0.1587, 0.2126, 0.6287),
            (0.1730, 0.2101, 0.6169),
        ),
        six_way=(
            (0.1684, 0.1088, 0.1003, 0.0884, 0.2908, 0.2433),
            (0.1799, 0.1932, 0.0625, 0.0587, 0.2973, 0.2084),
            (0.0904, 0.0638, 0.1099, 0.0993, 0.3351, 0.3015),
            (0.0888, 0.0743, 0.1087, 0.1069, 0.3243, 0.2970),
            (0.0912, 0.0642, 0.0996, 0.1210, 0.3388, 0.2852),
            (0.0842, 0.1091, 0.1103, 0.0886, 0.3055, 0.3023),
        ),
    ),
    "MSFT": PublishedTables(
        symbol="MSFT",
        period=None,
        three_way=(
            (0.3087, 0.1327, 0.5586),
            (0.1354, 0.2419, 0.6227),
            (0.1852, 0.2085, 0.6063),
        ),
        six_way=(
            (0.1726, 0.1217, 0.0786, 0.0586, 0.2865, 0.2820),
            (0.1879, 0.1385, 0.0835, 0.0436, 0.2960, 0.2505),
            (0.0767, 0.0737, 0.1293, 0.0917, 0.3038, 0.3248),
            (0.0629, 0.0530, 0.1257, 0.1434, 0.2888, 0.3262),
            (0.1045, 0.0858, 0.1148, 0.0886, 0.2983, 0.3080),
            (0.0963, 0.0839, 0.1235, 0.0901, 0.3082, 0.2980),
        ),
    ),
    "USDNTD": PublishedTables(
        symbol="USDNTD",
        period=("2001-07-02", "2009-06-30"),
        three_way=(
            (0.3985, 0.0777, 0.5238),
            (0.0501, 0.4010, 0.5489),
            (0.1840, 0.1724, 0.6436),
        ),
        six_way=(
            (0.2183, 0.1371, 0.0863, 0.0051, 0.2741, 0.2791),
            (0.1584, 0.2822, 0.0594, 0.0050, 0.2525, 0.2425),
            (0.0268, 0.0368, 0.2542, 0.1171, 0.2843, 0.2808),
            (0.0112, 0.1899, 0.0894, 0.1117, 0.1676, 0.4302),
            (0.0711, 0.1438, 0.0321, 0.4264, 0.2640, 0.0626),
            (0.0651, 0.1127, 0.1320, 0.0511, 0.2975, 0.3416),
        ),
    ),
    "AUDNTD": PublishedTables(
        symbol="AUDNTD",
        period=None,
        three_way=(
            (0.2700, 0.1600, 0.5700),
            (0.1825, 0.2200, 0.5975),
            (0.1827, 0.2068, 0.6105),
        ),
        six_way=(
            (0.0780, 0.1220, 0.1024, 0.0976, 0.2585, 0.3415),
            (0.2359, 0.1077, 0.0667, 0.0513, 0.3231, 0.2153),
            (0.0679, 0.1176, 0.1222, 0.0950, 0.3620, 0.2353),
            (0.1056, 0.0722, 0.1500, 0.0778, 0.3500, 0.2444),
            (0.0783, 0.0934, 0.1130, 0.0994, 0.3178, 0.2981),
            (0.1067, 0.0899, 0.1086, 0.0918, 0.3633, 0.2397),
        ),
    ),
    "WTI": PublishedTables(
        symbol="WTI",
        period=None,
        three_way=(
            (0.3120, 0.1762, 0.5118),
            (0.1603, 0.2025, 0.6372),
            (0.1761, 0.2071, 0.6168),
        ),
        six_way=(
            (0.1331, 0.1514, 0.0998, 0.0815, 0.2396, 0.2946),
            (0.1573, 0.1829, 0.0940, 0.0769, 0.2615, 0.2274),
            (0.0801, 0.0740, 0.1193, 0.0952, 0.3127, 0.3187),
            (0.0860, 0.0822, 0.0994, 0.0880, 0.3614, 0.2830),
            (0.0897, 0.0756, 0.1178, 0.1032, 0.3252, 0.2885),
            (0.0969, 0.0910, 0.1163, 0.0757, 0.3259, 0.2942),
        ),
    ),
}

_ALIASES = {
    "IXIC": "NASDAQ",
    "COMP": "NASDAQ",
    "NASDAQCOMPOSITE": "NASDAQ",
    "SPX": "SP500",
    "GSPC": "SP500",
    "SNP500": "SP500",
    "HANGSENG": "HSI",
    "MICROSOFT": "MSFT",
    "USDTWD": "USDNTD",
    "AUDTWD": "AUDNTD",
    "CRUDE": "WTI",
    "CL": "WTI",
}


def _canonical(symbol: str) -> str:
    key = re.sub(r"[^A-Z0-9]", "", symbol.upper().replace("&", ""))
    return _ALIASES.get(key, key)


def lookup(symbol: str) -> Optional[PublishedTables]:
    """Tables for ``symbol`` ('S&P500', 'sp500', 'USD/NTD', '^IXIC'...), or None."""
    return PUBLISHED.get(_canonical(symbol))


def compare_with_published(
    symbol: str,
    matrix: TransitionMatrix,
    tolerance: float = TOLERANCE,
) -> Comparison:
    """Largest entry-wise deviation of ``matrix`` from the published table."""
    tables = lookup(symbol)
    if tables is None:
        raise InvalidParameterError(f"no published table for {symbol!r}")

    if matrix.labels == CATEGORY_LABELS:
        signed, expected = False, np.array(tables.three_way)
    elif matrix.labels == SIGNED_LABELS:
        signed, expected = True, np.array(tables.six_way)
    else:
        raise InvalidParameterError(f"unexpected table labels {matrix.labels}")

    diff = np.abs(np.asarray(matrix.probs) - expected)
    i, j = np.unravel_index(int(np.argmax(diff)), diff.shape)
    return Comparison(
        symbol=tables.symbol,
        signed=signed,
        max_abs_diff=float(diff[i, j]),
        worst_entry=(matrix.labels[i], matrix.labels[j]),
        tolerance=float(tolerance),
    )
