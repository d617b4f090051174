"""
Fixtures partagées pour les tests volclust.
"""

import tempfile
from pathlib import Path

import numpy as np
import pytest

from volclust.returns import ReturnSeries
from volclust.seeding import make_rng


def regime_values(
    n_obs: int,
    seed: int,
    stay_low: float = 0.99,
    stay_high: float = 0.99,
    vol_high: float = 4.0,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Rendements gaussiens à volatilité commutante (deux régimes markoviens).

    Returns:
        Tuple (rendements en unités de 1%, indicateur du régime haut)
    """
    rng = make_rng(seed)
    u = rng.random(n_obs)
    high = np.zeros(n_obs, dtype=bool)
    state = False
    for t in range(n_obs):
        stay = stay_high if state else stay_low
        if u[t] > stay:
            state = not state
        high[t] = state
    vol = np.where(high, vol_high, 1.0)
    return rng.standard_normal(n_obs) * vol, high


def prices_from_returns(values: np.ndarray, start: float = 100.0) -> np.ndarray:
    """p(0) = start, p(t) = p(t-1) * (1 + r(t))."""
    return start * np.concatenate(([1.0], np.cumprod(1.0 + values)))


def price_csv_text(values: np.ndarray, start_date: str = "2000-01-03") -> str:
    """CSV date,close sur jours ouvrés consécutifs."""
    closes = prices_from_returns(values)
    dates = np.busday_offset(np.datetime64(start_date, "D"), np.arange(len(closes)), roll="forward")
    lines = ["date,close"]
    lines += [f"{d},{c!r}" for d, c in zip(np.datetime_as_string(dates, unit="D"), closes.tolist())]
    return "\n".join(lines) + "\n"


@pytest.fixture
def temp_dir():
    """Crée un répertoire temporaire pour les tests."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield tmpdir


@pytest.fixture
def sample_csv_text():
    """Petit fichier de cours valide (5 jours)."""
    return (
        "date,close\n"
        "2009-06-24,1829.54\n"
        "2009-06-25,1862.37\n"
        "2009-06-26,1838.22\n"
        "2009-06-29,1844.06\n"
        "2009-06-30,1835.04\n"
    )


@pytest.fixture
def sample_csv_file(temp_dir, sample_csv_text):
    """Écrit le petit fichier de cours sur disque."""
    path = Path(temp_dir) / "sample.csv"
    path.write_text(sample_csv_text, encoding="utf-8")
    return str(path)


@pytest.fixture(scope="session")
def regime_returns():
    """20 000 rendements à volatilité regroupée, symétriques en signe."""
    values, _ = regime_values(20_000, seed=7)
    return ReturnSeries.from_values(0.01 * values, symbol="REGIME")


@pytest.fixture(scope="session")
def crash_returns():
    """
    Série asymétrique: le régime agité ne produit que des baisses
    (-|3z|), les hausses extrêmes sont des sauts iid de +6.
    """
    values, high = regime_values(20_000, seed=11, stay_low=0.997, stay_high=0.993, vol_high=3.0)
    values = np.where(high, -np.abs(values), values)
    jumps = make_rng(12).random(len(values)) < 0.02
    values[jumps] = 6.0
    return ReturnSeries.from_values(0.01 * values, symbol="CRASH")


@pytest.fixture
def mirrored_returns():
    """Paires (v, -v) entrelacées: symétrie parfaite des signes."""
    v = np.abs(make_rng(3).standard_normal(1000)) + 0.01
    values = np.empty(2000)
    values[0::2] = v
    values[1::2] = -v
    return ReturnSeries.from_values(values, symbol="MIRROR")


@pytest.fixture
def iid_returns():
    """100 000 rendements gaussiens iid."""
    return ReturnSeries.from_values(make_rng(5).standard_normal(100_000), symbol="IID")


@pytest.fixture
def regime_csv_file(temp_dir):
    """Fichier de cours de 10 000 rendements à volatilité regroupée."""
    values, _ = regime_values(10_000, seed=21)
    path = Path(temp_dir) / "regime.csv"
    path.write_text(price_csv_text(0.01 * values), encoding="utf-8")
    return str(path)


@pytest.fixture
def write_prices(temp_dir):
    """Fabrique: écrit un CSV de cours à partir de rendements, retourne le chemin."""
    def _write(name: str, values: np.ndarray) -> str:
        path = Path(temp_dir) / f"{name}.csv"
        path.write_text(price_csv_text(np.asarray(values, dtype=float)), encoding="utf-8")
        return str(path)
    return _write
