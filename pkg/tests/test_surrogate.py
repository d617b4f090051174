"""
Tests pour les séries de contrôle (surrogates) et la sélection d'extrêmes.
"""

import numpy as np
import pytest

from volclust.errors import DegenerateInputError, InvalidParameterError
from volclust.returns import ReturnSeries
from volclust.seeding import derive_seed, make_rng
from volclust.stats import acf, rank_correlation
from volclust.surrogate import (
    Extreme,
    as_extreme,
    binarize,
    block_indicator,
    extreme_count,
    gaussian_surrogate,
    random_indicator,
    rank_rearrange,
    select_extremes,
    shuffle,
    swap_extremes,
)


def _rs(values, symbol="X"):
    return ReturnSeries.from_values(values, symbol=symbol)


# =============================================================================
# SEEDING
# =============================================================================

class TestSeeding:
    """Tests pour make_rng et derive_seed."""

    def test_same_seed_same_stream(self):
        """Même graine, mêmes tirages."""
        assert np.array_equal(make_rng(42).random(5), make_rng(42).random(5))

    def test_derive_seed_depends_on_keys(self):
        """Des clés différentes donnent des graines différentes."""
        assert derive_seed(0, "NASDAQ", "acf") != derive_seed(0, "NASDAQ", "swap")
        assert derive_seed(0, "NASDAQ", "acf") == derive_seed(0, "NASDAQ", "acf")

    def test_negative_seed(self):
        """Graine négative refusée."""
        with pytest.raises(InvalidParameterError):
            make_rng(-1)


# =============================================================================
# SURROGATES
# =============================================================================

class TestGaussianSurrogate:
    """Tests pour gaussian_surrogate."""

    def test_moments(self):
        """Moyenne dans mu +- 4 sigma / sqrt(N)."""
        rs = _rs(make_rng(1).standard_t(4, size=10_000) * 0.01 + 0.0005)
        surrogate = gaussian_surrogate(rs, seed=3)
        assert abs(surrogate.mu - rs.mu) < 4 * rs.sigma / np.sqrt(len(rs))
        assert np.array_equal(surrogate.dates, rs.dates)

    def test_deterministic(self):
        """Même graine, même série."""
        rs = _rs(make_rng(2).standard_normal(100))
        assert np.array_equal(gaussian_surrogate(rs, 9).values, gaussian_surrogate(rs, 9).values)

    def test_no_memory(self, regime_returns):
        """|r| du surrogate gaussien dans la bande de bruit (moyenne sur 5 graines)."""
        fractions = [
            acf(np.abs(gaussian_surrogate(regime_returns, seed).values), max_lag=100).inside_band_fraction()
            for seed in range(5)
        ]
        assert np.mean(fractions) >= 0.92

    def test_zero_variance(self):
        """sigma = 0: erreur."""
        with pytest.raises(DegenerateInputError):
            gaussian_surrogate(_rs([0.1, 0.1, 0.1]), seed=0)


class TestRankRearrange:
    """Tests pour rank_rearrange."""

    def test_identity(self):
        """Surrogate = empirique: sortie = empirique."""
        rs = _rs([0.3, -0.1, 0.2, 0.05])
        assert rank_rearrange(rs, rs).values.tolist() == rs.values.tolist()

    def test_rank_map(self):
        """La valeur de rang j va à la position du rang j empirique."""
        out = rank_rearrange(_rs([3.0, -1.0, 2.0]), _rs([10.0, -20.0, 0.5]))
        # |-20| -> position de |3|, |10| -> position de |2|, |0.5| -> position de |-1|
        assert out.values.tolist() == [-20.0, 0.5, 10.0]

    def test_absolute_multiset(self):
        """Multiset des |valeurs| = celui du surrogate."""
        emp = _rs(make_rng(4).standard_normal(300))
        sur = _rs(make_rng(5).standard_normal(300))
        out = rank_rearrange(emp, sur)
        assert np.array_equal(np.sort(np.abs(out.values)), np.sort(np.abs(sur.values)))

    def test_ranks_follow_empirical(self):
        """Le rang de |sortie| suit celui de |empirique| à chaque position."""
        emp = _rs(make_rng(6).standard_normal(300))
        out = rank_rearrange(emp, _rs(make_rng(7).standard_normal(300)))
        assert np.array_equal(np.argsort(np.abs(out.values)), np.argsort(np.abs(emp.values)))

    def test_length_mismatch(self):
        """Longueurs différentes: erreur."""
        with pytest.raises(InvalidParameterError):
            rank_rearrange(_rs([1.0, 2.0]), _rs([1.0]))

    def test_reproduces_slow_decay(self, regime_returns):
        """Le gaussien réarrangé garde la forme de l'ACF de |r| empirique."""
        rearranged = rank_rearrange(regime_returns, gaussian_surrogate(regime_returns, seed=13))
        emp = acf(np.abs(regime_returns.values), max_lag=100)
        rea = acf(np.abs(rearranged.values), max_lag=100)
        assert rank_correlation(emp, rea) >= 0.9
        assert rea.values[100] > rea.noise_band


class TestShuffle:
    """Tests pour shuffle."""

    def test_multiset_preserved(self):
        """Mêmes valeurs, autre ordre."""
        rs = _rs(make_rng(8).standard_normal(1000))
        out = shuffle(rs, seed=1)
        assert np.array_equal(np.sort(out.values), np.sort(rs.values))
        assert not np.array_equal(out.values, rs.values)
        assert np.array_equal(out.dates, rs.dates)

    def test_length_one(self):
        """Série de longueur 1 inchangée."""
        assert shuffle(_rs([0.5]), seed=0).values.tolist() == [0.5]

    def test_deterministic(self):
        """Même graine, même permutation."""
        rs = _rs(np.arange(50.0))
        assert np.array_equal(shuffle(rs, 5).values, shuffle(rs, 5).values)

    def test_input_untouched(self):
        """La série d'origine n'est pas modifiée."""
        rs = _rs(np.arange(10.0))
        shuffle(rs, 2)
        assert rs.values.tolist() == list(np.arange(10.0))

    def test_destroys_memory(self, regime_returns):
        """ACF de |r| mélangé: au moins 95% des décalages dans la bande (graine fixe)."""
        curve = acf(np.abs(shuffle(regime_returns, seed=0).values), max_lag=100)
        assert curve.inside_band_fraction() >= 0.95


class TestSwapExtremes:
    """Tests pour swap_extremes."""

    def test_hand_example(self):
        """k = 1: les positions de 5 et 0.5 s'échangent."""
        out = swap_extremes(_rs([5.0, 1.0, -3.0, 0.5, 2.0]), 20)
        assert out.values.tolist() == [0.5, 1.0, -3.0, 5.0, 2.0]

    def test_zero_pct_identity(self):
        """p = 0: sortie = entrée."""
        rs = _rs([5.0, 1.0, -3.0])
        assert swap_extremes(rs, 0).values.tolist() == rs.values.tolist()

    def test_involution(self):
        """Appliquer deux fois redonne la série."""
        rs = _rs(make_rng(9).standard_normal(1001))
        for p in (5, 20, 50):
            assert np.array_equal(swap_extremes(swap_extremes(rs, p), p).values, rs.values)

    def test_involution_with_ties(self):
        """Involution aussi avec des |r| égaux."""
        rs = _rs([1.0, -1.0, 2.0, -2.0, 0.5, 0.5, 1.0, -2.0])
        assert swap_extremes(swap_extremes(rs, 25), 25).values.tolist() == rs.values.tolist()

    def test_pct_above_fifty(self):
        """p > 50: erreur."""
        with pytest.raises(InvalidParameterError):
            swap_extremes(_rs([1.0, 2.0]), 60)


class TestSelectExtremes:
    """Tests pour select_extremes, binarize et extreme_count."""

    def test_count(self):
        """N = 10, p = 20: k = 2."""
        assert extreme_count(10, 20) == 2
        assert select_extremes(_rs(np.arange(1.0, 11.0)), 20).k == 2

    def test_round_half_up(self):
        """k = floor(P N + 1/2)."""
        assert extreme_count(10, 25) == 3
        assert extreme_count(4, 12.5) == 1
        assert extreme_count(4, 37.5) == 2

    def test_ties_resolved_by_date(self):
        """[1,1,1,2], p = 25: le plus grand est l'indice du 2."""
        sel = select_extremes(_rs([1.0, 1.0, 1.0, 2.0]), 25)
        assert sel.indices_large.tolist() == [3]
        assert sel.indices_small.tolist() == [0]

    def test_irrelevant_tie(self):
        """[2,2,3], p = 33.3: le plus grand est l'indice du 3."""
        assert select_extremes(_rs([2.0, 2.0, 3.0]), 33.3).indices_large.tolist() == [2]

    def test_tied_cutoffs_disjoint(self):
        """[1,2,-2,3], p = 50: le 2 à égalité ne tombe que dans un ensemble."""
        sel = select_extremes(_rs([1.0, 2.0, -2.0, 3.0]), 50)
        assert sel.indices_large.tolist() == [1, 3]
        assert sel.indices_small.tolist() == [0, 2]

    def test_tied_plateau_disjoint(self):
        """Plateau de |r| égaux: les plus petits sont pris parmi les jours restants."""
        sel = select_extremes(_rs([0.5] + [1.0] * 8 + [2.0]), 30)
        assert sel.indices_large.tolist() == [1, 2, 9]
        assert sel.indices_small.tolist() == [0, 3, 4]

    def test_binarize_never_overlaps(self):
        """Valeurs très répétées: indicateurs disjoints, k uns chacun, ordre des |r| respecté."""
        rs = _rs(make_rng(11).integers(-3, 4, size=500).astype(float))
        for p in (5, 20, 33, 50):
            large = binarize(rs, p, Extreme.LARGEST)
            small = binarize(rs, p, Extreme.SMALLEST)
            assert not np.any(large.bits & small.bits)
            assert large.k == small.k == min(extreme_count(500, p), 250)
            magnitudes = np.abs(rs.values)
            assert magnitudes[small.bits == 1].max() <= magnitudes[large.bits == 1].min()

    def test_sets_disjoint_at_fifty(self):
        """p = 50 sur N impair: ensembles disjoints."""
        sel = select_extremes(_rs(np.arange(1.0, 8.0)), 50)
        assert not set(sel.indices_large) & set(sel.indices_small)

    def test_zero_k(self):
        """k = 0 après arrondi: erreur."""
        with pytest.raises(DegenerateInputError):
            select_extremes(_rs([1.0, 2.0, 3.0]), 5)

    @pytest.mark.parametrize("p", [0, -5, 50.5])
    def test_invalid_pct(self, p):
        """p hors de (0, 50]."""
        with pytest.raises(InvalidParameterError):
            select_extremes(_rs([1.0, 2.0, 3.0]), p)

    def test_binarize_hand_example(self):
        """[5,1,-3,0.5,2], p = 20: [1,0,0,0,0]."""
        ind = binarize(_rs([5.0, 1.0, -3.0, 0.5, 2.0]), 20, Extreme.LARGEST)
        assert ind.bits.tolist() == [1, 0, 0, 0, 0]

    def test_binarize_smallest(self):
        """Le plus petit |r| est marqué."""
        ind = binarize(_rs([5.0, 1.0, -3.0, 0.5, 2.0]), 20, "smallest")
        assert ind.bits.tolist() == [0, 0, 0, 1, 0]

    def test_binarize_half(self):
        """p = 50 sur N pair: N/2 uns."""
        ind = binarize(_rs(make_rng(10).standard_normal(100)), 50)
        assert ind.k == 50
        assert ind.P == 0.5

    def test_invalid_which(self):
        """Choix inconnu refusé."""
        with pytest.raises(InvalidParameterError):
            as_extreme("middle")


class TestReferenceIndicators:
    """Tests pour block_indicator et random_indicator."""

    def test_block(self):
        """k uns consécutifs en tête."""
        ind = block_indicator(10, 0.3)
        assert ind.bits.tolist() == [1, 1, 1, 0, 0, 0, 0, 0, 0, 0]

    def test_block_ones_last(self):
        """Variante avec les uns en fin."""
        assert block_indicator(5, 0.4, ones_first=False).bits.tolist() == [0, 0, 0, 1, 1]

    def test_random_exact_fraction(self):
        """Fraction réalisée exacte."""
        ind = random_indicator(1000, 0.2, seed=4)
        assert ind.k == 200

    def test_invalid_fraction(self):
        """P hors de [0, 1]."""
        with pytest.raises(InvalidParameterError):
            block_indicator(10, 1.5)
