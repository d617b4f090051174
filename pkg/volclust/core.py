"""
Core de volclust - Orchestration des analyses (séries x expériences).
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np
import pandas as pd

from .asym import asymmetry_profile, transition_matrix, transition_matrix_signed
from .cluster import (
    ClusteringProfile,
    binomial_reference,
    clustering_profile,
    sigma_from_counts,
    sigma_gaussian,
    sigma_gaussian_monte_carlo,
    window_counts,
)
from .config import RunConfig, compute_run_id, format_pct
from .errors import ConfigError, VolClustError
from .ingest import (
    Artifact,
    CellFailure,
    InputDigest,
    ResultManifest,
    ResultSet,
    parse_price_csv,
    write_outputs,
)
from .logging_config import get_logger
from .published import PUBLISHED_P_PCT, compare_with_published, lookup
from .returns import ReturnSeries, compute_returns, normalize_returns
from .seeding import derive_seed
from .stats import AcfSeries, acf, histogram_pdf, rank_correlation
from .surrogate import Extreme, binarize, gaussian_surrogate, rank_rearrange, shuffle, swap_extremes
from .utils import bytes_digest, slugify

logger = get_logger(__name__)

# Lags whose |r| autocorrelation is copied into the summary.
SUMMARY_LAGS = (1, 10, 100)


@dataclass
class SeriesInput:
    """Une série chargée: symbole, empreinte et rendements (None si échec)."""
    symbol: str
    path: str
    sha256: str
    returns: Optional[ReturnSeries] = None

    @property
    def slug(self) -> str:
        return slugify(self.symbol)


@dataclass
class CellResult:
    """Résultat d'une cellule (série x expérience)."""
    symbol: str
    experiment: str
    artifacts: list[Artifact] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    failure: Optional[CellFailure] = None


# =============================================================================
# CSV LAYOUTS
# =============================================================================

def acf_frame(curve: AcfSeries) -> pd.DataFrame:
    return pd.DataFrame({"lag": curve.lags, "acf": curve.values})


def series_frame(rs: ReturnSeries) -> pd.DataFrame:
    return pd.DataFrame({"date": rs.dates.astype(str), "value": rs.values})


def profile_frame(profile: ClusteringProfile) -> pd.DataFrame:
    return pd.DataFrame(
        [(r.n, r.sigma_e, r.sigma_g, r.r_n, r.r_lim) for r in profile.rows],
        columns=["n", "sigma_e", "sigma_g", "r_n", "r_lim"],
    )


def _acf_at(curve: AcfSeries) -> dict:
    return {str(lag): float(curve.values[lag]) for lag in SUMMARY_LAGS if lag < len(curve.values)}


# =============================================================================
# RUNNER
# =============================================================================

class AnalysisRunner:
    def __init__(self, config: RunConfig):
        """
        Prépare une exécution.

        Args:
            config: Configuration validée (entrées, paramètres, expériences)
        """
        self.config = config
        self._experiments: dict[str, Callable[[SeriesInput, str], CellResult]] = {
            "pdf": self._run_pdf,
            "acf": self._run_acf,
            "rearranged": self._run_rearranged,
            "binarized": self._run_binarized,
            "swap": self._run_swap,
            "windowdist": self._run_windowdist,
            "index": self._run_index,
            "smallest_index": self._run_smallest_index,
            "asymmetry": self._run_asymmetry,
            "transitions": self._run_transitions,
            "signed_transitions": self._run_signed_transitions,
        }

    # -------------------------------------------------------------------------
    # Chargement
    # -------------------------------------------------------------------------

    def load_inputs(self) -> tuple[list[SeriesInput], list[CellFailure]]:
        """
        Lit et convertit chaque fichier d'entrée en rendements.

        Un fichier absent ou illisible est une erreur de configuration;
        un contenu invalide n'invalide que les cellules de cette série.

        Returns:
            Tuple (séries, échecs d'ingestion)
        """
        if not self.config.inputs:
            raise ConfigError("no input series (use --input SYMBOL=path)")

        series, failures = [], []
        for symbol, path in self.config.inputs:
            try:
                data = Path(path).read_bytes()
            except FileNotFoundError:
                raise ConfigError(f"input file not found: {path}") from None
            except OSError as e:
                raise ConfigError(f"cannot read input file {path}: {e}") from e

            item = SeriesInput(symbol=symbol, path=path, sha256=bytes_digest(data))
            stage = "ingest"
            try:
                prices = parse_price_csv(data, symbol=symbol)
                stage = "returns"
                item.returns = compute_returns(prices, self.config.tau)
            except VolClustError as e:
                logger.warning(
                    "Series %s rejected at %s: %s", symbol, stage, e,
                    extra={"symbol": symbol, "experiment": stage},
                )
                failures.append(CellFailure(symbol, stage, type(e).__name__, str(e)))
            series.append(item)
        return series, failures

    # -------------------------------------------------------------------------
    # Exécution
    # -------------------------------------------------------------------------

    def run(self) -> ResultSet:
        """Exécute toutes les cellules et assemble le résultat (ordre déterministe)."""
        series, failures = self.load_inputs()
        run_id = compute_run_id(self.config, [s.sha256 for s in series])

        cells = [
            (item, experiment)
            for item in series if item.returns is not None
            for experiment in self.config.experiments
        ]
        logger.info(
            "Running %d cell(s) on %d worker(s)", len(cells), self.config.workers,
            extra={"run_id": run_id},
        )

        with ThreadPoolExecutor(max_workers=self.config.workers) as pool:
            outcomes = list(pool.map(lambda cell: self._run_cell(*cell), cells))

        results = ResultSet(
            run_id=run_id,
            inputs=[InputDigest(s.symbol, s.path, s.sha256) for s in series],
            failures=failures,
            config=self.config.canonical_dict(),
        )
        summary: dict = {"run_id": run_id, "seed": self.config.seed, "series": {}}
        for item in series:
            if item.returns is not None:
                summary["series"][item.symbol] = {
                    "n_obs": len(item.returns),
                    "tau": item.returns.tau,
                    "mu": item.returns.mu,
                    "sigma": item.returns.sigma,
                    "experiments": {},
                }

        for outcome in outcomes:
            if outcome.failure is not None:
                results.failures.append(outcome.failure)
                continue
            results.artifacts.extend(outcome.artifacts)
            summary["series"][outcome.symbol]["experiments"][outcome.experiment] = outcome.summary

        results.summary = summary
        return results

    def _run_cell(self, item: SeriesInput, experiment: str) -> CellResult:
        seed = derive_seed(self.config.seed, item.symbol, experiment)
        try:
            result = self._experiments[experiment](item, seed)
        except VolClustError as e:
            logger.warning(
                "Cell %s/%s failed: %s", item.symbol, experiment, e,
                extra={"symbol": item.symbol, "experiment": experiment},
            )
            return CellResult(
                item.symbol, experiment,
                failure=CellFailure(item.symbol, experiment, type(e).__name__, str(e)),
            )
        logger.debug(
            "Cell %s/%s: %d artifact(s)", item.symbol, experiment, len(result.artifacts),
            extra={"symbol": item.symbol, "experiment": experiment},
        )
        return result

    def _name(self, item: SeriesInput, experiment: str, *details: str) -> str:
        return "_".join((item.slug, experiment) + details)

    def _p_key(self, p: float) -> str:
        return f"p{format_pct(p)}"

    def _index_sizes(self, n_obs: int) -> list[int]:
        return [n for n in self.config.index_at if n <= min(self.config.n_max, n_obs)]

    # -------------------------------------------------------------------------
    # Expériences
    # -------------------------------------------------------------------------

    def _run_pdf(self, item: SeriesInput, seed: int) -> CellResult:
        normalized = normalize_returns(item.returns)
        hist = histogram_pdf(normalized, self.config.bins)
        frame = pd.DataFrame({
            "bin_center": hist.bin_centers,
            "density": hist.densities,
            "reference": hist.reference,
        })
        return CellResult(
            item.symbol, "pdf",
            artifacts=[Artifact(self._name(item, "pdf"), "plotdata", frame)],
            summary={
                "mass": hist.mass,
                "min": float(normalized.values.min()),
                "max": float(normalized.values.max()),
                "beyond_5_sigma": int(np.sum(np.abs(normalized.values) > 5.0)),
            },
        )

    def _run_acf(self, item: SeriesInput, seed: int) -> CellResult:
        raw = acf(item.returns.values, self.config.max_lag)
        absolute = acf(np.abs(item.returns.values), self.config.max_lag)
        return CellResult(
            item.symbol, "acf",
            artifacts=[
                Artifact(self._name(item, "acf", "returns"), "plotdata", acf_frame(raw)),
                Artifact(self._name(item, "acf", "abs"), "plotdata", acf_frame(absolute)),
            ],
            summary={
                "noise_band": raw.noise_band,
                "returns_inside_band": raw.inside_band_fraction(),
                "abs_inside_band": absolute.inside_band_fraction(),
                "abs_acf": _acf_at(absolute),
            },
        )

    def _run_rearranged(self, item: SeriesInput, seed: int) -> CellResult:
        rs = item.returns
        gaussian = gaussian_surrogate(rs, derive_seed(seed, "gaussian"))
        curves = {
            "empirical": rs,
            "gaussian": rank_rearrange(rs, gaussian),
            "pure_gaussian": gaussian,
            "shuffled": shuffle(rs, derive_seed(seed, "shuffle")),
        }
        acfs = {key: acf(np.abs(s.values), self.config.max_lag) for key, s in curves.items()}
        return CellResult(
            item.symbol, "rearranged",
            artifacts=[
                Artifact(self._name(item, "rearranged", key), "plotdata", acf_frame(curve))
                for key, curve in acfs.items()
            ],
            summary={
                "rank_correlation": rank_correlation(acfs["empirical"], acfs["gaussian"]),
                "inside_band": {key: curve.inside_band_fraction() for key, curve in acfs.items()},
            },
        )

    def _run_binarized(self, item: SeriesInput, seed: int) -> CellResult:
        artifacts, summary = [], {}
        for p in self.config.p_list:
            ind = binarize(item.returns, p, Extreme.LARGEST)
            curve = acf(ind.bits.astype(np.float64), self.config.max_lag)
            artifacts.append(Artifact(self._name(item, "binarized", self._p_key(p)), "plotdata", acf_frame(curve)))
            summary[self._p_key(p)] = {"k": ind.k, "inside_band": curve.inside_band_fraction(), "acf": _acf_at(curve)}
        return CellResult(item.symbol, "binarized", artifacts, summary)

    def _run_swap(self, item: SeriesInput, seed: int) -> CellResult:
        artifacts, summary = [], {}
        for p in self.config.p_list:
            swapped = swap_extremes(item.returns, p)
            curve = acf(np.abs(swapped.values), self.config.max_lag)
            key = self._p_key(p)
            artifacts.append(Artifact(self._name(item, "swap", key, "series"), "table", series_frame(swapped)))
            artifacts.append(Artifact(self._name(item, "swap", key, "acf"), "plotdata", acf_frame(curve)))
            summary[key] = {"inside_band": curve.inside_band_fraction(), "abs_acf": _acf_at(curve)}
        return CellResult(item.symbol, "swap", artifacts, summary)

    def _run_windowdist(self, item: SeriesInput, seed: int) -> CellResult:
        n = self.config.window
        artifacts, summary = [], {}
        for p in self.config.p_list:
            ind = binarize(item.returns, p, Extreme.LARGEST)
            dist = window_counts(ind, n)
            frame = pd.DataFrame({
                "m": np.arange(n + 1),
                "count": dist.frequency_array,
                "binomial_reference": binomial_reference(n, ind.P, dist.n_windows),
            })
            key = self._p_key(p)
            artifacts.append(Artifact(self._name(item, "windowdist", key), "table", frame))
            summary[key] = {
                "window": n,
                "sigma_e": sigma_from_counts(dist, ind.P),
                "sigma_g": sigma_gaussian(n, ind.P),
                "sigma_g_monte_carlo": sigma_gaussian_monte_carlo(
                    n, ind.P, len(ind), derive_seed(seed, key)
                ),
            }
        return CellResult(item.symbol, "windowdist", artifacts, summary)

    def _profiles(self, item: SeriesInput, experiment: str, which: Extreme) -> CellResult:
        artifacts, summary = [], {}
        sizes = self._index_sizes(len(item.returns))
        for p in self.config.p_list:
            profile = clustering_profile(item.returns, p, self.config.n_max, which)
            key = self._p_key(p)
            artifacts.append(Artifact(self._name(item, experiment, key), "table", profile_frame(profile)))
            summary[key] = {"r_n": {str(n): profile.row(n).r_n for n in sizes}}
        return CellResult(item.symbol, experiment, artifacts, summary)

    def _run_index(self, item: SeriesInput, seed: int) -> CellResult:
        return self._profiles(item, "index", Extreme.LARGEST)

    def _run_smallest_index(self, item: SeriesInput, seed: int) -> CellResult:
        return self._profiles(item, "smallest_index", Extreme.SMALLEST)

    def _run_asymmetry(self, item: SeriesInput, seed: int) -> CellResult:
        artifacts, summary = [], {}
        sizes = self._index_sizes(len(item.returns))
        for p in self.config.p_list:
            profile = asymmetry_profile(item.returns, p, self.config.n_max)
            frame = pd.DataFrame(
                [(r.n, r.a_ls, r.a_pm, r.r_l, r.r_s, r.r_plus, r.r_minus) for r in profile.rows],
                columns=["n", "a_ls", "a_pm", "r_l", "r_s", "r_plus", "r_minus"],
            )
            key = self._p_key(p)
            artifacts.append(Artifact(self._name(item, "asymmetry", key), "table", frame))
            summary[key] = {
                "a_ls": {str(n): profile.row(n).a_ls for n in sizes},
                "a_pm": {str(n): profile.row(n).a_pm for n in sizes},
                "a_pm_negative_from_2": bool(all(r.a_pm < 0 for r in profile.rows if r.n >= 2)),
            }
        return CellResult(item.symbol, "asymmetry", artifacts, summary)

    def _transitions(self, item: SeriesInput, experiment: str, signed: bool) -> CellResult:
        build = transition_matrix_signed if signed else transition_matrix
        artifacts, summary = [], {}
        tables = lookup(item.symbol)
        for p in self.config.p_list:
            matrix = build(item.returns, p)
            key = self._p_key(p)
            artifacts.append(Artifact(self._name(item, experiment, key), "table", matrix.to_frame()))
            if signed:
                artifacts.append(Artifact(
                    self._name(item, experiment, key, "paired"), "table", matrix.to_paired_frame()
                ))
            summary[key] = {"probs": matrix.probs, "support": matrix.support, "labels": list(matrix.labels)}
            if tables is not None and p == PUBLISHED_P_PCT:
                summary[key]["published"] = compare_with_published(item.symbol, matrix).to_dict()
        return CellResult(item.symbol, experiment, artifacts, summary)

    def _run_transitions(self, item: SeriesInput, seed: int) -> CellResult:
        return self._transitions(item, "transitions", signed=False)

    def _run_signed_transitions(self, item: SeriesInput, seed: int) -> CellResult:
        return self._transitions(item, "signed_transitions", signed=True)


def run_analysis(cfg: RunConfig) -> ResultManifest:
    """
    Exécute une analyse complète et écrit les artefacts.

    Returns:
        Le manifeste écrit dans <outdir>/<run_id>/manifest.json

    Raises:
        ConfigError: entrée absente ou illisible, aucune entrée
        OutputError: dossier de sortie inaccessible ou déjà existant
    """
    results = AnalysisRunner(cfg).run()
    manifest = write_outputs(results, cfg.outdir, overwrite=cfg.overwrite)
    if manifest.failures:
        logger.warning(
            "%d cell(s) failed", len(manifest.failures), extra={"run_id": manifest.run_id},
        )
    return manifest
