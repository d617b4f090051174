"""
Run configuration: defaults, flat JSON config files and CLI overrides.

Precedence is defaults < config file < command-line flags. The only
environment variable read is VOLCLUST_OUTDIR (default output directory).
"""

import hashlib
import json
import os
import re
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional, Union

from .errors import ConfigError
from .logging_config import get_logger
from .utils import slugify

logger = get_logger(__name__)

OUTDIR_ENV = "VOLCLUST_OUTDIR"
DEFAULT_OUTDIR = "results"

EXPERIMENTS = (
    "pdf",
    "acf",
    "rearranged",
    "binarized",
    "swap",
    "windowdist",
    "index",
    "smallest_index",
    "asymmetry",
    "transitions",
    "signed_transitions",
)
ALL_EXPERIMENTS = "all"

# Keys that change where or how fast a run is written, not what it computes.
_OPERATIONAL_KEYS = ("outdir", "overwrite", "workers")
_RUN_ID_RE = re.compile(r"^[A-Za-z0-9_.-]+$")


def default_outdir() -> str:
    """Dossier de sortie par défaut (VOLCLUST_OUTDIR ou 'results')."""
    return os.environ.get(OUTDIR_ENV) or DEFAULT_OUTDIR


def format_pct(p: float) -> str:
    """15.0 -> '15', 2.5 -> '2.5' (used in artifact names)."""
    return f"{float(p):g}"


def parse_input_spec(spec: str) -> tuple[str, str]:
    """'NASDAQ=data/nasdaq.csv' -> ('NASDAQ', 'data/nasdaq.csv')."""
    symbol, sep, path = str(spec).partition("=")
    symbol, path = symbol.strip(), path.strip()
    if not sep or not symbol or not path:
        raise ConfigError(f"input must look like SYMBOL=path, got {spec!r}")
    return symbol, path


def expand_experiments(names: Iterable[str]) -> tuple[str, ...]:
    """Validate experiment names, expand 'all', return them in canonical order."""
    requested = set()
    for name in names:
        name = str(name).strip().lower()
        if name == ALL_EXPERIMENTS:
            requested.update(EXPERIMENTS)
        elif name in EXPERIMENTS:
            requested.add(name)
        else:
            raise ConfigError(
                f"unknown experiment {name!r} (choose from {', '.join(EXPERIMENTS)} or all)"
            )
    if not requested:
        raise ConfigError("at least one experiment is required")
    return tuple(e for e in EXPERIMENTS if e in requested)


def _positive_int(key: str, value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigError(f"{key} must be a positive integer, got {value!r}")
    return value


@dataclass
class RunConfig:
    inputs: list[tuple[str, str]] = field(default_factory=list)
    tau: int = 1
    p_list: tuple[float, ...] = (5.0, 10.0, 15.0, 20.0, 30.0)
    n_max: int = 240
    max_lag: int = 100
    bins: int = 50
    seed: int = 0
    experiments: tuple[str, ...] = (ALL_EXPERIMENTS,)
    outdir: str = field(default_factory=default_outdir)
    window: int = 10
    workers: int = 1
    overwrite: bool = False
    run_id: Optional[str] = None
    index_at: tuple[int, ...] = (1, 10, 20, 60, 120, 240)

    def __post_init__(self):
        self.inputs = self._check_inputs(self.inputs)
        for key in ("tau", "n_max", "max_lag", "bins", "window", "workers"):
            _positive_int(key, getattr(self, key))
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError(f"seed must be an integer >= 0, got {self.seed!r}")
        if self.bins < 2:
            raise ConfigError(f"bins must be >= 2, got {self.bins}")

        p_list = []
        for p in self.p_list:
            if isinstance(p, bool) or not isinstance(p, (int, float)) or not 0 < p <= 50:
                raise ConfigError(f"p values must lie in (0, 50], got {p!r}")
            p_list.append(float(p))
        if not p_list:
            raise ConfigError("p_list must not be empty")
        self.p_list = tuple(sorted(set(p_list)))

        if isinstance(self.experiments, str):
            self.experiments = (self.experiments,)
        self.experiments = expand_experiments(self.experiments)
        self.index_at = tuple(sorted({_positive_int("index_at", n) for n in self.index_at}))

        if self.run_id is not None:
            if not isinstance(self.run_id, str) or not _RUN_ID_RE.fullmatch(self.run_id):
                raise ConfigError(f"run_id may only contain letters, digits, '.', '_' and '-', got {self.run_id!r}")
        self.outdir = str(self.outdir)
        self.overwrite = bool(self.overwrite)

    @staticmethod
    def _check_inputs(inputs) -> list[tuple[str, str]]:
        if isinstance(inputs, Mapping):
            pairs = [(str(s), str(p)) for s, p in inputs.items()]
        else:
            pairs = [parse_input_spec(i) if isinstance(i, str) else tuple(i) for i in inputs]

        symbols, slugs = set(), set()
        for symbol, _ in pairs:
            if symbol in symbols or slugify(symbol) in slugs:
                raise ConfigError(f"duplicate input symbol {symbol!r}")
            symbols.add(symbol)
            slugs.add(slugify(symbol))
        return [(str(s), str(p)) for s, p in pairs]

    def to_dict(self) -> dict:
        data = asdict(self)
        data["inputs"] = [f"{s}={p}" for s, p in self.inputs]
        data["p_list"] = list(self.p_list)
        data["experiments"] = list(self.experiments)
        data["index_at"] = list(self.index_at)
        return data

    def canonical_dict(self) -> dict:
        """Settings that determine the artifacts (no paths, no scheduling)."""
        data = self.to_dict()
        for key in _OPERATIONAL_KEYS:
            data.pop(key)
        data.pop("inputs")
        data.pop("run_id")
        data["symbols"] = [s for s, _ in self.inputs]
        return data


FIELD_NAMES = tuple(f.name for f in fields(RunConfig))


def compute_run_id(cfg: RunConfig, input_digests: Iterable[str]) -> str:
    """Explicit run_id, or 'run-' + 12 hex chars of the settings and input digests."""
    if cfg.run_id:
        return cfg.run_id
    payload = json.dumps(
        {"config": cfg.canonical_dict(), "inputs": list(input_digests)},
        sort_keys=True,
    )
    return "run-" + hashlib.sha256(payload.encode("utf-8")).hexdigest()[:12]


# =============================================================================
# FILES AND OVERRIDES
# =============================================================================

def load_config_file(path: Union[str, Path]) -> dict:
    """
    Read a flat JSON config. Relative input paths are resolved against the
    file's directory.

    Raises:
        ConfigError: unreadable file, invalid JSON, non-object document or
            unknown keys.
    """
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON in {path} at line {e.lineno}: {e.msg}") from e

    if not isinstance(document, dict):
        raise ConfigError(f"{path} must hold a JSON object")
    unknown = sorted(set(document) - set(FIELD_NAMES))
    if unknown:
        raise ConfigError(f"unknown config key(s) in {path}: {', '.join(unknown)}")

    if "inputs" in document:
        raw = document["inputs"]
        if isinstance(raw, dict):
            pairs = list(raw.items())
        elif isinstance(raw, list):
            pairs = [parse_input_spec(item) for item in raw]
        else:
            raise ConfigError("inputs must be an object or a list of SYMBOL=path strings")
        document["inputs"] = [(s, str(_resolve(path.parent, p))) for s, p in pairs]

    logger.debug("Loaded config %s (%d keys)", path, len(document))
    return document


def _resolve(base: Path, value: Any) -> Path:
    candidate = Path(str(value))
    return candidate if candidate.is_absolute() else base / candidate


def build_config(
    config_path: Optional[Union[str, Path]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> RunConfig:
    """Defaults, then the config file, then every override that is not None."""
    values: dict = {}
    if config_path is not None:
        values.update(load_config_file(config_path))
    for key, value in (overrides or {}).items():
        if key not in FIELD_NAMES:
            raise ConfigError(f"unknown setting {key!r}")
        if value is not None:
            values[key] = value

    for key in ("p_list", "experiments", "index_at"):
        if key in values and not isinstance(values[key], (list, tuple, str)):
            raise ConfigError(f"{key} must be a list")
    try:
        return RunConfig(**values)
    except TypeError as e:
        raise ConfigError(f"invalid configuration: {e}") from e


def template_document() -> str:
    """Config JSON holding the full reproduction defaults."""
    cfg = RunConfig(
        inputs=[("NASDAQ", "data/nasdaq.csv")],
        experiments=(ALL_EXPERIMENTS,),
        outdir=DEFAULT_OUTDIR,
    )
    document = cfg.to_dict()
    document.pop("overwrite")
    document.pop("run_id")
    document["p_list"] = [int(p) if p.is_integer() else p for p in cfg.p_list]
    document["experiments"] = [ALL_EXPERIMENTS]
    return json.dumps(document, indent=2) + "\n"
