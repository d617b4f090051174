"""
Price-series input and result-artifact output.

Input is a two-column UTF-8 CSV (``date,close``); consecutive rows are
consecutive trading days. Output is one directory per run holding one CSV per
table or plot series, a JSON summary and a manifest.
"""

import io
import json
import math
import re
import shutil
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
import pandas as pd

from .errors import IngestError, OutputError
from .logging_config import get_logger
from .utils import bytes_digest, ensure_directory, file_digest

logger = get_logger(__name__)

HEADER = ("date", "close")
ARTIFACT_KINDS = ("table", "plotdata", "summary")
MANIFEST_NAME = "manifest.json"
SUMMARY_NAME = "summary"

_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")
_ARTIFACT_NAME_RE = re.compile(r"^[A-Za-z0-9_.-]+$")
_PANDAS_LINE_RE = re.compile(r"line (\d+)")


# =============================================================================
# PRICE SERIES
# =============================================================================

@dataclass(frozen=True, eq=False)
class PriceSeries:
    """Daily closing prices p(t), strictly ordered by date."""

    symbol: str
    dates: np.ndarray   # datetime64[D]
    closes: np.ndarray  # float64, > 0

    def __post_init__(self):
        dates = np.asarray(self.dates, dtype="datetime64[D]")
        closes = np.asarray(self.closes, dtype=np.float64)
        if dates.shape != closes.shape or dates.ndim != 1:
            raise IngestError("dates and closes must be 1-D arrays of equal length")
        if len(closes) < 2:
            raise IngestError(f"a price series needs at least 2 observations, got {len(closes)}")
        if not np.all(np.isfinite(closes)) or np.any(closes <= 0):
            raise IngestError("every close must be a positive finite number")
        if np.any(np.diff(dates) <= np.timedelta64(0, "D")):
            raise IngestError("dates must be strictly increasing")
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "closes", closes)

    def __len__(self) -> int:
        return len(self.closes)


def _parse_day(raw: Any, line: int) -> date:
    if not isinstance(raw, str) or not _DATE_RE.fullmatch(raw.strip()):
        raise IngestError(f"malformed date {raw!r}", line=line)
    try:
        return date.fromisoformat(raw.strip())
    except ValueError:
        raise IngestError(f"invalid calendar date {raw!r}", line=line) from None


def _parse_close(raw: Any, line: int) -> float:
    if not isinstance(raw, str) or not raw.strip():
        raise IngestError("missing close", line=line)
    try:
        value = float(raw.strip())
    except ValueError:
        raise IngestError(f"malformed close {raw!r}", line=line) from None
    if not math.isfinite(value):
        raise IngestError(f"non-finite close {raw!r}", line=line)
    if value <= 0:
        raise IngestError(f"non-positive close {raw.strip()}", line=line)
    return value


def parse_price_csv(data: bytes, symbol: str = "SERIES") -> PriceSeries:
    """
    Parse a ``date,close`` CSV into a PriceSeries.

    Rows are sorted by date when the input is unsorted. Closes are kept at
    full double precision. Errors carry the 1-based line number of the
    offending row (the header is line 1).
    """
    try:
        text = data.decode("utf-8-sig")
    except UnicodeDecodeError as e:
        raise IngestError(f"input is not UTF-8 text ({e.reason})") from None

    if not text.strip():
        raise IngestError("empty input", line=1)

    # Trailing newlines would surface as blank rows.
    text = text.rstrip("\r\n") + "\n"
    try:
        frame = pd.read_csv(
            io.StringIO(text),
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=False,
        )
    except pd.errors.ParserError as e:
        match = _PANDAS_LINE_RE.search(str(e))
        raise IngestError("malformed row", line=int(match.group(1)) if match else None) from None

    columns = tuple(str(c).strip().lower() for c in frame.columns)
    if columns != HEADER:
        raise IngestError(f"header must be 'date,close', got {','.join(map(str, frame.columns))!r}", line=1)

    days: list[date] = []
    closes: list[float] = []
    first_seen: dict[date, int] = {}
    for offset, (raw_date, raw_close) in enumerate(zip(frame.iloc[:, 0], frame.iloc[:, 1])):
        line = offset + 2
        day = _parse_day(raw_date, line)
        close = _parse_close(raw_close, line)
        if day in first_seen:
            raise IngestError(f"duplicate date {day.isoformat()} (first at line {first_seen[day]})", line=line)
        first_seen[day] = line
        days.append(day)
        closes.append(close)

    if len(days) < 2:
        raise IngestError(f"need at least 2 rows, got {len(days)}")

    dates = np.array(days, dtype="datetime64[D]")
    values = np.array(closes, dtype=np.float64)
    order = np.argsort(dates, kind="stable")
    if np.any(order != np.arange(len(order))):
        logger.debug("Rows of %s were not in date order, sorting", symbol)
        dates, values = dates[order], values[order]

    return PriceSeries(symbol=symbol, dates=dates, closes=values)


def read_price_file(path: Union[str, Path], symbol: Optional[str] = None) -> PriceSeries:
    """Read a price CSV from disk (symbol defaults to the file stem)."""
    path = Path(path)
    return parse_price_csv(path.read_bytes(), symbol=symbol or path.stem)


def format_price_csv(series: PriceSeries) -> bytes:
    """Serialize a PriceSeries back to ``date,close`` (round-trips exactly)."""
    frame = pd.DataFrame({
        "date": np.datetime_as_string(series.dates, unit="D"),
        "close": [repr(float(c)) for c in series.closes],
    })
    return frame.to_csv(index=False, lineterminator="\n").encode("utf-8")


# =============================================================================
# RESULT ARTIFACTS
# =============================================================================

@dataclass
class Artifact:
    """One table or plot series produced by an analysis."""
    name: str
    kind: str
    frame: pd.DataFrame


@dataclass
class InputDigest:
    symbol: str
    path: str
    sha256: str


@dataclass
class CellFailure:
    """An analysis cell (series x experiment) that raised."""
    symbol: str
    experiment: str
    error: str
    message: str


@dataclass
class ResultSet:
    """Everything a run produced, before it is written to disk."""
    run_id: str
    inputs: list[InputDigest] = field(default_factory=list)
    artifacts: list[Artifact] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    failures: list[CellFailure] = field(default_factory=list)
    config: dict = field(default_factory=dict)


@dataclass
class ArtifactRecord:
    name: str
    path: str
    kind: str
    sha256: str


@dataclass
class ResultManifest:
    """What was written for a run; paths are relative to ``run_dir``."""
    run_id: str
    run_dir: Path
    inputs: list[InputDigest] = field(default_factory=list)
    artifacts: list[ArtifactRecord] = field(default_factory=list)
    failures: list[CellFailure] = field(default_factory=list)
    config: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def artifact(self, name: str) -> ArtifactRecord:
        for record in self.artifacts:
            if record.name == name:
                return record
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "run_id": self.run_id,
            "inputs": [vars(i) for i in self.inputs],
            "artifacts": [vars(a) for a in self.artifacts],
            "failures": [vars(f) for f in self.failures],
            "config": self.config,
        }


def to_jsonable(obj: Any) -> Any:
    """Convert numpy scalars/arrays and paths to plain JSON values (NaN -> null)."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else None
    if isinstance(obj, Path):
        return str(obj)
    return obj


def _dump_json(obj: Any) -> bytes:
    text = json.dumps(to_jsonable(obj), indent=2, sort_keys=True, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


def write_outputs(results: ResultSet, outdir: Union[str, Path], overwrite: bool = False) -> ResultManifest:
    """
    Write ``results`` under ``<outdir>/<run_id>/``.

    One CSV per artifact, ``summary.json`` when there is anything to
    summarize, and ``manifest.json``. Output bytes depend only on the
    content of ``results``.

    Raises:
        OutputError: unwritable path, invalid artifact names, or an existing
            run directory without ``overwrite``.
    """
    run_dir = Path(outdir) / results.run_id
    if run_dir.exists():
        if not overwrite:
            raise OutputError(f"run_id '{results.run_id}' already exists in {outdir} (use overwrite)")
        logger.info("Overwriting existing run directory %s", run_dir)
        shutil.rmtree(run_dir)

    names = [a.name for a in results.artifacts]
    if len(set(names)) != len(names):
        raise OutputError("artifact names must be unique")
    for artifact in results.artifacts:
        if not _ARTIFACT_NAME_RE.fullmatch(artifact.name) or artifact.name == SUMMARY_NAME:
            raise OutputError(f"invalid artifact name {artifact.name!r}")
        if artifact.kind not in ARTIFACT_KINDS:
            raise OutputError(f"invalid artifact kind {artifact.kind!r}")

    try:
        ensure_directory(run_dir)
        records: list[ArtifactRecord] = []
        for artifact in sorted(results.artifacts, key=lambda a: a.name):
            path = run_dir / f"{artifact.name}.csv"
            artifact.frame.to_csv(path, index=False, lineterminator="\n")
            records.append(ArtifactRecord(artifact.name, path.name, artifact.kind, file_digest(path)))

        if records or results.summary:
            payload = _dump_json(results.summary)
            path = run_dir / f"{SUMMARY_NAME}.json"
            path.write_bytes(payload)
            records.append(ArtifactRecord(SUMMARY_NAME, path.name, "summary", bytes_digest(payload)))

        manifest = ResultManifest(
            run_id=results.run_id,
            run_dir=run_dir,
            inputs=list(results.inputs),
            artifacts=records,
            failures=list(results.failures),
            config=dict(results.config),
        )
        (run_dir / MANIFEST_NAME).write_bytes(_dump_json(manifest.to_dict()))
    except OSError as e:
        raise OutputError(f"cannot write outputs to {run_dir}: {e}") from e

    logger.info(
        "Wrote %d artifact(s) to %s", len(records), run_dir,
        extra={"run_id": results.run_id},
    )
    return manifest
