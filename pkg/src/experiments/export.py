"""
Sweep result files.

`<prefix>.csv` holds one row per cell × seed with the columns of
CELL_COLUMNS. `<prefix>.json` holds the configuration echo, the axes,
per-cell aggregates, the boundary and library versions. Non-finite values
are written as null; a boundary of null means the whole column is tight.
"""

import logging
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np
import numpy.typing as npt
import pandas as pd
import scipy
from pydantic import BaseModel

import src
from src.experiments.sweep import CELL_COLUMNS, SweepConfig, SweepResult

log = logging.getLogger(__name__)


class BoundaryRecord(BaseModel):
    y: float
    x: Optional[float]


class SweepSummary(BaseModel):
    config: SweepConfig
    x_name: str
    y_name: str
    x_values: List[float]
    y_values: List[float]
    min_er: List[List[Optional[float]]]
    max_gap: List[List[Optional[float]]]
    smoothed_er: List[List[Optional[float]]]
    boundary: List[BoundaryRecord]
    tight_fraction: float
    columns: List[str]
    versions: Dict[str, str]


def _finite(value: float) -> Optional[float]:
    return float(value) if np.isfinite(value) else None


def _grid(values: npt.ArrayLike) -> List[List[Optional[float]]]:
    return [[_finite(v) for v in row] for row in np.asarray(values, dtype=float)]


def summarize(result: SweepResult) -> SweepSummary:
    return SweepSummary(
        config=result.config,
        x_name=result.config.x_axis.name,
        y_name=result.config.y_axis.name,
        x_values=result.x_values.tolist(),
        y_values=result.y_values.tolist(),
        min_er=_grid(result.min_er),
        max_gap=_grid(result.max_gap),
        smoothed_er=_grid(result.smoothed_er),
        boundary=[BoundaryRecord(y=b.y, x=_finite(b.x)) for b in result.boundary],
        tight_fraction=result.tight_fraction,
        columns=CELL_COLUMNS,
        versions={
            "certest": src.__version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "pandas": pd.__version__,
        },
    )


def emit_results(result: SweepResult, prefix: Union[str, Path]) -> Tuple[Path, Path]:
    """
    Write `<prefix>.csv` and `<prefix>.json`.

    Args:
        result (SweepResult): Sweep to export.
        prefix (str | Path): Output path without extension; parent
            directories are created.

    Returns:
        tuple[Path, Path]: CSV and JSON paths.

    Raises:
        OSError: If a file cannot be written; the message names the path.
    """
    prefix = Path(prefix)
    csv_path = prefix.with_name(prefix.name + ".csv")
    json_path = prefix.with_name(prefix.name + ".json")
    try:
        csv_path.parent.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise OSError(f"cannot create {csv_path.parent}: {e}") from e
    _write(csv_path, lambda p: result.rows.to_csv(p, index=False, float_format="%.17g"))
    summary = summarize(result).model_dump_json(indent=2)
    _write(json_path, lambda p: p.write_text(summary))
    log.info(f"Wrote {len(result.rows)} rows to {csv_path} and summary to {json_path}")
    return csv_path, json_path


def load_rows(csv_path: Union[str, Path]) -> pd.DataFrame:
    """Read an emitted CSV back; empty error fields become empty strings."""
    return pd.read_csv(csv_path, keep_default_na=True).fillna({"error": ""})


def _write(path: Path, writer: Callable[[Path], object]) -> None:
    try:
        writer(path)
    except OSError as e:
        raise OSError(f"cannot write {path}: {e}") from e
