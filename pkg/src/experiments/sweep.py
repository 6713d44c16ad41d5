"""
Two-parameter tightness sweeps.

Every grid cell is solved for a number of seeds; the per-cell minimum ER
and worst relative gap are aggregated, the ER grid is median-smoothed and
the tight/loose boundary is read off along each column.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from time import perf_counter
from typing import List, Optional

import numpy as np
import numpy.typing as npt
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy import ndimage

from src.errors import CertestError, InvalidWindow
from src.experiments.runner import solve_instance
from src.experiments.scenarios import Scenario, generate_scenario
from src.linalg import FloatArray
from src.sdp import TIGHT_ER, SolverOptions

log = logging.getLogger(__name__)

CELL_COLUMNS = [
    "ix",
    "iy",
    "x",
    "y",
    "seed",
    "status",
    "er",
    "relative_gap",
    "rank",
    "corank_h",
    "primal_cost",
    "dual_cost",
    "rounded_cost",
    "rotation_error",
    "iterations",
    "n_constraints",
    "error",
]


class GridAxis(BaseModel):
    """
    Log-spaced sweep axis over one Scenario field.

    Args:
        name (str): Scenario field to vary.
        start (float): First value, > 0.
        stop (float): Last value, > 0.
        count (int): Number of values.
    """

    model_config = ConfigDict(extra="forbid")

    name: str
    start: float = Field(gt=0)
    stop: float = Field(gt=0)
    count: int = Field(ge=1)

    def values(self) -> FloatArray:
        return np.logspace(np.log10(self.start), np.log10(self.stop), self.count)


class SweepConfig(BaseModel):
    """
    Args:
        scenario (Scenario): Template; axis fields and the seed are overridden
            per cell.
        x_axis (GridAxis): Row axis, scanned for the boundary.
        y_axis (GridAxis): Column axis.
        seeds (int): Seeds per cell, scenario.seed + 0 .. seeds − 1.
        redundant (bool): Add redundant constraints.
        window (int): Odd median filter window.
        solver (SolverOptions): SDP settings.
    """

    model_config = ConfigDict(extra="forbid")

    scenario: Scenario = Scenario()
    x_axis: GridAxis = GridAxis(name="noise_std", start=1e-3, stop=1.0, count=8)
    y_axis: GridAxis = GridAxis(name="anisotropy", start=1.0, stop=30.0, count=8)
    seeds: int = Field(10, ge=1)
    redundant: bool = False
    window: int = Field(3, ge=1)
    solver: SolverOptions = SolverOptions()

    @model_validator(mode="after")
    def _check_axes(self) -> "SweepConfig":
        fields = Scenario.model_fields
        for axis in (self.x_axis, self.y_axis):
            if axis.name not in fields or axis.name in ("kind", "seed"):
                raise ValueError(f"cannot sweep over scenario field {axis.name!r}")
        if self.x_axis.name == self.y_axis.name:
            raise ValueError("sweep axes must differ")
        if self.window % 2 == 0:
            raise ValueError(f"median window must be odd, got {self.window}")
        return self


@dataclass(frozen=True)
class SweepTask:
    ix: int
    iy: int
    x: float
    y: float
    seed: int
    scenario: Scenario
    redundant: bool
    solver: SolverOptions


@dataclass(frozen=True)
class BoundaryPoint:
    """
    Crossing of log10(min ER) = 6 along one grid column.

    x is +inf when the whole column is tight and 0.0 when the first cell is
    already loose.
    """

    y: float
    x: float


@dataclass(frozen=True)
class SweepResult:
    """
    Args:
        config (SweepConfig): Configuration that produced the result.
        x_values (FloatArray): Row axis values.
        y_values (FloatArray): Column axis values.
        rows (pd.DataFrame): One row per cell × seed, ordered by (ix, iy, seed).
        min_er (FloatArray): Per-cell minimum ER over seeds, NaN if every
            seed failed.
        max_gap (FloatArray): Per-cell worst relative gap.
        smoothed_er (FloatArray): median_smooth(min_er, window).
        boundary (list[BoundaryPoint]): One crossing per column.
    """

    config: SweepConfig
    x_values: FloatArray
    y_values: FloatArray
    rows: pd.DataFrame
    min_er: FloatArray
    max_gap: FloatArray
    smoothed_er: FloatArray
    boundary: List[BoundaryPoint]

    @property
    def tight_fraction(self) -> float:
        return float(np.mean(self.min_er >= TIGHT_ER))


def run_task(task: SweepTask) -> dict:
    """Solve one cell × seed; solver and input errors become a row status."""
    scenario = task.scenario.model_copy(update={"seed": task.seed})
    row = {"ix": task.ix, "iy": task.iy, "x": task.x, "y": task.y, "seed": task.seed}
    try:
        graph, truth = generate_scenario(scenario)
        result = solve_instance(graph, truth, task.redundant, task.solver)
        row.update(result.row())
        row["error"] = ""
    except (CertestError, ValueError, np.linalg.LinAlgError) as e:
        log.warning(f"Cell ({task.ix}, {task.iy}) seed {task.seed} failed: {e}")
        row.update({"status": "error", "error": f"{type(e).__name__}: {e}"})
    return row


def _tasks(config: SweepConfig) -> List[SweepTask]:
    x_name, y_name = config.x_axis.name, config.y_axis.name
    tasks = []
    for ix, x in enumerate(config.x_axis.values()):
        for iy, y in enumerate(config.y_axis.values()):
            cell = config.scenario.model_copy(
                update={x_name: float(x), y_name: float(y)}
            )
            Scenario.model_validate(cell.model_dump())
            for s in range(config.seeds):
                tasks.append(
                    SweepTask(
                        ix,
                        iy,
                        float(x),
                        float(y),
                        config.scenario.seed + s,
                        cell,
                        config.redundant,
                        config.solver,
                    )
                )
    return tasks


def run_sweep(config: SweepConfig, workers: int = 1) -> SweepResult:
    """
    Run every cell × seed, aggregate, smooth and extract the boundary.

    Args:
        config (SweepConfig): Sweep definition.
        workers (int, optional): Process pool size; 1 runs in-process.

    Returns:
        SweepResult: Rows merged by (ix, iy, seed) regardless of completion
            order.
    """
    start = perf_counter()
    tasks = _tasks(config)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(run_task, tasks, chunksize=4))
    else:
        records = [run_task(t) for t in tasks]
    rows = (
        pd.DataFrame.from_records(records)
        .reindex(columns=CELL_COLUMNS)
        .sort_values(["ix", "iy", "seed"], kind="stable")
        .reset_index(drop=True)
    )
    shape = (config.x_axis.count, config.y_axis.count)
    cells = rows.groupby(["ix", "iy"]).agg(
        min_er=("er", "min"), max_gap=("relative_gap", "max")
    )
    min_er = np.full(shape, np.nan)
    max_gap = np.full(shape, np.nan)
    for (ix, iy), cell in cells.iterrows():
        min_er[ix, iy] = cell["min_er"]
        max_gap[ix, iy] = cell["max_gap"]
    smoothed = median_smooth(min_er, config.window)
    x_values, y_values = config.x_axis.values(), config.y_axis.values()
    boundary = extract_boundary(x_values, y_values, smoothed)
    n_failed = int((rows["status"] != "optimal").sum())
    log.info(
        f"[metric:sweep.run] cells={shape[0] * shape[1]} seeds={config.seeds} "
        f"failed={n_failed} workers={workers} {perf_counter() - start:.2f}s"
    )
    return SweepResult(
        config=config,
        x_values=x_values,
        y_values=y_values,
        rows=rows,
        min_er=min_er,
        max_gap=max_gap,
        smoothed_er=smoothed,
        boundary=boundary,
    )


def median_smooth(grid: npt.ArrayLike, window: int) -> FloatArray:
    """
    Median over the in-bounds window × window block centered on each cell.

    NaN cells are ignored; a window of only NaNs stays NaN.

    Raises:
        InvalidWindow: If window is not a positive odd integer.
    """
    if window < 1 or window % 2 == 0:
        raise InvalidWindow(f"window must be odd and positive, got {window}")
    values = np.asarray(grid, dtype=np.float64)
    with np.errstate(all="ignore"):
        return ndimage.generic_filter(
            values, _nanmedian, size=window, mode="constant", cval=np.nan
        )


def _nanmedian(block: FloatArray) -> float:
    finite = block[~np.isnan(block)]
    return float(np.median(finite)) if finite.size else np.nan


def extract_boundary(
    x_values: npt.ArrayLike, y_values: npt.ArrayLike, er_grid: npt.ArrayLike
) -> List[BoundaryPoint]:
    """
    For each column, the first x where log10(ER) falls through 6, linearly
    interpolated in (log10 x, log10 ER).
    """
    xs = np.log10(np.asarray(x_values, dtype=np.float64))
    level = np.log10(TIGHT_ER)
    with np.errstate(divide="ignore"):
        log_er = np.log10(np.asarray(er_grid, dtype=np.float64))
    points = []
    for j, y in enumerate(np.asarray(y_values, dtype=np.float64)):
        column = log_er[:, j]
        if not column[0] >= level:
            points.append(BoundaryPoint(float(y), 0.0))
            continue
        crossing = np.inf
        for i in range(len(column) - 1):
            if column[i] >= level and not column[i + 1] >= level:
                upper = column[i + 1] if np.isfinite(column[i + 1]) else level - 1.0
                t = (column[i] - level) / (column[i] - upper)
                crossing = 10.0 ** (xs[i] + t * (xs[i + 1] - xs[i]))
                break
        points.append(BoundaryPoint(float(y), float(crossing)))
    return points
