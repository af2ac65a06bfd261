"""
Lag embeddings and the two file-backed benchmark series (gas furnace and
wastewater flow).
"""

import csv
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union
import numpy as np

from eann_hybrid.datasets.dataset import RawSeries, SupervisedDataset
from eann_hybrid.errors import DatasetError
from eann_hybrid.utils.logger import logger

GAS_FURNACE_PATTERNS = 292
GAS_FURNACE_SPLIT = 146
WASTEWATER_PATTERNS = 475
WASTEWATER_SPLIT = 240
WASTEWATER_SHORT_WINDOW = 12
WASTEWATER_LONG_WINDOW = 24

WASTEWATER_PROVENANCE = (
  "hourly wastewater flow series (not distributed with this package; supply your own "
  "single-column CSV, or use the synthetic surrogate to exercise the pipeline)")
GAS_FURNACE_PROVENANCE = (
  "Box-Jenkins gas furnace series (two columns: gas feed rate u, CO2 concentration y)")


def embed_lags(
    values: np.ndarray,
    lags: Sequence[int],
    horizon: int,
    start: int,
    n_patterns: int) -> Tuple[np.ndarray, np.ndarray]:
  """Inputs values[t + lag] for each lag and target values[t + horizon], t = start..start+P-1"""
  t = np.arange(start, start + n_patterns)
  inputs = np.column_stack([values[t + lag] for lag in lags])
  return inputs, values[t + horizon]


def moving_average(series, window: int) -> np.ndarray:
  """
  Trailing mean over the last `window` samples ending at each t; the first
  window-1 entries average the shorter prefix that exists.
  """
  values = np.asarray(series, dtype=np.float64).reshape(-1)
  if window < 1:
    raise DatasetError(f"moving-average window must be >= 1, got {window}")
  if values.size == 0:
    raise DatasetError("moving average of an empty series")
  sums = np.cumsum(values)
  out = np.empty_like(values)
  head = min(window, values.size)
  out[:head] = sums[:head] / np.arange(1, head + 1)
  if values.size > window:
    out[window:] = (sums[window:] - sums[:-window]) / window
  return out


def read_numeric_csv(path: Union[str, Path], n_columns: int, provenance: str = "") -> np.ndarray:
  """
  Read a comma-separated numeric table with an optional single header row.

  Every rejected row is reported in the DatasetError diagnostics.
  """
  path = Path(path)
  if not path.is_file():
    message = f"data file not found: {path}"
    if provenance:
      message += f" ({provenance})"
    logger.error(f"✗ {message}")
    raise DatasetError(message)

  rows: List[List[float]] = []
  diagnostics: List[str] = []
  header_allowed = True
  with open(path, "r", encoding="utf-8", newline="") as f:
    for line_no, row in enumerate(csv.reader(f), start=1):
      cells = [cell.strip() for cell in row]
      if not any(cells):
        continue
      first_row, header_allowed = header_allowed, False
      if len(cells) != n_columns:
        diagnostics.append(f"row {line_no}: expected {n_columns} column(s), found {len(cells)}")
        continue
      try:
        numbers = [float(cell) for cell in cells]
      except ValueError:
        if not first_row:
          diagnostics.append(f"row {line_no}: non-numeric value in {','.join(cells)!r}")
        continue
      if not all(np.isfinite(numbers)):
        diagnostics.append(f"row {line_no}: NaN or infinite value")
        continue
      rows.append(numbers)

  if diagnostics:
    logger.error(f"✗ {path}: {len(diagnostics)} malformed row(s)")
    raise DatasetError(f"{path}: malformed data", diagnostics)
  return np.array(rows, dtype=np.float64).reshape(-1, n_columns)


def build_gas_furnace(
    series: RawSeries,
    n_patterns: int = GAS_FURNACE_PATTERNS,
    split_index: int = GAS_FURNACE_SPLIT) -> SupervisedDataset:
  """Patterns [u(t), y(t)] -> y(t+1), truncated to n_patterns"""
  values = series.values.reshape(len(series), -1)
  if values.shape[1] != 2:
    raise DatasetError(f"{series.name}: gas furnace data needs columns (u, y), got {values.shape[1]}")
  if values.shape[0] < n_patterns + 1:
    raise DatasetError(
      f"{series.name}: {n_patterns} patterns need {n_patterns + 1} observations, "
      f"found {values.shape[0]}")
  u, y = values[:, 0], values[:, 1]
  inputs = np.column_stack([u[:n_patterns], y[:n_patterns]])
  return SupervisedDataset(
    name=series.name,
    inputs=inputs,
    targets=y[1:n_patterns + 1],
    split_index=split_index,
    input_names=("u(t)", "y(t)"),
    target_name="y(t+1)",
    embedding="[u(t), y(t)] -> y(t+1)",
    provenance=GAS_FURNACE_PROVENANCE,
  )


def load_gas_furnace(path: Union[str, Path]) -> SupervisedDataset:
  values = read_numeric_csv(path, 2, GAS_FURNACE_PROVENANCE)
  if values.shape[0] < GAS_FURNACE_PATTERNS + 1:
    raise DatasetError(
      f"{path}: gas furnace file needs >= {GAS_FURNACE_PATTERNS + 1} observations, "
      f"found {values.shape[0]}")
  dataset = build_gas_furnace(RawSeries(values, name="gas-furnace", columns=("u", "y")))
  logger.info(f"✓ Loaded gas furnace data from {path}: {dataset.n_patterns} patterns")
  return dataset


def build_wastewater(
    series: RawSeries,
    n_patterns: int = WASTEWATER_PATTERNS,
    split_index: int = WASTEWATER_SPLIT,
    provenance: Optional[str] = None) -> SupervisedDataset:
  """
  Patterns [f(t), f(t-1), a(t), b(t)] -> f(t+1) for t = 1..n_patterns, with
  a and b the 12- and 24-sample trailing means of the flow.
  """
  flow = series.column(0)
  if flow.size < n_patterns + 2:
    raise DatasetError(
      f"{series.name}: {n_patterns} patterns need {n_patterns + 2} flow values "
      f"(one before and one after each pattern), found {flow.size}")
  short = moving_average(flow, WASTEWATER_SHORT_WINDOW)
  long = moving_average(flow, WASTEWATER_LONG_WINDOW)
  t = np.arange(1, n_patterns + 1)
  inputs = np.column_stack([flow[t], flow[t - 1], short[t], long[t]])
  return SupervisedDataset(
    name=series.name,
    inputs=inputs,
    targets=flow[t + 1],
    split_index=split_index,
    input_names=("f(t)", "f(t-1)", "a12(t)", "b24(t)"),
    target_name="f(t+1)",
    embedding="[f(t), f(t-1), a12(t), b24(t)] -> f(t+1)",
    provenance=provenance or WASTEWATER_PROVENANCE,
  )


def load_wastewater(path: Union[str, Path]) -> SupervisedDataset:
  values = read_numeric_csv(path, 1, WASTEWATER_PROVENANCE)
  needed = WASTEWATER_PATTERNS + 2
  if values.shape[0] < needed:
    raise DatasetError(
      f"{path}: wastewater file needs >= {needed} hourly flow values, found {values.shape[0]}")
  dataset = build_wastewater(RawSeries(values[:, 0], name="wastewater", columns=("f",)))
  logger.info(f"✓ Loaded wastewater flow from {path}: {dataset.n_patterns} patterns")
  return dataset
