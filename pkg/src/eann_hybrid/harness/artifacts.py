"""
Run artifact directories.

  config.json                 experiment snapshot (seed included), dataset
                              normalization and the desired test values
  repetitions/rep-<k>.json    one record per repetition (full evolution
                              report or training result)
  summary.csv / summary.txt   one row: worst test RMSE over repetitions
  convergence_rep<k>.csv      per-generation trace (per-epoch for baselines)
  best_genome.json            hybrid runs only
  predictions.csv             desired vs predicted on the test split, for
                              the repetition the summary reports

No timestamps are written, so identical runs give identical bytes.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union
import numpy as np

from eann_hybrid.datasets.dataset import Normalization
from eann_hybrid.errors import ArtifactError
from eann_hybrid.harness.tables import csv_text, format_rmse, render_text_table
from eann_hybrid.utils.files import json_dump, json_load
from eann_hybrid.utils.logger import logger

HYBRID = "hybrid"
BASELINE = "baseline"
SINGLE = "single"

SUMMARY_HEADERS = (
  "dataset", "method", "trainer", "max_hidden", "train_rmse", "test_rmse",
  "architecture", "repetitions",
)


@dataclass(frozen=True)
class RepetitionResult:
  repetition: int
  seed: int
  train_rmse: float
  test_rmse: float
  architecture: str
  trainer: str
  predictions: List[float]
  trace: List[Tuple[int, float]]
  trace_columns: Tuple[str, str] = ("generation", "mean_test_rmse")
  genome: Optional[Dict[str, Any]] = None
  report: Optional[Dict[str, Any]] = field(default=None, compare=False)
  training: Optional[Dict[str, Any]] = field(default=None, compare=False)

  def to_dict(self) -> Dict[str, Any]:
    return {
      "repetition": self.repetition,
      "seed": self.seed,
      "train_rmse": self.train_rmse,
      "test_rmse": self.test_rmse,
      "architecture": self.architecture,
      "trainer": self.trainer,
      "predictions": list(self.predictions),
      "trace": [[int(step), float(value)] for step, value in self.trace],
      "trace_columns": list(self.trace_columns),
      "genome": self.genome,
      "report": self.report,
      "training": self.training,
    }

  @classmethod
  def from_dict(cls, data: Dict[str, Any]) -> "RepetitionResult":
    return cls(
      repetition=int(data["repetition"]),
      seed=int(data["seed"]),
      train_rmse=float(data["train_rmse"]),
      test_rmse=float(data["test_rmse"]),
      architecture=data["architecture"],
      trainer=data["trainer"],
      predictions=[float(p) for p in data["predictions"]],
      trace=[(int(step), float(value)) for step, value in data["trace"]],
      trace_columns=tuple(data.get("trace_columns", ("generation", "mean_test_rmse"))),
      genome=data.get("genome"),
      report=data.get("report"),
      training=data.get("training"),
    )


@dataclass(frozen=True)
class SummaryRow:
  dataset: str
  method: str
  trainer: str
  max_hidden: Optional[int]
  train_rmse: float
  test_rmse: float
  architecture: str
  repetitions: int

  def cells(self) -> List[Any]:
    return [self.dataset, self.method, self.trainer, self.max_hidden, self.train_rmse,
            self.test_rmse, self.architecture, self.repetitions]

  def text_cells(self) -> List[str]:
    return [self.dataset, self.method, self.trainer,
            "-" if self.max_hidden is None else str(self.max_hidden),
            format_rmse(self.train_rmse), format_rmse(self.test_rmse),
            self.architecture, str(self.repetitions)]


@dataclass(frozen=True)
class RunArtifact:
  """Everything one experiment (all repetitions of one trainer mode) produced"""
  method: str
  dataset: str
  trainer: str
  max_hidden: Optional[int]
  config: Dict[str, Any]
  test_targets: List[float]
  repetitions: List[RepetitionResult]
  normalization: Optional[Dict[str, Any]] = None

  def __post_init__(self):
    if not self.repetitions:
      raise ArtifactError(f"{self.name}: artifact has no repetitions")

  @property
  def name(self) -> str:
    hidden = "" if self.max_hidden is None else f"-h{self.max_hidden}"
    return f"{self.dataset}-{self.method}-{self.trainer.lower()}{hidden}"

  @property
  def worst(self) -> RepetitionResult:
    """The reported repetition: highest test RMSE, first on ties"""
    return max(self.repetitions, key=lambda r: (r.test_rmse, -r.repetition))

  @property
  def best(self) -> RepetitionResult:
    return min(self.repetitions, key=lambda r: (r.test_rmse, r.repetition))

  def summary_row(self) -> SummaryRow:
    worst = self.worst
    return SummaryRow(
      dataset=self.dataset,
      method=self.method,
      trainer=self.trainer,
      max_hidden=self.max_hidden,
      train_rmse=worst.train_rmse,
      test_rmse=worst.test_rmse,
      architecture=worst.architecture,
      repetitions=len(self.repetitions),
    )

  def header(self) -> Dict[str, Any]:
    return {
      "method": self.method,
      "dataset": self.dataset,
      "trainer": self.trainer,
      "max_hidden": self.max_hidden,
      "config": self.config,
      "normalization": self.normalization,
      "test_targets": list(self.test_targets),
    }


def _denormalize(values: Sequence[float], normalization: Optional[Dict[str, Any]]) -> np.ndarray:
  if not normalization:
    return np.asarray(values, dtype=np.float64)
  return Normalization.from_dict(normalization).invert_targets(values)


def write_artifact(artifact: RunArtifact, directory: Union[str, Path]) -> Path:
  directory = Path(directory)
  directory.mkdir(parents=True, exist_ok=True)
  json_dump(artifact.header(), directory / "config.json")
  for rep in artifact.repetitions:
    json_dump(rep.to_dict(), directory / "repetitions" / f"rep-{rep.repetition}.json")
    (directory / f"convergence_rep{rep.repetition}.csv").write_text(
      csv_text(rep.trace_columns, rep.trace), encoding="utf-8")

  row = artifact.summary_row()
  (directory / "summary.csv").write_text(csv_text(SUMMARY_HEADERS, [row.cells()]), encoding="utf-8")
  (directory / "summary.txt").write_text(
    render_text_table(SUMMARY_HEADERS, [row.text_cells()]), encoding="utf-8")

  if artifact.method == HYBRID:
    json_dump({
      "best": {"repetition": artifact.best.repetition, "test_rmse": artifact.best.test_rmse,
               "genome": artifact.best.genome},
      "repetitions": [{"repetition": r.repetition, "test_rmse": r.test_rmse, "genome": r.genome}
                      for r in artifact.repetitions],
    }, directory / "best_genome.json")

  worst = artifact.worst
  desired_raw = _denormalize(artifact.test_targets, artifact.normalization)
  predicted_raw = _denormalize(worst.predictions, artifact.normalization)
  rows = [
    (i, desired, predicted, float(dr), float(pr))
    for i, (desired, predicted, dr, pr) in enumerate(
      zip(artifact.test_targets, worst.predictions, desired_raw, predicted_raw))
  ]
  (directory / "predictions.csv").write_text(
    csv_text(("index", "desired", "predicted", "desired_raw", "predicted_raw"), rows),
    encoding="utf-8")
  logger.info(f"✓ Wrote {artifact.name} to {directory}")
  return directory


def _rep_index(path: Path) -> int:
  suffix = path.stem[len("rep-"):]
  if not suffix.isdigit():
    raise ArtifactError(f"{path}: unexpected repetition file name")
  return int(suffix)


def read_artifact(directory: Union[str, Path]) -> RunArtifact:
  """Reload an artifact directory; ArtifactError when missing or corrupt"""
  directory = Path(directory)
  header_path = directory / "config.json"
  if not header_path.is_file():
    raise ArtifactError(f"{directory}: not a run artifact (config.json missing)")
  rep_paths = sorted((directory / "repetitions").glob("rep-*.json"), key=_rep_index)
  if not rep_paths:
    raise ArtifactError(f"{directory}: no repetition records")
  try:
    header = json_load(header_path)
    repetitions = [RepetitionResult.from_dict(json_load(p)) for p in rep_paths]
    return RunArtifact(
      method=header["method"],
      dataset=header["dataset"],
      trainer=header["trainer"],
      max_hidden=header.get("max_hidden"),
      config=header["config"],
      test_targets=[float(v) for v in header["test_targets"]],
      repetitions=repetitions,
      normalization=header.get("normalization"),
    )
  except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
    raise ArtifactError(f"{directory}: corrupt artifact ({type(e).__name__}: {e})") from e
