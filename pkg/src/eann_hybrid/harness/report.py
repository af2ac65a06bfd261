"""
Comparison table across run artifacts: one row per dataset x trainer
(x max hidden for hybrid runs), hybrid train/test RMSE and architecture
beside the conventional baseline's test RMSE. The lowest test RMSE of each
dataset is marked with a dagger.
"""

from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from eann_hybrid.errors import ArtifactError
from eann_hybrid.harness.artifacts import BASELINE, HYBRID, RunArtifact, read_artifact
from eann_hybrid.harness.tables import (
  csv_text, format_rmse, parse_float, parse_int, read_csv_rows, render_text_table)

MARK = "†"

REPORT_HEADERS = (
  "dataset", "trainer", "max_hidden", "hybrid_train_rmse", "hybrid_test_rmse",
  "hybrid_architecture", "baseline_test_rmse", "baseline_architecture", "best",
)

TEXT_HEADERS = (
  "Dataset", "Trainer", "Max hidden", "Train RMSE", "Test RMSE", "Architecture",
  "ANN test RMSE", "ANN architecture",
)


@dataclass(frozen=True)
class ReportRow:
  dataset: str
  trainer: str
  max_hidden: Optional[int] = None
  hybrid_train: Optional[float] = None
  hybrid_test: Optional[float] = None
  hybrid_architecture: str = ""
  baseline_test: Optional[float] = None
  baseline_architecture: str = ""
  best: str = ""   # "hybrid", "baseline" or ""

  def csv_cells(self) -> List:
    return [self.dataset, self.trainer, self.max_hidden, self.hybrid_train, self.hybrid_test,
            self.hybrid_architecture, self.baseline_test, self.baseline_architecture, self.best]

  def text_cells(self) -> List[str]:
    def marked(value: Optional[float], side: str) -> str:
      text = format_rmse(value)
      return MARK + text if self.best == side else text

    return [
      self.dataset,
      self.trainer,
      "-" if self.max_hidden is None else str(self.max_hidden),
      format_rmse(self.hybrid_train),
      marked(self.hybrid_test, HYBRID),
      self.hybrid_architecture or "-",
      marked(self.baseline_test, BASELINE),
      self.baseline_architecture or "-",
    ]


def _compared(artifact: RunArtifact) -> bool:
  return artifact.method in (HYBRID, BASELINE)


def _seed(artifact: RunArtifact):
  return artifact.config.get("seed")


def merge_artifacts(artifacts: Sequence[RunArtifact]) -> List[ReportRow]:
  """
  Hybrid summaries keyed by (dataset, trainer, max_hidden); baselines attach
  to every hybrid row of the same dataset and trainer. Single-network runs
  are not part of the comparison. Two artifacts for the same row raise
  ArtifactError.
  """
  seen: Dict[str, RunArtifact] = {}
  clashes = []
  for artifact in filter(_compared, artifacts):
    first = seen.setdefault(artifact.name, artifact)
    if first is not artifact:
      clashes.append(f"{artifact.name} (seeds {_seed(first)} and {_seed(artifact)})")
  if clashes:
    raise ArtifactError(
      f"more than one artifact for {', '.join(clashes)}; merge one run per dataset, trainer and size")

  rows: Dict[Tuple[str, str, Optional[int]], ReportRow] = {}
  baselines: Dict[Tuple[str, str], ReportRow] = {}
  for artifact in artifacts:
    summary = artifact.summary_row()
    if artifact.method == HYBRID:
      rows[(summary.dataset, summary.trainer, summary.max_hidden)] = ReportRow(
        dataset=summary.dataset,
        trainer=summary.trainer,
        max_hidden=summary.max_hidden,
        hybrid_train=summary.train_rmse,
        hybrid_test=summary.test_rmse,
        hybrid_architecture=summary.architecture,
      )
    elif artifact.method == BASELINE:
      baselines[(summary.dataset, summary.trainer)] = ReportRow(
        dataset=summary.dataset,
        trainer=summary.trainer,
        baseline_test=summary.test_rmse,
        baseline_architecture=summary.architecture,
      )

  for key, row in list(rows.items()):
    baseline = baselines.get((row.dataset, row.trainer))
    if baseline is not None:
      rows[key] = replace(row, baseline_test=baseline.baseline_test,
                          baseline_architecture=baseline.baseline_architecture)
  attached = {(row.dataset, row.trainer) for row in rows.values()}
  for (dataset, trainer), baseline in baselines.items():
    if (dataset, trainer) not in attached:
      rows[(dataset, trainer, None)] = baseline

  ordered = sorted(rows.values(), key=lambda r: (
    r.dataset, r.trainer, r.max_hidden is None, -(r.max_hidden or 0)))
  return mark_best(ordered)


def mark_best(rows: Sequence[ReportRow]) -> List[ReportRow]:
  """Mark every cell equal to the lowest test RMSE of its dataset"""
  lowest: Dict[str, float] = {}
  for row in rows:
    for value in (row.hybrid_test, row.baseline_test):
      if value is not None:
        lowest[row.dataset] = min(lowest.get(row.dataset, value), value)
  out = []
  for row in rows:
    best = ""
    if row.hybrid_test is not None and row.hybrid_test == lowest.get(row.dataset):
      best = HYBRID
    elif row.baseline_test is not None and row.baseline_test == lowest.get(row.dataset):
      best = BASELINE
    out.append(replace(row, best=best))
  return out


def render_report(rows: Sequence[ReportRow]) -> str:
  return render_text_table(TEXT_HEADERS, [row.text_cells() for row in rows])


def report_csv(rows: Sequence[ReportRow]) -> str:
  return csv_text(REPORT_HEADERS, [row.csv_cells() for row in rows])


def read_report_csv(path: Union[str, Path]) -> List[ReportRow]:
  rows = read_csv_rows(Path(path).read_text(encoding="utf-8"))
  if not rows or tuple(rows[0]) != REPORT_HEADERS:
    raise ArtifactError(f"{path}: not a merged report CSV")
  out = []
  for cells in rows[1:]:
    dataset, trainer, hidden, h_train, h_test, h_arch, b_test, b_arch, best = cells
    out.append(ReportRow(
      dataset=dataset,
      trainer=trainer,
      max_hidden=parse_int(hidden),
      hybrid_train=parse_float(h_train),
      hybrid_test=parse_float(h_test),
      hybrid_architecture=h_arch,
      baseline_test=parse_float(b_test),
      baseline_architecture=b_arch,
      best=best,
    ))
  return out


def collect_artifacts(directories: Sequence[Union[str, Path]]) -> Tuple[List[RunArtifact], List[str]]:
  """
  Load every directory that holds an artifact. A directory without
  config.json is searched one level down, so a whole output folder can be
  passed. A second artifact for the same comparison row is reported as an
  error and left out. Returns (artifacts, error messages).
  """
  artifacts: List[RunArtifact] = []
  errors: List[str] = []
  origins: Dict[str, Path] = {}
  for directory in directories:
    directory = Path(directory)
    candidates = [directory]
    if directory.is_dir() and not (directory / "config.json").exists():
      candidates = sorted(p for p in directory.iterdir() if (p / "config.json").exists()) or [directory]
    for candidate in candidates:
      try:
        artifact = read_artifact(candidate)
      except ArtifactError as e:
        errors.append(str(e))
        continue
      if _compared(artifact):
        first = origins.setdefault(artifact.name, candidate)
        if first != candidate:
          errors.append(f"{candidate}: duplicate of {first} ({artifact.name}), not merged")
          continue
      artifacts.append(artifact)
  return artifacts, errors
