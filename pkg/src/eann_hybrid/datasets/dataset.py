from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional, Tuple
import numpy as np

from eann_hybrid.errors import DatasetError
from eann_hybrid.network.phenotype import EvaluationBatch


def _readonly(array) -> np.ndarray:
  out = np.array(array, dtype=np.float64)
  out.setflags(write=False)
  return out


@dataclass(frozen=True, eq=False)
class RawSeries:
  """Time-ordered samples, one column per observed variable"""
  values: np.ndarray
  sample_interval: float = 1.0
  name: str = "series"
  columns: Tuple[str, ...] = ("x",)

  def __post_init__(self):
    values = _readonly(self.values)
    if values.ndim not in (1, 2) or values.shape[0] == 0:
      raise DatasetError(f"{self.name}: series must be a non-empty vector or matrix")
    if not np.all(np.isfinite(values)):
      bad = np.argwhere(~np.isfinite(values.reshape(values.shape[0], -1)))[:, 0]
      raise DatasetError(f"{self.name}: non-finite values", [f"sample {i}" for i in bad[:20]])
    object.__setattr__(self, "values", values)
    object.__setattr__(self, "columns", tuple(self.columns))

  def __len__(self) -> int:
    return self.values.shape[0]

  def column(self, index: int = 0) -> np.ndarray:
    return self.values if self.values.ndim == 1 else self.values[:, index]


@dataclass(frozen=True, eq=False)
class Normalization:
  """Per-column (min, max) of the training portion; target is the last column"""
  minimums: np.ndarray
  maximums: np.ndarray

  def __post_init__(self):
    object.__setattr__(self, "minimums", _readonly(self.minimums))
    object.__setattr__(self, "maximums", _readonly(self.maximums))

  @property
  def spans(self) -> np.ndarray:
    return self.maximums - self.minimums

  def apply(self, columns: np.ndarray) -> np.ndarray:
    return (columns - self.minimums) / self.spans

  def invert(self, columns: np.ndarray) -> np.ndarray:
    return columns * self.spans + self.minimums

  def invert_targets(self, values) -> np.ndarray:
    return np.asarray(values, dtype=np.float64) * self.spans[-1] + self.minimums[-1]

  def to_dict(self) -> Dict[str, Any]:
    return {"minimums": self.minimums.tolist(), "maximums": self.maximums.tolist()}

  @classmethod
  def from_dict(cls, data: Dict[str, Any]) -> "Normalization":
    return cls(np.array(data["minimums"]), np.array(data["maximums"]))


@dataclass(frozen=True, eq=False)
class SupervisedDataset:
  """
  Input/target patterns in time order. The first split_index patterns are
  the training portion, the rest the test portion.
  """
  name: str
  inputs: np.ndarray
  targets: np.ndarray
  split_index: int
  normalization: Optional[Normalization] = None
  input_names: Tuple[str, ...] = ()
  target_name: str = "target"
  embedding: str = ""
  provenance: str = ""
  extra: Dict[str, Any] = field(default_factory=dict)

  def __post_init__(self):
    inputs = _readonly(self.inputs)
    targets = _readonly(self.targets).reshape(-1)
    if inputs.ndim != 2:
      raise DatasetError(f"{self.name}: inputs must be a P x d matrix, got shape {inputs.shape}")
    if inputs.shape[0] != targets.shape[0]:
      raise DatasetError(f"{self.name}: {inputs.shape[0]} input rows but {targets.shape[0]} targets")
    p = inputs.shape[0]
    if not 1 <= self.split_index <= p - 1:
      raise DatasetError(f"{self.name}: split_index {self.split_index} outside [1, {p - 1}]")
    if not (np.all(np.isfinite(inputs)) and np.all(np.isfinite(targets))):
      raise DatasetError(f"{self.name}: patterns contain NaN or infinite values")
    names = tuple(self.input_names) or tuple(f"x{i}" for i in range(inputs.shape[1]))
    if len(names) != inputs.shape[1]:
      raise DatasetError(f"{self.name}: {len(names)} input names for {inputs.shape[1]} columns")
    targets.setflags(write=False)
    object.__setattr__(self, "inputs", inputs)
    object.__setattr__(self, "targets", targets)
    object.__setattr__(self, "input_names", names)
    object.__setattr__(self, "split_index", int(self.split_index))

  @property
  def n_patterns(self) -> int:
    return self.inputs.shape[0]

  @property
  def n_inputs(self) -> int:
    return self.inputs.shape[1]

  @property
  def columns(self) -> np.ndarray:
    """P x (d + 1) matrix: inputs then target"""
    return np.hstack([self.inputs, self.targets[:, None]])

  def train_batch(self) -> EvaluationBatch:
    return EvaluationBatch(self.inputs[:self.split_index], self.targets[:self.split_index])

  def test_batch(self) -> EvaluationBatch:
    return EvaluationBatch(self.inputs[self.split_index:], self.targets[self.split_index:])

  def denormalize_targets(self, values) -> np.ndarray:
    """Map target-scale values (e.g. predictions) back to raw units"""
    if self.normalization is None:
      return np.asarray(values, dtype=np.float64)
    return self.normalization.invert_targets(values)

  def describe(self) -> Dict[str, Any]:
    return {
      "name": self.name,
      "provenance": self.provenance,
      "embedding": self.embedding,
      "n_patterns": self.n_patterns,
      "n_inputs": self.n_inputs,
      "split_index": self.split_index,
      "input_names": list(self.input_names),
      "target_name": self.target_name,
      "normalization": self.normalization.to_dict() if self.normalization else None,
      "extra": dict(self.extra),
    }


def denormalize(dataset: SupervisedDataset) -> SupervisedDataset:
  """Undo normalize(); datasets without a record are returned unchanged"""
  if dataset.normalization is None:
    return dataset
  raw = dataset.normalization.invert(dataset.columns)
  return replace(dataset, inputs=raw[:, :-1], targets=raw[:, -1], normalization=None)


def normalize(dataset: SupervisedDataset) -> SupervisedDataset:
  """
  Map every column linearly to [0, 1] using min/max of the training portion.

  The same map is applied to the test portion, so test values may fall
  outside [0, 1]. Raises DatasetError naming the first constant column.
  """
  raw = denormalize(dataset)
  columns = raw.columns
  train = columns[:raw.split_index]
  minimums = train.min(axis=0)
  maximums = train.max(axis=0)
  degenerate = np.flatnonzero(maximums <= minimums)
  if degenerate.size:
    index = int(degenerate[0])
    label = raw.input_names[index] if index < raw.n_inputs else raw.target_name
    raise DatasetError(
      f"{raw.name}: column {index} ({label}) is constant on the training portion; cannot normalize")
  record = Normalization(minimums, maximums)
  scaled = record.apply(columns)
  return replace(raw, inputs=scaled[:, :-1], targets=scaled[:, -1], normalization=record)
