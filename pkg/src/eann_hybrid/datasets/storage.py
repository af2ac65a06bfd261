"""
Dataset export: one CSV (header + inputs + target, shortest round-trip float
formatting) and a JSON sidecar with the embedding, split, normalization and
the SHA-256 of the CSV bytes.
"""

import csv
import hashlib
import io
from pathlib import Path
from typing import Tuple, Union

from eann_hybrid.datasets.dataset import Normalization, SupervisedDataset
from eann_hybrid.datasets.series import read_numeric_csv
from eann_hybrid.errors import DatasetError
from eann_hybrid.utils.files import json_dump, json_load
from eann_hybrid.utils.logger import logger

SIDECAR_FORMAT = "eann-dataset/1"


def sidecar_path(csv_path: Union[str, Path]) -> Path:
  return Path(csv_path).with_suffix(".json")


def _csv_bytes(dataset: SupervisedDataset) -> bytes:
  buffer = io.StringIO()
  writer = csv.writer(buffer, lineterminator="\n")
  writer.writerow(list(dataset.input_names) + [dataset.target_name])
  for row in dataset.columns:
    writer.writerow([repr(float(v)) for v in row])
  return buffer.getvalue().encode("utf-8")


def write_dataset(dataset: SupervisedDataset, csv_path: Union[str, Path]) -> Tuple[Path, Path]:
  """Write the CSV and its sidecar; identical datasets produce identical bytes"""
  csv_path = Path(csv_path)
  content = _csv_bytes(dataset)
  try:
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    csv_path.write_bytes(content)
  except OSError as e:
    logger.error(f"✗ Cannot write dataset {csv_path}: {e}")
    raise
  sidecar = dict(dataset.describe())
  sidecar["format"] = SIDECAR_FORMAT
  sidecar["csv_file"] = csv_path.name
  sidecar["sha256"] = hashlib.sha256(content).hexdigest()
  meta_path = json_dump(sidecar, sidecar_path(csv_path))
  logger.info(f"✓ Wrote {dataset.n_patterns} patterns to {csv_path} (split {dataset.split_index})")
  return csv_path, meta_path


def read_dataset(csv_path: Union[str, Path]) -> SupervisedDataset:
  """Reload a dataset written by write_dataset, verifying the checksum"""
  csv_path = Path(csv_path)
  meta_path = sidecar_path(csv_path)
  if not meta_path.is_file():
    raise DatasetError(f"{csv_path}: sidecar {meta_path.name} not found")
  if not csv_path.is_file():
    raise DatasetError(f"data file not found: {csv_path}")
  meta = json_load(meta_path)
  if meta.get("format") != SIDECAR_FORMAT:
    raise DatasetError(f"{meta_path}: unknown sidecar format {meta.get('format')!r}")
  digest = hashlib.sha256(csv_path.read_bytes()).hexdigest()
  if digest != meta.get("sha256"):
    raise DatasetError(f"{csv_path}: checksum mismatch with {meta_path.name}")
  n_inputs = int(meta["n_inputs"])
  columns = read_numeric_csv(csv_path, n_inputs + 1)
  normalization = meta.get("normalization")
  return SupervisedDataset(
    name=meta["name"],
    inputs=columns[:, :n_inputs],
    targets=columns[:, n_inputs],
    split_index=int(meta["split_index"]),
    normalization=Normalization.from_dict(normalization) if normalization else None,
    input_names=tuple(meta.get("input_names") or ()),
    target_name=meta.get("target_name", "target"),
    embedding=meta.get("embedding", ""),
    provenance=meta.get("provenance", ""),
    extra=dict(meta.get("extra") or {}),
  )
