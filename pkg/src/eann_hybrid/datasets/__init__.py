from eann_hybrid.datasets.dataset import (
  Normalization,
  RawSeries,
  SupervisedDataset,
  denormalize,
  normalize,
)
from eann_hybrid.datasets.mackey_glass import (
  MACKEY_PATTERNS,
  MACKEY_SPLIT,
  embed_mackey,
  mackey_glass_generate,
)
from eann_hybrid.datasets.series import (
  GAS_FURNACE_PATTERNS,
  GAS_FURNACE_SPLIT,
  WASTEWATER_PATTERNS,
  WASTEWATER_SPLIT,
  build_gas_furnace,
  build_wastewater,
  embed_lags,
  load_gas_furnace,
  load_wastewater,
  moving_average,
  read_numeric_csv,
)
from eann_hybrid.datasets.surrogates import gas_furnace_surrogate, wastewater_surrogate
from eann_hybrid.datasets.storage import read_dataset, sidecar_path, write_dataset
from eann_hybrid.datasets.download import GAS_FURNACE_URL, cached_download, fetch_gas_furnace, file_sha256
from eann_hybrid.datasets.catalog import DATASET_NAMES, build_dataset, canonical_name

__all__ = [
  "Normalization",
  "RawSeries",
  "SupervisedDataset",
  "denormalize",
  "normalize",
  "MACKEY_PATTERNS",
  "MACKEY_SPLIT",
  "embed_mackey",
  "mackey_glass_generate",
  "GAS_FURNACE_PATTERNS",
  "GAS_FURNACE_SPLIT",
  "WASTEWATER_PATTERNS",
  "WASTEWATER_SPLIT",
  "build_gas_furnace",
  "build_wastewater",
  "embed_lags",
  "load_gas_furnace",
  "load_wastewater",
  "moving_average",
  "read_numeric_csv",
  "gas_furnace_surrogate",
  "wastewater_surrogate",
  "read_dataset",
  "sidecar_path",
  "write_dataset",
  "DATASET_NAMES",
  "build_dataset",
  "canonical_name",
  "GAS_FURNACE_URL",
  "cached_download",
  "fetch_gas_furnace",
  "file_sha256",
]
