from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, Optional, Union

from eann_hybrid.datasets.dataset import SupervisedDataset
from eann_hybrid.datasets.download import DEFAULT_CACHE_DIR, GAS_FURNACE_URL, fetch_gas_furnace
from eann_hybrid.datasets.mackey_glass import embed_mackey, mackey_glass_generate
from eann_hybrid.datasets.series import (
  build_gas_furnace, build_wastewater, load_gas_furnace, load_wastewater)
from eann_hybrid.datasets.storage import read_dataset
from eann_hybrid.datasets.surrogates import (
  SURROGATE_NOTE, gas_furnace_surrogate, wastewater_surrogate)
from eann_hybrid.errors import ConfigurationError
from eann_hybrid.utils.config import section

DATASET_NAMES = (
  "mackey-glass",
  "gas-furnace",
  "wastewater",
  "gas-furnace-surrogate",
  "wastewater-surrogate",
  "file",
)

_ALIASES = {
  "mackey": "mackey-glass",
  "mg": "mackey-glass",
  "gas": "gas-furnace",
  "box-jenkins": "gas-furnace",
}

# Keyword arguments accepted by the Mackey-Glass generator
MACKEY_OPTIONS = ("dt", "tau", "x0", "history", "beta", "gamma", "exponent")


def canonical_name(name: str) -> str:
  key = name.strip().lower().replace("_", "-")
  key = _ALIASES.get(key, key)
  if key not in DATASET_NAMES:
    raise ConfigurationError(f"unknown dataset {name!r}; choose one of {', '.join(DATASET_NAMES)}")
  return key


def build_dataset(
    name: str,
    path: Optional[Union[str, Path]] = None,
    seed: int = 0,
    mackey: Optional[Dict[str, Any]] = None) -> SupervisedDataset:
  """
  Build one benchmark dataset, un-normalized.

  `path` is required for wastewater and for "file" (a CSV written by
  write_dataset). Without a path the gas furnace series is fetched into the
  download cache (datasets section of config.yaml). `seed` only drives the
  surrogates.
  """
  key = canonical_name(name)
  if key == "mackey-glass":
    options = dict(mackey or {})
    unknown = set(options) - set(MACKEY_OPTIONS)
    if unknown:
      raise ConfigurationError(f"unknown Mackey-Glass option(s): {sorted(unknown)}")
    dataset = embed_mackey(mackey_glass_generate(**options))
    return _with_extra(dataset, {"generator": options})
  if key == "gas-furnace-surrogate":
    dataset = build_gas_furnace(gas_furnace_surrogate(seed=seed))
    return _with_extra(dataset, {"seed": seed}, provenance=SURROGATE_NOTE)
  if key == "wastewater-surrogate":
    dataset = build_wastewater(wastewater_surrogate(seed=seed), provenance=SURROGATE_NOTE)
    return _with_extra(dataset, {"seed": seed})
  if key == "gas-furnace":
    return load_gas_furnace(path if path is not None else _fetch_gas_furnace())
  if path is None:
    raise ConfigurationError(f"dataset {key!r} needs a file path")
  if key == "wastewater":
    return load_wastewater(path)
  return read_dataset(path)


def _with_extra(
    dataset: SupervisedDataset,
    extra: Dict[str, Any],
    provenance: Optional[str] = None) -> SupervisedDataset:
  merged = dict(dataset.extra)
  merged.update(extra)
  return replace(dataset, extra=merged, provenance=provenance or dataset.provenance)


def _fetch_gas_furnace():
  settings = section("datasets")
  return fetch_gas_furnace(
    cache_dir=settings.get("cache_dir") or DEFAULT_CACHE_DIR,
    url=settings.get("gas_furnace_url") or GAS_FURNACE_URL,
    sha256=settings.get("gas_furnace_sha256"),
  )
