import json
import yaml
from pathlib import Path
from typing import Any, Union
from eann_hybrid.utils.logger import logger

PathLike = Union[str, Path]


def json_dump(what: Any, where: PathLike) -> Path:
  """Save data to a JSON file (sorted keys, stable bytes for identical data)"""
  where = Path(where)
  try:
    where.parent.mkdir(parents=True, exist_ok=True)
    with open(where, "w", encoding="utf-8") as f:
      json.dump(what, f, indent=2, sort_keys=True, ensure_ascii=False)
      f.write("\n")
    logger.debug(f"Saved {where}")
  except (IOError, OSError) as e:
    logger.error(f"File {where} write failed: {str(e)}")
    raise
  return where


def json_load(where: PathLike) -> Any:
  """Load data from a JSON file"""
  try:
    with open(where, "r", encoding="utf-8") as f:
      loaded_data = json.load(f)
    logger.debug(f"Loaded {where}")
    return loaded_data
  except (IOError, OSError) as e:
    logger.error(f"File {where} read failed: {str(e)}")
    raise


def yaml_load(where: PathLike) -> Any:
  """Load data from a YAML file (empty file loads as an empty dict)"""
  try:
    with open(where, "r", encoding="utf-8") as f:
      loaded_data = yaml.safe_load(f)
    logger.debug(f"Loaded {where}")
    return loaded_data if loaded_data is not None else {}
  except (IOError, OSError) as e:
    logger.error(f"File {where} read failed: {str(e)}")
    raise
