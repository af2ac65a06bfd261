"""
Cached download of public benchmark files, verified by SHA-256.

A file is fetched once into the cache directory. Its digest is checked
against a pinned value when one is configured, otherwise against the digest
recorded beside the file (<name>.sha256) when it was first downloaded.
"""

import hashlib
from pathlib import Path
from typing import Optional, Union
import requests

from eann_hybrid.errors import DatasetError
from eann_hybrid.utils.logger import logger

GAS_FURNACE_URL = "https://openmv.net/file/gas-furnace.csv"
DEFAULT_CACHE_DIR = "data/cache"
REQUEST_TIMEOUT_SECONDS = 30


def file_sha256(path: Union[str, Path]) -> str:
  return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _record_path(target: Path) -> Path:
  return target.with_name(target.name + ".sha256")


def cached_download(
    url: str,
    cache_dir: Union[str, Path] = DEFAULT_CACHE_DIR,
    filename: Optional[str] = None,
    sha256: Optional[str] = None,
    force: bool = False) -> Path:
  """Path of the verified local copy of `url`, downloading it when missing"""
  target = Path(cache_dir) / (filename or url.rstrip("/").split("/")[-1])
  record = _record_path(target)
  pinned = sha256.strip().lower() if sha256 else None

  if target.is_file() and not force:
    expected = pinned or (record.read_text(encoding="utf-8").strip() if record.is_file() else None)
    if expected is None:
      raise DatasetError(f"{target}: no recorded checksum; delete the file to download it again")
    digest = file_sha256(target)
    if digest != expected:
      logger.error(f"✗ {target}: checksum mismatch")
      raise DatasetError(f"{target}: checksum mismatch (expected {expected}, found {digest})")
    logger.debug(f"Using cached {target}")
    return target

  logger.info(f"Downloading {url}")
  try:
    response = requests.get(url, timeout=REQUEST_TIMEOUT_SECONDS)
    response.raise_for_status()
  except requests.RequestException as e:
    logger.error(f"✗ Download failed: {url}: {e}")
    raise DatasetError(
      f"cannot download {url}: {e}; supply the file with --dataset-path "
      f"or set datasets.gas_furnace_path") from e

  content = response.content
  digest = hashlib.sha256(content).hexdigest()
  if pinned and digest != pinned:
    logger.error(f"✗ {url}: checksum mismatch")
    raise DatasetError(f"{url}: downloaded checksum {digest} does not match the pinned {pinned}")
  try:
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_bytes(content)
    record.write_text(digest + "\n", encoding="utf-8")
  except OSError as e:
    logger.error(f"✗ Cannot cache {url} in {target}: {e}")
    raise
  logger.info(f"✓ Cached {target} (sha256 {digest})")
  return target


def fetch_gas_furnace(
    cache_dir: Union[str, Path] = DEFAULT_CACHE_DIR,
    url: str = GAS_FURNACE_URL,
    sha256: Optional[str] = None,
    force: bool = False) -> Path:
  return cached_download(url, cache_dir, filename="gas-furnace.csv", sha256=sha256, force=force)
