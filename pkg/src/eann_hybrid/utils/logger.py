import logging
import sys
from pathlib import Path
from typing import Optional

from eann_hybrid.errors import ConfigurationError

LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def setup_logger(
  name: str = "eann_hybrid",
  log_file: Optional[str] = "logs/eann.log",
  level: str = "INFO"
) -> logging.Logger:
  """
  Console (stdout) plus optional file logging for the package logger

  Args:
    name: Logger name
    log_file: Path to log file; None or "" keeps console output only
    level: One of DEBUG, INFO, WARNING, ERROR
  """
  level_name = str(level).strip().upper()
  if level_name not in LEVELS:
    raise ConfigurationError(f"unknown log level {level!r}; choose one of {', '.join(LEVELS)}")

  logger = logging.getLogger(name)
  logger.setLevel(level_name)
  logger.handlers.clear()

  console_handler = logging.StreamHandler(sys.stdout)
  console_handler.setFormatter(logging.Formatter(
    "%(asctime)s - %(levelname)s - %(message)s",
    datefmt="%H:%M:%S"
  ))
  logger.addHandler(console_handler)

  if log_file:
    log_path = Path(log_file)
    log_path.parent.mkdir(parents=True, exist_ok=True)
    file_handler = logging.FileHandler(log_path, encoding='utf-8')
    file_handler.setFormatter(logging.Formatter(
      "%(asctime)s - %(levelname)s - %(filename)s:%(lineno)d - %(message)s",
      datefmt="%Y-%m-%d %H:%M:%S"
    ))
    logger.addHandler(file_handler)
    logger.debug(f"Logging to {log_path}")

  return logger

# Package-wide logger; library modules log through it and never add handlers
logger = logging.getLogger("eann_hybrid")
