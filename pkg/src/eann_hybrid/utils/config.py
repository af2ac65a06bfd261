import os
import yaml
from pathlib import Path
from dotenv import load_dotenv

# Automatically load when module is imported
load_dotenv('.env')
_DEFAULT_CONFIG_PATH = Path(__file__).parent.parent.parent.parent / 'config' / 'config.yaml'
CONFIG_PATH = Path(os.environ.get('EANN_CONFIG', _DEFAULT_CONFIG_PATH))

# Installed without the repository config: run on built-in defaults
CONFIG = {}
if CONFIG_PATH.exists():
  with open(CONFIG_PATH, 'r', encoding='utf-8') as f:
    CONFIG = yaml.safe_load(f) or {}


def section(name: str) -> dict:
  """Return one top-level config section (empty dict when absent)"""
  return dict(CONFIG.get(name) or {})
