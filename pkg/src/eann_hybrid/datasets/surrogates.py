"""
Synthetic stand-ins for the two file-backed series.

They are NOT the benchmark data: they only have the right shape and a
plausible dynamic so the whole pipeline can run without the real files.
Every dataset built from them carries a "synthetic" provenance.
"""

import numpy as np

from eann_hybrid.datasets.dataset import RawSeries
from eann_hybrid.errors import ConfigurationError

SURROGATE_NOTE = "synthetic surrogate, not benchmark data"

_WARMUP = 50


def gas_furnace_surrogate(n_observations: int = 296, seed: int = 0) -> RawSeries:
  """
  Second-order ARX process driven by a slowly varying feed rate u with a
  three-sample transport delay; y sits around 53.5 like a CO2 percentage.
  """
  if n_observations < 2:
    raise ConfigurationError(f"n_observations must be >= 2, got {n_observations}")
  rng = np.random.default_rng(seed)
  total = n_observations + _WARMUP
  u = np.zeros(total)
  d = np.zeros(total)
  for t in range(1, total):
    u[t] = 0.9 * u[t - 1] + 0.45 * rng.standard_normal()
  for t in range(3, total):
    d[t] = 1.4 * d[t - 1] - 0.5 * d[t - 2] - 0.6 * u[t - 3] + 0.05 * rng.standard_normal()
  values = np.column_stack([u, 53.5 + d])[_WARMUP:]
  return RawSeries(values, sample_interval=9.0, name="gas-furnace-surrogate", columns=("u", "y"))


def wastewater_surrogate(n_hours: int = 500, seed: int = 0) -> RawSeries:
  """Hourly flow with daily and weekly cycles plus AR(1) noise"""
  if n_hours < 2:
    raise ConfigurationError(f"n_hours must be >= 2, got {n_hours}")
  rng = np.random.default_rng(seed)
  t = np.arange(n_hours + _WARMUP)
  noise = np.zeros(t.size)
  for i in range(1, t.size):
    noise[i] = 0.7 * noise[i - 1] + 0.04 * rng.standard_normal()
  daily = 0.35 * np.sin(2.0 * np.pi * (t - 7) / 24.0)
  weekly = 0.1 * np.sin(2.0 * np.pi * t / 168.0)
  flow = np.maximum(1.0 + daily + weekly + noise, 0.05)[_WARMUP:]
  return RawSeries(flow, sample_interval=1.0, name="wastewater-surrogate", columns=("f",))
