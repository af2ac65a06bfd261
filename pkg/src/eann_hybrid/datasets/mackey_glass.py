"""
Mackey-Glass delay differential equation

  dx/dt = beta * x(t - tau) / (1 + x(t - tau)^n) - gamma * x(t)

integrated with classic RK4 on a fine grid of step dt. The delayed term is
read from the stored trajectory: full-step stages hit grid points exactly
(tau/dt is an integer), the half-step stages interpolate linearly between
neighbouring grid points. Values before t = 0 come from `history`, including
the half step whose delayed time still lies before t = 0.
"""

from typing import Optional
import numpy as np

from eann_hybrid.datasets.dataset import RawSeries, SupervisedDataset
from eann_hybrid.datasets.series import embed_lags
from eann_hybrid.errors import ConfigurationError, DatasetError

MACKEY_LAGS = (-18, -12, -6, 0)
MACKEY_HORIZON = 6
MACKEY_PATTERNS = 1000
MACKEY_SPLIT = 500
# t runs from 18 to 1017 and the target reaches t + 6 = 1023
MACKEY_MIN_SAMPLES = -MACKEY_LAGS[0] + MACKEY_PATTERNS - 1 + MACKEY_HORIZON + 1


def _integer_ratio(numerator: float, denominator: float) -> Optional[int]:
  ratio = numerator / denominator
  nearest = round(ratio)
  if nearest < 1 or abs(ratio - nearest) > 1e-9 * max(1.0, ratio):
    return None
  return int(nearest)


def mackey_glass_generate(
    n_samples: int = MACKEY_MIN_SAMPLES,
    dt: float = 0.1,
    tau: float = 17.0,
    x0: float = 1.2,
    history: float = 0.0,
    beta: float = 0.2,
    gamma: float = 0.1,
    exponent: float = 10.0) -> RawSeries:
  """
  Integrate the equation from t = 0 and return x at t = 0, 1, ..., n_samples - 1.

  Raises ConfigurationError when tau/dt or 1/dt is not a positive integer.
  """
  if n_samples < 1:
    raise ConfigurationError(f"n_samples must be >= 1, got {n_samples}")
  if not (dt > 0 and tau > 0):
    raise ConfigurationError(f"dt and tau must be positive (dt={dt}, tau={tau})")
  lag = _integer_ratio(tau, dt)
  if lag is None:
    raise ConfigurationError(
      f"tau/dt = {tau}/{dt} = {tau / dt:.6g} is not an integer; the delay buffer "
      f"needs the delay to fall on a grid point (try dt = 0.1 or 0.05 with tau = 17)")
  per_unit = _integer_ratio(1.0, dt)
  if per_unit is None:
    raise ConfigurationError(
      f"1/dt = {1.0 / dt:.6g} is not an integer; samples are taken at unit time")

  def rate(x: float, delayed: float) -> float:
    return beta * delayed / (1.0 + delayed ** exponent) - gamma * x

  steps = (n_samples - 1) * per_unit
  x = np.empty(steps + 1)
  x[0] = x0
  half = 0.5 * dt

  for n in range(steps):
    back = n - lag
    d0 = history if back < 0 else x[back]
    d1 = history if back + 1 < 0 else x[back + 1]
    dh = history if back < 0 else 0.5 * (d0 + d1)
    xn = x[n]
    k1 = rate(xn, d0)
    k2 = rate(xn + half * k1, dh)
    k3 = rate(xn + half * k2, dh)
    k4 = rate(xn + dt * k3, d1)
    x[n + 1] = xn + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

  return RawSeries(x[::per_unit], sample_interval=1.0, name="mackey-glass", columns=("x",))


def embed_mackey(
    series: RawSeries,
    n_patterns: int = MACKEY_PATTERNS,
    split_index: int = MACKEY_SPLIT) -> SupervisedDataset:
  """
  Inputs x(t-18), x(t-12), x(t-6), x(t) with target x(t+6), for
  t = 18, 19, ... (n_patterns consecutive steps).
  """
  values = series.column(0)
  start = -MACKEY_LAGS[0]
  needed = start + n_patterns + MACKEY_HORIZON
  if len(values) < needed:
    raise DatasetError(
      f"{series.name}: {n_patterns} patterns need {needed} samples, series has {len(values)}")
  inputs, targets = embed_lags(values, MACKEY_LAGS, MACKEY_HORIZON, start, n_patterns)
  return SupervisedDataset(
    name=series.name,
    inputs=inputs,
    targets=targets,
    split_index=split_index,
    input_names=("x(t-18)", "x(t-12)", "x(t-6)", "x(t)"),
    target_name="x(t+6)",
    embedding="[x(t-18), x(t-12), x(t-6), x(t)] -> x(t+6)",
    provenance="generated: Mackey-Glass RK4",
  )
