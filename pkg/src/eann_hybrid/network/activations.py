"""
Node transfer functions for hidden neurons.

The five tags follow the usual neuro-computing names; the concrete formulas
are a fixed convention of this package:

  T   tanh(x)                     range (-1, 1)
  L   1 / (1 + exp(-x))           range (0, 1)
  S   2 / (1 + exp(-x)) - 1       range (-1, 1)   bipolar sigmoid
  T*  1.7159 * tanh(2x / 3)       range (-1.7159, 1.7159)
  L*  1 / (1 + exp(-2x))          range (0, 1)    steepened logistic
"""

from enum import Enum
from typing import Sequence, Tuple, Union
import numpy as np
from scipy.special import expit

TANH_SCALE = 1.7159
TANH_SLOPE = 2.0 / 3.0


class ActivationKind(Enum):
  """Hidden-neuron transfer function tag (value is the architecture-string spelling)"""
  T = "T"
  L = "L"
  S = "S"
  TSTAR = "T*"
  LSTAR = "L*"

  @property
  def index(self) -> int:
    return ACTIVATION_ORDER.index(self)

  @classmethod
  def from_index(cls, index: int) -> "ActivationKind":
    return ACTIVATION_ORDER[index % len(ACTIVATION_ORDER)]

  @classmethod
  def from_tag(cls, tag: str) -> "ActivationKind":
    """Parse a tag, accepting "TS"/"LS" as spellings of T*/L*"""
    normalized = _TAG_ALIASES.get(tag.strip().upper(), tag.strip().upper())
    for kind in cls:
      if kind.value == normalized:
        return kind
    raise ValueError(f"Unknown activation tag: {tag!r}")

  @property
  def bounds(self) -> Tuple[float, float]:
    return _BOUNDS[self]

  def __str__(self) -> str:
    return self.value


# Gene order: a 3-bit activation gene selects ACTIVATION_ORDER[value % 5]
ACTIVATION_ORDER = (
  ActivationKind.T,
  ActivationKind.L,
  ActivationKind.S,
  ActivationKind.TSTAR,
  ActivationKind.LSTAR,
)

_TAG_ALIASES = {"TS": "T*", "LS": "L*"}

_BOUNDS = {
  ActivationKind.T: (-1.0, 1.0),
  ActivationKind.L: (0.0, 1.0),
  ActivationKind.S: (-1.0, 1.0),
  ActivationKind.TSTAR: (-TANH_SCALE, TANH_SCALE),
  ActivationKind.LSTAR: (0.0, 1.0),
}


def _values_and_derivatives(kind: ActivationKind, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
  if kind is ActivationKind.T:
    y = np.tanh(x)
    return y, 1.0 - y * y
  if kind is ActivationKind.L:
    y = expit(x)
    return y, y * (1.0 - y)
  if kind is ActivationKind.S:
    s = expit(x)
    return 2.0 * s - 1.0, 2.0 * s * (1.0 - s)
  if kind is ActivationKind.TSTAR:
    t = np.tanh(TANH_SLOPE * x)
    return TANH_SCALE * t, TANH_SCALE * TANH_SLOPE * (1.0 - t * t)
  s = expit(2.0 * x)
  return s, 2.0 * s * (1.0 - s)


def activate(kind: ActivationKind, x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
  """Apply one transfer function (scalar in, scalar out)"""
  y, _ = _values_and_derivatives(kind, np.asarray(x, dtype=np.float64))
  return float(y) if np.ndim(y) == 0 else y


def derivative(kind: ActivationKind, x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
  """Exact derivative of the transfer function"""
  _, dy = _values_and_derivatives(kind, np.asarray(x, dtype=np.float64))
  return float(dy) if np.ndim(dy) == 0 else dy


def activate_columns(
    kinds: Sequence[ActivationKind],
    z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
  """
  Apply per-column transfer functions to a P x h pre-activation matrix.

  Returns (values, derivatives), both P x h.
  """
  values = np.empty_like(z)
  derivs = np.empty_like(z)
  codes = np.array([kind.index for kind in kinds])
  for kind in ACTIVATION_ORDER:
    mask = codes == kind.index
    if mask.any():
      values[:, mask], derivs[:, mask] = _values_and_derivatives(kind, z[:, mask])
  return values, derivs
