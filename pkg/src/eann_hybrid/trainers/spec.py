from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple
import numpy as np

from eann_hybrid.errors import ConfigurationError


class TrainerKind(Enum):
  """Local search algorithm; declaration order is the 2-bit gene value"""
  BP = "BP"
  SCG = "SCG"
  QNA = "QNA"
  LM = "LM"

  @property
  def index(self) -> int:
    return list(TrainerKind).index(self)

  @classmethod
  def from_index(cls, index: int) -> "TrainerKind":
    return list(cls)[index % len(cls)]

  @classmethod
  def parse(cls, text: str) -> "TrainerKind":
    try:
      return cls(text.strip().upper())
    except ValueError:
      choices = ", ".join(k.value.lower() for k in cls)
      raise ConfigurationError(f"unknown trainer {text!r}; choose one of {choices}") from None


class Termination(Enum):
  BUDGET_EXHAUSTED = "budget_exhausted"
  CONVERGED = "converged"
  NUMERICAL_FAILURE = "numerical_failure"


@dataclass(frozen=True)
class ParameterRange:
  name: str
  low: float
  high: float
  default: float
  description: str

  def contains(self, value: float) -> bool:
    return self.low <= value <= self.high

  def from_fraction(self, fraction: float) -> float:
    # clipped: low + (high - low) * 1.0 can land one ulp above high
    return min(self.high, max(self.low, self.low + (self.high - self.low) * fraction))

  def to_fraction(self, value: float) -> float:
    return (value - self.low) / (self.high - self.low)


# Evolvable hyperparameters per trainer. Ranges quoted high-to-low
# ("0.25-0.05") are stored as closed intervals [low, high].
PARAMETER_RANGES: Dict[TrainerKind, Tuple[ParameterRange, ...]] = {
  TrainerKind.BP: (
    ParameterRange("learning_rate", 0.05, 0.25, 0.1, "learning rate"),
    ParameterRange("momentum", 0.05, 0.25, 0.1, "momentum"),
  ),
  TrainerKind.SCG: (
    ParameterRange("sigma", 0.0, 1e-4, 5e-5, "change in weight for second derivative approximation"),
    ParameterRange("lambda_init", 0.0, 1e-6, 5e-7, "regulating the indefiniteness of the Hessian"),
  ),
  TrainerKind.QNA: (
    ParameterRange("initial_step", 1e-6, 100.0, 1.0, "step lengths (line search initial step)"),
    ParameterRange("max_rel_step", 0.1, 0.6, 0.5, "limits on step sizes (relative parameter change)"),
    ParameterRange("armijo_c", 0.001, 0.003, 0.002, "scale factor to determine performance (sufficient decrease)"),
    ParameterRange("contraction", 0.1, 0.4, 0.25, "scale factor to determine step size (backtracking)"),
  ),
  TrainerKind.LM: (
    ParameterRange("mu_init", 0.001, 0.02, 0.01, "learning rate (initial damping)"),
  ),
}

MAX_PARAMETERS = max(len(ranges) for ranges in PARAMETER_RANGES.values())


@dataclass(frozen=True)
class TrainerSpec:
  """
  Trainer choice plus concrete hyperparameters.

  `params` follows the order of PARAMETER_RANGES[kind]. With strict=True
  (the default) every value must lie in its closed range; strict=False is
  for analytic checks that need values outside the evolvable ranges.
  """
  kind: TrainerKind
  params: Tuple[float, ...]
  strict: bool = field(default=True, compare=False)

  def __post_init__(self):
    object.__setattr__(self, "params", tuple(float(p) for p in self.params))
    ranges = PARAMETER_RANGES[self.kind]
    if len(self.params) != len(ranges):
      raise ConfigurationError(
        f"{self.kind.value} takes {len(ranges)} parameters "
        f"({', '.join(r.name for r in ranges)}), got {len(self.params)}")
    for value, rng in zip(self.params, ranges):
      if not np.isfinite(value):
        raise ConfigurationError(f"{self.kind.value} {rng.name} must be finite")
      if self.strict and not rng.contains(value):
        raise ConfigurationError(
          f"{self.kind.value} {rng.name}={value} outside [{rng.low}, {rng.high}]")

  @classmethod
  def create(cls, kind: TrainerKind, strict: bool = True, **values: float) -> "TrainerSpec":
    """Build from keyword values, filling the rest with documented defaults"""
    ranges = PARAMETER_RANGES[kind]
    unknown = set(values) - {r.name for r in ranges}
    if unknown:
      raise ConfigurationError(f"{kind.value} has no parameter(s) {sorted(unknown)}")
    return cls(kind, tuple(values.get(r.name, r.default) for r in ranges), strict=strict)

  @classmethod
  def default(cls, kind: TrainerKind) -> "TrainerSpec":
    return cls.create(kind)

  def value(self, name: str) -> float:
    for rng, value in zip(PARAMETER_RANGES[self.kind], self.params):
      if rng.name == name:
        return value
    raise KeyError(f"{self.kind.value} has no parameter {name!r}")

  def as_dict(self) -> Dict[str, float]:
    return {rng.name: value for rng, value in zip(PARAMETER_RANGES[self.kind], self.params)}

  def describe(self) -> str:
    values = ", ".join(f"{k}={v:.6g}" for k, v in self.as_dict().items())
    return f"{self.kind.value}({values})"

  def to_dict(self) -> Dict[str, Any]:
    return {"kind": self.kind.value, "params": self.as_dict()}

  @classmethod
  def from_dict(cls, data: Dict[str, Any]) -> "TrainerSpec":
    kind = TrainerKind(data["kind"])
    return cls.create(kind, **data.get("params", {}))


@dataclass(frozen=True, eq=False)
class TrainingResult:
  """Outcome of one local-search run"""
  final_params: np.ndarray
  epoch_rmse: List[float]
  epochs_used: int
  termination: Termination
  restarts: int = 0
  rejected_steps: int = 0

  def __post_init__(self):
    params = np.array(self.final_params, dtype=np.float64)
    params.setflags(write=False)
    object.__setattr__(self, "final_params", params)
    object.__setattr__(self, "epoch_rmse", [float(r) for r in self.epoch_rmse])

  @property
  def final_rmse(self) -> Optional[float]:
    return self.epoch_rmse[-1] if self.epoch_rmse else None

  def __eq__(self, other) -> bool:
    if not isinstance(other, TrainingResult):
      return NotImplemented
    return (np.array_equal(self.final_params, other.final_params)
            and self.epoch_rmse == other.epoch_rmse
            and self.epochs_used == other.epochs_used
            and self.termination is other.termination
            and self.restarts == other.restarts
            and self.rejected_steps == other.rejected_steps)

  __hash__ = None

  def to_dict(self) -> Dict[str, Any]:
    return {
      "final_params": self.final_params.tolist(),
      "epoch_rmse": list(self.epoch_rmse),
      "epochs_used": self.epochs_used,
      "termination": self.termination.value,
      "restarts": self.restarts,
      "rejected_steps": self.rejected_steps,
    }


def parameter_names(kind: TrainerKind) -> Sequence[str]:
  return [r.name for r in PARAMETER_RANGES[kind]]
