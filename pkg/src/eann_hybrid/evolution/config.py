import math
from dataclasses import asdict, dataclass, fields
from enum import Enum
from typing import Any, Dict, Optional

from eann_hybrid.errors import ConfigurationError
from eann_hybrid.evolution.genome import MAX_HIDDEN_LIMIT, WEIGHT_LIMIT
from eann_hybrid.trainers.spec import TrainerKind


class FitnessSplit(Enum):
  TEST = "test"
  HOLDOUT = "holdout"


EVOLVED = "evolved"


@dataclass(frozen=True)
class EvolutionConfig:
  """
  Parameters of one evolutionary run. Defaults are the reference settings:
  population 40, 40 generations, 500 training epochs per evaluation, 5%
  elitism, top-half rank selection, mutation rate 0.40, weights
  initialized in +/-0.3.

  fixed_trainer pins every individual to one trainer kind; None lets the
  trainer gene evolve.
  """
  population_size: int = 40
  max_generations: int = 40
  max_hidden: int = 16
  epochs_per_eval: int = 500
  elitism_fraction: float = 0.05
  selection_fraction: float = 0.50
  mutation_rate: float = 0.40
  fitness_split: FitnessSplit = FitnessSplit.TEST
  fixed_trainer: Optional[TrainerKind] = None
  target_rmse: Optional[float] = None
  seed: int = 0
  lamarckian: bool = True
  workers: int = 1
  init_range: float = 0.3
  holdout_fraction: float = 0.2

  def __post_init__(self):
    if isinstance(self.fitness_split, str):
      object.__setattr__(self, "fitness_split", FitnessSplit(self.fitness_split))
    if isinstance(self.fixed_trainer, str):
      object.__setattr__(self, "fixed_trainer", TrainerKind.parse(self.fixed_trainer))

    problems = []
    if self.population_size < 2:
      problems.append(f"population_size must be >= 2 (got {self.population_size})")
    if self.max_generations < 1:
      problems.append(f"max_generations must be >= 1 (got {self.max_generations})")
    if not 1 <= self.max_hidden <= MAX_HIDDEN_LIMIT:
      problems.append(f"max_hidden must be in [1, {MAX_HIDDEN_LIMIT}] (got {self.max_hidden})")
    if self.epochs_per_eval < 0:
      problems.append(f"epochs_per_eval must be >= 0 (got {self.epochs_per_eval})")
    for name in ("elitism_fraction", "selection_fraction", "holdout_fraction"):
      value = getattr(self, name)
      if not 0.0 < value <= 1.0:
        problems.append(f"{name} must be in (0, 1] (got {value})")
    if not 0.0 <= self.mutation_rate <= 1.0:
      problems.append(f"mutation_rate must be in [0, 1] (got {self.mutation_rate})")
    if self.target_rmse is not None and not self.target_rmse >= 0.0:
      problems.append(f"target_rmse must be >= 0 (got {self.target_rmse})")
    if self.seed < 0:
      problems.append(f"seed must be >= 0 (got {self.seed})")
    if self.workers < 1:
      problems.append(f"workers must be >= 1 (got {self.workers})")
    if not 0.0 <= self.init_range <= WEIGHT_LIMIT:
      problems.append(f"init_range must be in [0, {WEIGHT_LIMIT}] (got {self.init_range})")
    if not problems and self.n_elite >= self.population_size:
      problems.append(
        f"elitism keeps {self.n_elite} of {self.population_size} individuals; nothing left to breed")
    if problems:
      raise ConfigurationError("invalid evolution config: " + "; ".join(problems))

  @property
  def n_elite(self) -> int:
    return max(1, math.ceil(self.elitism_fraction * self.population_size - 1e-9))

  @property
  def pool_size(self) -> int:
    return max(1, math.ceil(self.selection_fraction * self.population_size - 1e-9))

  @property
  def algorithm_mode(self) -> str:
    return EVOLVED if self.fixed_trainer is None else f"fixed({self.fixed_trainer.value})"

  def to_dict(self) -> Dict[str, Any]:
    data = asdict(self)
    data["fitness_split"] = self.fitness_split.value
    data["fixed_trainer"] = self.fixed_trainer.value if self.fixed_trainer else None
    return data

  @classmethod
  def from_dict(cls, data: Dict[str, Any]) -> "EvolutionConfig":
    known = {f.name for f in fields(cls)}
    unknown = set(data) - known
    if unknown:
      raise ConfigurationError(f"unknown evolution setting(s): {sorted(unknown)}")
    return cls(**data)
