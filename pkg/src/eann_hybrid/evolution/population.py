from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence
import numpy as np

from eann_hybrid.errors import ConfigurationError, NumericalOverflowError
from eann_hybrid.evolution.config import EvolutionConfig
from eann_hybrid.evolution.genome import SEGMENTS, Genome, decode, with_weights
from eann_hybrid.network.activations import ActivationKind
from eann_hybrid.network.phenotype import (
  EvaluationBatch, NetworkPhenotype, NetworkShape, flatten_params, rmse, unflatten_params)
from eann_hybrid.trainers.spec import Termination, TrainerKind, TrainerSpec
from eann_hybrid.trainers.trainer import train
from eann_hybrid.utils.logger import logger


def individual_stream(seed: int, generation: int, index: int) -> np.random.Generator:
  """Random stream owned by one (generation, slot) pair of a run"""
  return np.random.default_rng(np.random.SeedSequence([seed, generation, index]))


@dataclass(frozen=True)
class Individual:
  """A genome plus, once evaluated, its fitness (RMSE, lower is better)"""
  genome: Genome
  fitness: Optional[float] = None
  trained_phenotype: Optional[NetworkPhenotype] = field(default=None, compare=False)
  trainer_spec: Optional[TrainerSpec] = None
  train_rmse: Optional[float] = None
  termination: Optional[Termination] = None
  clamped_weights: int = 0

  def __post_init__(self):
    if self.fitness is not None and not (np.isfinite(self.fitness) and self.fitness >= 0.0):
      raise NumericalOverflowError(f"fitness must be finite and >= 0, got {self.fitness}")

  @property
  def evaluated(self) -> bool:
    return self.fitness is not None

  @property
  def architecture(self) -> str:
    return self.trained_phenotype.architecture if self.trained_phenotype else ""

  def to_dict(self) -> Dict[str, Any]:
    net = self.trained_phenotype
    return {
      "genome": self.genome.to_dict(),
      "fitness": self.fitness,
      "train_rmse": self.train_rmse,
      "trainer": self.trainer_spec.to_dict() if self.trainer_spec else None,
      "termination": self.termination.value if self.termination else None,
      "clamped_weights": self.clamped_weights,
      "architecture": self.architecture,
      "activations": [kind.value for kind in net.activations] if net else None,
      "params": flatten_params(net).tolist() if net else None,
    }

  @classmethod
  def from_dict(cls, data: Dict[str, Any]) -> "Individual":
    genome = Genome.from_dict(data["genome"])
    net = None
    if data.get("params") is not None:
      shape = NetworkShape(genome.n_inputs, tuple(ActivationKind(v) for v in data["activations"]))
      net = unflatten_params(shape, data["params"])
    return cls(
      genome=genome,
      fitness=data.get("fitness"),
      trained_phenotype=net,
      trainer_spec=TrainerSpec.from_dict(data["trainer"]) if data.get("trainer") else None,
      train_rmse=data.get("train_rmse"),
      termination=Termination(data["termination"]) if data.get("termination") else None,
      clamped_weights=int(data.get("clamped_weights", 0)),
    )


@dataclass(frozen=True)
class GenerationStats:
  generation: int
  best_rmse: float
  mean_rmse: float
  worst_rmse: float
  best_train_rmse: Optional[float]
  best_architecture: str
  best_trainer: str
  trainer_kind_histogram: Dict[str, int]
  best_genome: Dict[str, Any] = field(default_factory=dict, compare=False)
  mean_test_rmse: Optional[float] = None

  def to_dict(self) -> Dict[str, Any]:
    return {
      "generation": self.generation,
      "best_rmse": self.best_rmse,
      "mean_rmse": self.mean_rmse,
      "worst_rmse": self.worst_rmse,
      "best_train_rmse": self.best_train_rmse,
      "best_architecture": self.best_architecture,
      "best_trainer": self.best_trainer,
      "trainer_kind_histogram": dict(self.trainer_kind_histogram),
      "best_genome": dict(self.best_genome),
      "mean_test_rmse": self.mean_test_rmse,
    }

  @classmethod
  def from_dict(cls, data: Dict[str, Any]) -> "GenerationStats":
    return cls(**data)


def evaluate(
    individual: Individual,
    train_set: EvaluationBatch,
    fitness_set: EvaluationBatch,
    config: EvolutionConfig) -> Individual:
  """
  Decode, fine-tune for epochs_per_eval epochs on train_set and score the
  trained network by its RMSE on fitness_set. With Lamarckian write-back the
  trained weights replace the genome's weight genes.
  """
  genome = individual.genome
  net, spec = decode(genome, genome.n_inputs, genome.max_hidden, config.fixed_trainer)
  result = train(net, train_set, spec, config.epochs_per_eval)
  if result.termination is not Termination.BUDGET_EXHAUSTED:
    logger.debug(f"{spec.kind.value} stopped after {result.epochs_used} epochs: {result.termination.value}")
  trained = unflatten_params(net.shape, result.final_params)
  try:
    fitness = rmse(trained, fitness_set)
    train_error = rmse(trained, train_set)
  except NumericalOverflowError:
    # weights finite but outputs overflow: keep the untrained network
    trained = net
    fitness = rmse(trained, fitness_set)
    train_error = rmse(trained, train_set)

  clamped = 0
  if config.lamarckian:
    genome, clamped = with_weights(genome, trained.n_hidden, flatten_params(trained))
  return Individual(
    genome=genome,
    fitness=fitness,
    trained_phenotype=trained,
    trainer_spec=spec,
    train_rmse=train_error,
    termination=result.termination,
    clamped_weights=clamped,
  )


def rank_population(population: Sequence[Individual]) -> List[Individual]:
  """Ascending fitness; ties by genome bit order, then by position"""
  if any(not ind.evaluated for ind in population):
    raise ConfigurationError("cannot rank a population with unevaluated individuals")
  order = sorted(range(len(population)),
                 key=lambda i: (population[i].fitness, population[i].genome.key, i))
  return [population[i] for i in order]


def select_parents(
    population: Sequence[Individual],
    config: EvolutionConfig,
    rng: np.random.Generator,
    count: Optional[int] = None) -> List[Individual]:
  """
  Truncation rank selection: the best pool_size individuals form the pool
  and `count` parents are drawn from it uniformly with replacement.
  """
  if not population:
    raise ConfigurationError("cannot select parents from an empty population")
  ranked = rank_population(population)
  pool = ranked[:min(config.pool_size, len(ranked))]
  if count is None:
    count = config.population_size - config.n_elite
  picks = rng.integers(0, len(pool), size=count)
  return [pool[i] for i in picks]


def mutate(genome: Genome, config: EvolutionConfig, rng: np.random.Generator) -> Genome:
  """
  Per segment, with probability mutation_rate, flip one uniformly chosen
  bit of that segment. At most one bit per segment changes.
  """
  bits = genome.bits.copy()
  slices = genome.layout.slices
  for name in SEGMENTS:
    segment = slices[name]
    if rng.random() < config.mutation_rate:
      position = segment.start + int(rng.integers(0, segment.stop - segment.start))
      bits[position] ^= 1
  return replace(genome, bits=bits)


def generation_stats(
    generation: int,
    population: Sequence[Individual],
    test_set: Optional[EvaluationBatch] = None) -> GenerationStats:
  """Summary of one evaluated generation; test_set adds the population-mean test RMSE"""
  ranked = rank_population(population)
  best = ranked[0]
  fitness = np.array([ind.fitness for ind in population])
  best_rmse, worst_rmse = float(fitness.min()), float(fitness.max())
  mean_test = None
  if test_set is not None:
    mean_test = float(np.mean([rmse(ind.trained_phenotype, test_set) for ind in population]))
  histogram = {kind.value: 0 for kind in TrainerKind}
  for ind in population:
    histogram[ind.trainer_spec.kind.value] += 1
  return GenerationStats(
    generation=generation,
    best_rmse=best_rmse,
    mean_rmse=min(max(float(fitness.mean()), best_rmse), worst_rmse),
    worst_rmse=worst_rmse,
    best_train_rmse=best.train_rmse,
    best_architecture=best.architecture,
    best_trainer=best.trainer_spec.describe(),
    trainer_kind_histogram=histogram,
    best_genome=best.genome.to_dict(),
    mean_test_rmse=mean_test,
  )
