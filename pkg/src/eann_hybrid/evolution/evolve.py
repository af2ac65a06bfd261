from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import repeat
from typing import Any, Dict, List, Optional, Sequence, Tuple
import numpy as np
from tqdm import tqdm

from eann_hybrid.datasets.dataset import SupervisedDataset
from eann_hybrid.errors import ConfigurationError, DatasetError
from eann_hybrid.evolution.config import EvolutionConfig, FitnessSplit
from eann_hybrid.evolution.genome import Genome, random_genome
from eann_hybrid.evolution.population import (
  GenerationStats,
  Individual,
  evaluate,
  generation_stats,
  individual_stream,
  mutate,
  rank_population,
  select_parents,
)
from eann_hybrid.network.phenotype import EvaluationBatch, predict
from eann_hybrid.utils.logger import logger

STOP_MAX_GENERATIONS = "max_generations"
STOP_TARGET = "target_rmse"


@dataclass(frozen=True, eq=False)
class EvolutionReport:
  """Outcome of one evolutionary run"""
  config: Dict[str, Any]
  seed: int
  generations: List[GenerationStats]
  best: Individual
  stop_reason: str
  predictions: List[float]

  @property
  def best_fitness_trace(self) -> List[float]:
    return [g.best_rmse for g in self.generations]

  @property
  def mean_fitness_trace(self) -> List[float]:
    return [g.mean_rmse for g in self.generations]

  def to_dict(self) -> Dict[str, Any]:
    return {
      "config": dict(self.config),
      "seed": self.seed,
      "generations": [g.to_dict() for g in self.generations],
      "best": self.best.to_dict(),
      "stop_reason": self.stop_reason,
      "predictions": list(self.predictions),
    }

  @classmethod
  def from_dict(cls, data: Dict[str, Any]) -> "EvolutionReport":
    return cls(
      config=dict(data["config"]),
      seed=int(data["seed"]),
      generations=[GenerationStats.from_dict(g) for g in data["generations"]],
      best=Individual.from_dict(data["best"]),
      stop_reason=data["stop_reason"],
      predictions=[float(p) for p in data["predictions"]],
    )

  def __eq__(self, other) -> bool:
    if not isinstance(other, EvolutionReport):
      return NotImplemented
    return self.to_dict() == other.to_dict()

  __hash__ = None


def fitness_batches(
    dataset: SupervisedDataset,
    config: EvolutionConfig) -> Tuple[EvaluationBatch, EvaluationBatch]:
  """
  (training batch, fitness batch). fitness_split=test scores on the test
  portion; holdout carves the last holdout_fraction of the training portion.
  """
  if config.fitness_split is FitnessSplit.TEST:
    return dataset.train_batch(), dataset.test_batch()
  cut = int(round(dataset.split_index * (1.0 - config.holdout_fraction)))
  if not 1 <= cut < dataset.split_index:
    raise ConfigurationError(
      f"holdout_fraction {config.holdout_fraction} leaves no training or holdout patterns "
      f"out of {dataset.split_index}")
  inputs, targets = dataset.inputs, dataset.targets
  return (EvaluationBatch(inputs[:cut], targets[:cut]),
          EvaluationBatch(inputs[cut:dataset.split_index], targets[cut:dataset.split_index]))


def _check_batches(batches: Sequence[EvaluationBatch]):
  n_inputs = batches[0].n_inputs
  for batch in batches:
    if batch.n_inputs != n_inputs:
      raise DatasetError(f"batches disagree on input width ({batch.n_inputs} vs {n_inputs})")
    if not (np.all(np.isfinite(batch.inputs)) and np.all(np.isfinite(batch.targets))):
      raise DatasetError("batches contain NaN or infinite values")


def initial_population(
    seed: int,
    n_inputs: int,
    config: EvolutionConfig,
    seed_genomes: Optional[Sequence[Genome]] = None) -> List[Individual]:
  """Saved genomes first (at most population_size), random genomes for the rest"""
  population = []
  for genome in list(seed_genomes or [])[:config.population_size]:
    if (genome.n_inputs, genome.max_hidden) != (n_inputs, config.max_hidden):
      raise ConfigurationError(
        f"seed genome laid out for ({genome.n_inputs} inputs, max {genome.max_hidden} hidden), "
        f"run needs ({n_inputs}, {config.max_hidden})")
    population.append(Individual(genome))
  for index in range(len(population), config.population_size):
    rng = individual_stream(seed, 0, index)
    population.append(Individual(random_genome(rng, n_inputs, config.max_hidden, config.init_range)))
  return population


def evaluate_population(
    population: Sequence[Individual],
    train_set: EvaluationBatch,
    fitness_set: EvaluationBatch,
    config: EvolutionConfig) -> List[Individual]:
  """
  Evaluate every individual without a fitness. Elites keep their cached
  fitness. Results are stored by position, so worker count never changes
  the outcome.
  """
  pending = [i for i, ind in enumerate(population) if not ind.evaluated]
  todo = [population[i] for i in pending]
  if config.workers > 1 and len(todo) > 1:
    with ProcessPoolExecutor(max_workers=min(config.workers, len(todo))) as pool:
      done = list(pool.map(evaluate, todo, repeat(train_set), repeat(fitness_set), repeat(config)))
  else:
    done = [evaluate(ind, train_set, fitness_set, config) for ind in todo]

  out = list(population)
  for i, ind in zip(pending, done):
    out[i] = ind
  clamped = sum(ind.clamped_weights for ind in done)
  if clamped:
    logger.info(f"Lamarckian write-back clamped {clamped} weight(s) to [-8, 8]")
  return out


def next_generation(
    population: Sequence[Individual],
    config: EvolutionConfig,
    seed: int,
    generation: int) -> List[Individual]:
  """Elites unchanged (with cached fitness), the rest mutated copies of selected parents"""
  elites = rank_population(population)[:config.n_elite]
  selection_rng = individual_stream(seed, generation, config.population_size)
  parents = select_parents(population, config, selection_rng, count=config.population_size - len(elites))
  children = [
    Individual(mutate(parent.genome, config, individual_stream(seed, generation, len(elites) + i)))
    for i, parent in enumerate(parents)
  ]
  return list(elites) + children


def evolve(
    train_set: EvaluationBatch,
    fitness_set: EvaluationBatch,
    config: EvolutionConfig,
    rng: Optional[np.random.Generator] = None,
    seed_genomes: Optional[Sequence[Genome]] = None,
    test_set: Optional[EvaluationBatch] = None,
    progress: bool = False) -> EvolutionReport:
  """
  Run the generation loop until max_generations or until the best fitness
  reaches target_rmse.

  Every random draw comes from a stream keyed by (seed, generation, slot),
  with seed = config.seed unless an rng is passed. test_set, when given,
  adds the population-mean test RMSE to each generation's stats.
  """
  batches = [train_set, fitness_set] + ([test_set] if test_set is not None else [])
  _check_batches(batches)
  seed = config.seed if rng is None else int(rng.integers(0, 2 ** 63 - 1))
  n_inputs = train_set.n_inputs

  population = initial_population(seed, n_inputs, config, seed_genomes)
  generations: List[GenerationStats] = []
  stop_reason = STOP_MAX_GENERATIONS
  logger.info(
    f"Evolving {config.population_size} networks for up to {config.max_generations} generations "
    f"({config.algorithm_mode}, max {config.max_hidden} hidden, {config.epochs_per_eval} epochs, seed {seed})")

  with tqdm(total=config.max_generations, desc="Generations", unit="gen", disable=not progress) as bar:
    for generation in range(config.max_generations):
      population = evaluate_population(population, train_set, fitness_set, config)
      stats = generation_stats(generation, population, test_set)
      generations.append(stats)
      logger.info(
        f"Generation {generation}: best {stats.best_rmse:.6g}, mean {stats.mean_rmse:.6g} "
        f"[{stats.best_architecture}; {stats.best_trainer}]")
      bar.update(1)
      bar.set_postfix(best=f"{stats.best_rmse:.4g}")
      if config.target_rmse is not None and stats.best_rmse <= config.target_rmse:
        stop_reason = STOP_TARGET
        break
      if generation + 1 < config.max_generations:
        population = next_generation(population, config, seed, generation + 1)

  best = rank_population(population)[0]
  logger.info(f"✓ Best network: {best.architecture}, fitness RMSE {best.fitness:.6g} ({stop_reason})")
  return EvolutionReport(
    config=config.to_dict(),
    seed=seed,
    generations=generations,
    best=best,
    stop_reason=stop_reason,
    predictions=predict(best.trained_phenotype, fitness_set.inputs).tolist(),
  )
