from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union
import numpy as np

from eann_hybrid.datasets.catalog import build_dataset, canonical_name
from eann_hybrid.datasets.dataset import SupervisedDataset, normalize
from eann_hybrid.errors import ConfigurationError
from eann_hybrid.evolution.config import EVOLVED, EvolutionConfig
from eann_hybrid.evolution.evolve import evolve, fitness_batches
from eann_hybrid.evolution.genome import Genome
from eann_hybrid.harness.artifacts import BASELINE, HYBRID, SINGLE, RepetitionResult, RunArtifact
from eann_hybrid.network.architecture import parse_architecture
from eann_hybrid.network.phenotype import (
  NetworkPhenotype, NetworkShape, predict, random_phenotype, rmse, unflatten_params)
from eann_hybrid.trainers.spec import TrainerKind, TrainerSpec, TrainingResult
from eann_hybrid.trainers.trainer import train
from eann_hybrid.utils.config import section
from eann_hybrid.utils.files import yaml_load
from eann_hybrid.utils.logger import logger

_EVOLUTION = EvolutionConfig()
TRAINER_MODES = tuple(kind.value.lower() for kind in TrainerKind) + (EVOLVED,)


def parse_trainer_modes(value: Union[str, Sequence[str]]) -> Tuple[str, ...]:
  """'lm' / 'bp,scg' / ['qna', 'evolved'] -> normalized tuple of modes"""
  items = value.split(",") if isinstance(value, str) else list(value)
  modes = []
  for item in items:
    mode = str(item).strip().lower()
    if not mode:
      continue
    if mode not in TRAINER_MODES:
      raise ConfigurationError(f"unknown trainer mode {item!r}; choose from {', '.join(TRAINER_MODES)}")
    if mode not in modes:
      modes.append(mode)
  if not modes:
    raise ConfigurationError("at least one trainer mode is required")
  return tuple(modes)


def mode_kind(mode: str) -> Optional[TrainerKind]:
  return None if mode == EVOLVED else TrainerKind.parse(mode)


def mode_label(mode: str) -> str:
  return EVOLVED if mode == EVOLVED else mode.upper()


@dataclass(frozen=True)
class ExperimentConfig:
  """
  Flat experiment settings; every field can be set in a YAML experiment
  file or from the command line. Evolution defaults match EvolutionConfig,
  baseline defaults are the conventional 24-neuron T* design.
  """
  dataset: str = "mackey-glass"
  dataset_path: Optional[str] = None
  dataset_seed: int = 0
  normalize: bool = True
  mg_dt: float = 0.1
  mg_tau: float = 17.0
  mg_x0: float = 1.2
  mg_history: float = 0.0
  trainers: Tuple[str, ...] = tuple(kind.value.lower() for kind in TrainerKind)
  repetitions: int = 3
  seed: int = 0
  output_dir: str = "runs"
  population_size: int = _EVOLUTION.population_size
  max_generations: int = _EVOLUTION.max_generations
  max_hidden: int = _EVOLUTION.max_hidden
  epochs_per_eval: int = _EVOLUTION.epochs_per_eval
  elitism_fraction: float = _EVOLUTION.elitism_fraction
  selection_fraction: float = _EVOLUTION.selection_fraction
  mutation_rate: float = _EVOLUTION.mutation_rate
  fitness_split: str = _EVOLUTION.fitness_split.value
  holdout_fraction: float = _EVOLUTION.holdout_fraction
  target_rmse: Optional[float] = None
  lamarckian: bool = True
  workers: int = 1
  init_range: float = _EVOLUTION.init_range
  baseline_architecture: str = "24 T*"
  baseline_epochs: int = 2500

  def __post_init__(self):
    object.__setattr__(self, "dataset", canonical_name(self.dataset))
    object.__setattr__(self, "trainers", parse_trainer_modes(self.trainers))
    if self.repetitions < 1:
      raise ConfigurationError(f"repetitions must be >= 1, got {self.repetitions}")
    if self.baseline_epochs < 0:
      raise ConfigurationError(f"baseline_epochs must be >= 0, got {self.baseline_epochs}")
    parse_architecture(self.baseline_architecture)
    self.evolution_config(None, 0)

  @classmethod
  def field_names(cls) -> List[str]:
    return [f.name for f in fields(cls)]

  @classmethod
  def from_dict(cls, data: Dict[str, Any]) -> "ExperimentConfig":
    unknown = set(data) - set(cls.field_names())
    if unknown:
      raise ConfigurationError(f"unknown experiment setting(s): {', '.join(sorted(unknown))}")
    return cls(**data)

  def to_dict(self) -> Dict[str, Any]:
    data = asdict(self)
    data["trainers"] = list(self.trainers)
    return data

  @property
  def mackey_options(self) -> Dict[str, float]:
    return {"dt": self.mg_dt, "tau": self.mg_tau, "x0": self.mg_x0, "history": self.mg_history}

  def repetition_seed(self, repetition: int) -> int:
    return int(np.random.SeedSequence([self.seed, repetition]).generate_state(1)[0])

  def evolution_config(self, kind: Optional[TrainerKind], repetition: int) -> EvolutionConfig:
    return EvolutionConfig(
      population_size=self.population_size,
      max_generations=self.max_generations,
      max_hidden=self.max_hidden,
      epochs_per_eval=self.epochs_per_eval,
      elitism_fraction=self.elitism_fraction,
      selection_fraction=self.selection_fraction,
      mutation_rate=self.mutation_rate,
      fitness_split=self.fitness_split,
      fixed_trainer=kind,
      target_rmse=self.target_rmse,
      seed=self.repetition_seed(repetition),
      lamarckian=self.lamarckian,
      workers=self.workers,
      init_range=self.init_range,
      holdout_fraction=self.holdout_fraction,
    )


def load_experiment_config(
    path: Optional[Union[str, Path]] = None,
    **overrides: Any) -> ExperimentConfig:
  """
  Resolve settings: command-line overrides (None means unset) over the
  experiment file over the harness section of config.yaml over defaults.
  """
  values: Dict[str, Any] = {}
  names = set(ExperimentConfig.field_names())
  values.update({k: v for k, v in section("harness").items() if k in names})
  if path is not None:
    loaded = yaml_load(path)
    if not isinstance(loaded, dict):
      raise ConfigurationError(f"{path}: experiment file must be a key: value mapping")
    unknown = set(loaded) - names
    if unknown:
      raise ConfigurationError(f"{path}: unknown setting(s) {', '.join(sorted(unknown))}")
    values.update(loaded)
  values.update({k: v for k, v in overrides.items() if v is not None})
  return ExperimentConfig.from_dict(values)


def _default_path(dataset: str) -> Optional[str]:
  key = {"gas-furnace": "gas_furnace_path", "wastewater": "wastewater_path"}.get(dataset)
  return section("datasets").get(key) if key else None


def prepare_dataset(config: ExperimentConfig) -> SupervisedDataset:
  """Build the configured dataset, normalized to [0, 1] unless disabled"""
  path = config.dataset_path or _default_path(config.dataset)
  dataset = build_dataset(config.dataset, path=path, seed=config.dataset_seed,
                          mackey=config.mackey_options)
  return normalize(dataset) if config.normalize else dataset


def _snapshot(config: ExperimentConfig, mode: str, dataset: SupervisedDataset) -> Dict[str, Any]:
  snapshot = config.to_dict()
  snapshot["trainers"] = [mode]
  snapshot["dataset_provenance"] = dataset.provenance
  snapshot["repetition_seeds"] = [config.repetition_seed(r) for r in range(config.repetitions)]
  return snapshot


def run_evolution_experiment(
    config: ExperimentConfig,
    mode: str,
    dataset: Optional[SupervisedDataset] = None,
    seed_genomes: Optional[Sequence[Genome]] = None,
    progress: bool = False) -> RunArtifact:
  """All repetitions of one evolutionary run; the summary keeps the worst test RMSE"""
  dataset = dataset if dataset is not None else prepare_dataset(config)
  kind = mode_kind(mode)
  test_batch = dataset.test_batch()
  train_batch = dataset.train_batch()
  repetitions = []
  for rep in range(config.repetitions):
    evolution = config.evolution_config(kind, rep)
    fit_train, fit_set = fitness_batches(dataset, evolution)
    logger.info(f"Repetition {rep + 1}/{config.repetitions} ({mode_label(mode)}, seed {evolution.seed})")
    report = evolve(fit_train, fit_set, evolution, seed_genomes=seed_genomes,
                    test_set=test_batch, progress=progress)
    net = report.best.trained_phenotype
    trace = [(g.generation, g.mean_test_rmse if g.mean_test_rmse is not None else g.mean_rmse)
             for g in report.generations]
    repetitions.append(RepetitionResult(
      repetition=rep,
      seed=evolution.seed,
      train_rmse=rmse(net, train_batch),
      test_rmse=rmse(net, test_batch),
      architecture=net.architecture,
      trainer=report.best.trainer_spec.describe(),
      predictions=predict(net, test_batch.inputs).tolist(),
      trace=trace,
      genome=report.best.genome.to_dict(),
      report=report.to_dict(),
    ))
  return RunArtifact(
    method=HYBRID,
    dataset=dataset.name,
    trainer=mode_label(mode),
    max_hidden=config.max_hidden,
    config=_snapshot(config, mode, dataset),
    test_targets=test_batch.targets.tolist(),
    repetitions=repetitions,
    normalization=dataset.normalization.to_dict() if dataset.normalization else None,
  )


def run_single_training(
    dataset: SupervisedDataset,
    architecture: str,
    spec: TrainerSpec,
    epochs: int,
    seed: int,
    init_range: float = 0.3) -> Tuple[NetworkPhenotype, TrainingResult]:
  """Train one randomly initialized network of the given architecture"""
  shape = NetworkShape(dataset.n_inputs, parse_architecture(architecture))
  net = random_phenotype(np.random.default_rng(seed), shape, init_range)
  result = train(net, dataset.train_batch(), spec, epochs)
  return unflatten_params(shape, result.final_params), result


def _training_repetitions(
    config: ExperimentConfig,
    dataset: SupervisedDataset,
    architecture: str,
    spec: TrainerSpec,
    epochs: int) -> List[RepetitionResult]:
  train_batch, test_batch = dataset.train_batch(), dataset.test_batch()
  repetitions = []
  for rep in range(config.repetitions):
    seed = config.repetition_seed(rep)
    net, result = run_single_training(dataset, architecture, spec, epochs, seed, config.init_range)
    repetitions.append(RepetitionResult(
      repetition=rep,
      seed=seed,
      train_rmse=rmse(net, train_batch),
      test_rmse=rmse(net, test_batch),
      architecture=net.architecture,
      trainer=spec.describe(),
      predictions=predict(net, test_batch.inputs).tolist(),
      trace=[(epoch + 1, value) for epoch, value in enumerate(result.epoch_rmse)],
      trace_columns=("epoch", "train_rmse"),
      training=result.to_dict(),
    ))
  return repetitions


def run_baseline(
    config: ExperimentConfig,
    kind: TrainerKind,
    dataset: Optional[SupervisedDataset] = None) -> RunArtifact:
  """Conventional design: fixed architecture, random init, default trainer settings"""
  dataset = dataset if dataset is not None else prepare_dataset(config)
  spec = TrainerSpec.default(kind)
  logger.info(f"Baseline {config.baseline_architecture} with {spec.describe()} for {config.baseline_epochs} epochs")
  repetitions = _training_repetitions(
    config, dataset, config.baseline_architecture, spec, config.baseline_epochs)
  return RunArtifact(
    method=BASELINE,
    dataset=dataset.name,
    trainer=kind.value,
    max_hidden=None,
    config=_snapshot(config, kind.value.lower(), dataset),
    test_targets=dataset.test_batch().targets.tolist(),
    repetitions=repetitions,
    normalization=dataset.normalization.to_dict() if dataset.normalization else None,
  )


def run_training_experiment(
    config: ExperimentConfig,
    architecture: str,
    spec: TrainerSpec,
    epochs: int,
    dataset: Optional[SupervisedDataset] = None) -> RunArtifact:
  """Single-network runs of an explicit architecture, one per repetition"""
  dataset = dataset if dataset is not None else prepare_dataset(config)
  snapshot = _snapshot(config, spec.kind.value.lower(), dataset)
  snapshot.update({"architecture": architecture, "trainer_spec": spec.to_dict(), "epochs": epochs})
  return RunArtifact(
    method=SINGLE,
    dataset=dataset.name,
    trainer=spec.kind.value,
    max_hidden=None,
    config=snapshot,
    test_targets=dataset.test_batch().targets.tolist(),
    repetitions=_training_repetitions(config, dataset, architecture, spec, epochs),
    normalization=dataset.normalization.to_dict() if dataset.normalization else None,
  )


