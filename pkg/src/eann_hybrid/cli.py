"""
Command-line interface

  eann gen-data   generate or convert a benchmark dataset (CSV + JSON sidecar)
  eann evolve     hybrid evolutionary runs, one artifact per trainer mode
  eann baseline   conventional fixed-architecture networks
  eann train      train one network of an explicit architecture
  eann report     merge run artifacts into the comparison table
"""

from contextlib import contextmanager
from pathlib import Path
from typing import Dict, List, Optional, Tuple
import click
from colorama import Fore, Style, just_fix_windows_console

from eann_hybrid.datasets.catalog import DATASET_NAMES, build_dataset
from eann_hybrid.datasets.dataset import normalize
from eann_hybrid.datasets.storage import write_dataset
from eann_hybrid.errors import ArtifactError, ConfigurationError, EANNError
from eann_hybrid.evolution.genome import Genome
from eann_hybrid.harness.artifacts import RunArtifact, write_artifact
from eann_hybrid.harness.experiment import (
  EVOLVED, load_experiment_config, mode_kind, prepare_dataset, run_baseline,
  run_evolution_experiment, run_training_experiment)
from eann_hybrid.harness.report import (
  collect_artifacts, mark_best, merge_artifacts, read_report_csv, render_report, report_csv)
from eann_hybrid.trainers.spec import TrainerKind, TrainerSpec
from eann_hybrid.utils.config import section
from eann_hybrid.utils.files import json_load
from eann_hybrid.utils.logger import logger, setup_logger


def _ok(message: str):
  click.echo(f"{Fore.GREEN}✓ {message}{Style.RESET_ALL}")


def _warn(message: str):
  click.echo(f"{Fore.YELLOW}⚠ {message}{Style.RESET_ALL}", err=True)


@contextmanager
def _surface_errors():
  """Domain and I/O errors become a one-line message and exit status 1"""
  try:
    yield
  except (EANNError, OSError) as e:
    logger.error(f"✗ {e}")
    raise click.ClickException(f"{Fore.RED}✗ {e}{Style.RESET_ALL}") from e


def _emit_artifact(artifact: RunArtifact, output_dir: str) -> Path:
  directory = write_artifact(artifact, Path(output_dir) / artifact.name)
  row = artifact.summary_row()
  _ok(f"{artifact.name}: train {row.train_rmse:.6g}, test {row.test_rmse:.6g} "
      f"(worst of {row.repetitions}), {row.architecture} -> {directory}")
  return directory


@click.group()
@click.option('--debug', is_flag=True, help='Enable debug logging')
@click.option('--log-file', default=None, help="Log file path ('' disables file logging)")
def main(debug, log_file):
  """Hybrid evolutionary neural networks for time-series prediction"""
  just_fix_windows_console()
  settings = section("logging")
  if log_file is None:
    log_file = settings.get("log_file", "logs/eann.log")
  with _surface_errors():
    setup_logger(log_file=log_file or None, level="DEBUG" if debug else settings.get("level", "INFO"))
  logger.debug("Debug mode enabled")


@main.command("gen-data")
@click.option('--dataset', default='mackey-glass', show_default=True,
              help=f"One of: {', '.join(DATASET_NAMES)}")
@click.option('--input', 'input_path', type=click.Path(dir_okay=False), default=None,
              help='Source file for gas-furnace / wastewater')
@click.option('--output', '-o', type=click.Path(dir_okay=False), default=None,
              help='CSV to write (default data/<dataset>.csv)')
@click.option('--dt', type=float, default=0.1, show_default=True, help='Mackey-Glass RK4 step')
@click.option('--tau', type=float, default=17.0, show_default=True, help='Mackey-Glass delay')
@click.option('--x0', type=float, default=1.2, show_default=True, help='Mackey-Glass x(0)')
@click.option('--history', type=float, default=0.0, show_default=True, help='Mackey-Glass x(t) for t < 0')
@click.option('--seed', type=int, default=0, show_default=True, help='Surrogate generator seed')
@click.option('--normalize', 'do_normalize', is_flag=True, help='Store [0, 1]-normalized values')
def gen_data(dataset, input_path, output, dt, tau, x0, history, seed, do_normalize):
  """Generate (or load) a dataset and write it as CSV plus JSON sidecar"""
  with _surface_errors():
    data = build_dataset(dataset, path=input_path, seed=seed,
                         mackey={"dt": dt, "tau": tau, "x0": x0, "history": history})
    if do_normalize:
      data = normalize(data)
    csv_path, meta_path = write_dataset(data, output or Path("data") / f"{data.name}.csv")
  _ok(f"{data.n_patterns} patterns ({data.n_inputs} inputs), split {data.split_index}: "
      f"{csv_path} + {meta_path.name}")


def _experiment_options(func):
  """Options shared by evolve, baseline and train"""
  options = [
    click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False),
                 default=None, help='Flat YAML experiment file'),
    click.option('--dataset', default=None, help=f"One of: {', '.join(DATASET_NAMES)}"),
    click.option('--dataset-path', default=None, help='Data file for file-backed datasets'),
    click.option('--repetitions', type=int, default=None, help='Independent repetitions'),
    click.option('--seed', type=int, default=None, help='Base seed'),
    click.option('--output-dir', default=None, help='Where artifact directories go'),
  ]
  for option in reversed(options):
    func = option(func)
  return func


def _seed_genomes(path: Optional[str]) -> Optional[List[Genome]]:
  """Genomes from best_genome.json, a repetition record or a bare genome"""
  if path is None:
    return None
  data = json_load(path)
  if "bits" in data:
    return [Genome.from_dict(data)]
  if "repetitions" in data:
    return [Genome.from_dict(r["genome"]) for r in data["repetitions"] if r.get("genome")]
  if data.get("genome"):
    return [Genome.from_dict(data["genome"])]
  raise ArtifactError(f"{path}: no genome found to resume from")


@main.command()
@_experiment_options
@click.option('--trainer', 'trainers', default=None,
              help='Comma-separated modes: bp, scg, qna, lm, evolved (default: the four trainers)')
@click.option('--max-hidden', type=int, default=None, help='Maximum hidden neurons')
@click.option('--population', 'population_size', type=int, default=None)
@click.option('--generations', 'max_generations', type=int, default=None)
@click.option('--epochs', 'epochs_per_eval', type=int, default=None, help='Training epochs per evaluation')
@click.option('--mutation-rate', type=float, default=None)
@click.option('--target-rmse', type=float, default=None, help='Stop once the best fitness reaches this')
@click.option('--fitness-split', type=click.Choice(['test', 'holdout']), default=None)
@click.option('--lamarckian/--baldwinian', default=None, help='Write trained weights back into genomes')
@click.option('--workers', type=int, default=None, help='Parallel fitness evaluations')
@click.option('--resume', type=click.Path(exists=True, dir_okay=False), default=None,
              help='Seed the initial population from a saved genome JSON')
@click.option('--progress/--no-progress', default=True)
def evolve(config_path, resume, progress, **overrides):
  """Evolve networks (architecture, activations, weights, trainer settings)"""
  with _surface_errors():
    config = load_experiment_config(config_path, **overrides)
    seed_genomes = _seed_genomes(resume)
    dataset = prepare_dataset(config)
    for mode in config.trainers:
      artifact = run_evolution_experiment(config, mode, dataset, seed_genomes, progress=progress)
      _emit_artifact(artifact, config.output_dir)


@main.command()
@_experiment_options
@click.option('--trainer', 'trainers', default=None,
              help='Comma-separated trainers: bp, scg, qna, lm (default: all four)')
@click.option('--architecture', 'baseline_architecture', default=None,
              help='Fixed architecture, e.g. "24 T*"')
@click.option('--epochs', 'baseline_epochs', type=int, default=None, help='Training epochs')
def baseline(config_path, **overrides):
  """Conventional design: fixed architecture, random +/-0.3 init, one trainer each"""
  with _surface_errors():
    config = load_experiment_config(config_path, **overrides)
    if EVOLVED in config.trainers:
      raise ConfigurationError("baseline runs need explicit trainers (bp, scg, qna, lm)")
    dataset = prepare_dataset(config)
    for mode in config.trainers:
      _emit_artifact(run_baseline(config, mode_kind(mode), dataset), config.output_dir)


def _parse_params(items: Tuple[str, ...]) -> Dict[str, float]:
  values = {}
  for item in items:
    name, sep, value = item.partition("=")
    if not sep:
      raise ConfigurationError(f"--param expects name=value, got {item!r}")
    try:
      values[name.strip()] = float(value)
    except ValueError:
      raise ConfigurationError(f"--param {name.strip()}: {value!r} is not a number") from None
  return values


@main.command()
@_experiment_options
@click.option('--architecture', required=True, help='e.g. "8 T, 2 T*, 1 L*"')
@click.option('--trainer', 'trainer', required=True, type=click.Choice(['bp', 'scg', 'qna', 'lm'], case_sensitive=False))
@click.option('--epochs', type=int, default=500, show_default=True)
@click.option('--param', 'params', multiple=True, help='Trainer hyperparameter, name=value (repeatable)')
def train(config_path, architecture, trainer, epochs, params, **overrides):
  """Train one network of an explicit architecture and record its epoch trace"""
  with _surface_errors():
    if overrides.get("repetitions") is None:
      overrides["repetitions"] = 1
    config = load_experiment_config(config_path, **overrides)
    spec = TrainerSpec.create(TrainerKind.parse(trainer), **_parse_params(params))
    artifact = run_training_experiment(config, architecture, spec, epochs)
    _emit_artifact(artifact, config.output_dir)


@main.command()
@click.argument('sources', nargs=-1, required=True, type=click.Path())
@click.option('--output', '-o', type=click.Path(dir_okay=False), default=None,
              help='Write the merged table here as CSV (plus a .txt rendering)')
@click.pass_context
def report(ctx, sources, output):
  """Merge artifact directories (or a merged CSV) into the comparison table"""
  errors: List[str] = []
  with _surface_errors():
    csv_sources = [s for s in sources if s.endswith(".csv") and Path(s).is_file()]
    if csv_sources:
      rows = [row for s in csv_sources for row in read_report_csv(s)]
      others = [s for s in sources if s not in csv_sources]
      if others:
        artifacts, errors = collect_artifacts(others)
        rows = mark_best(rows + merge_artifacts(artifacts))
    else:
      artifacts, errors = collect_artifacts(sources)
      rows = merge_artifacts(artifacts)

    click.echo(render_report(rows), nl=False)
    if output:
      output_path = Path(output)
      output_path.parent.mkdir(parents=True, exist_ok=True)
      output_path.write_text(report_csv(rows), encoding="utf-8")
      output_path.with_suffix(".txt").write_text(render_report(rows), encoding="utf-8")
      _ok(f"Merged {len(rows)} row(s) into {output_path}")

  for message in errors:
    click.echo(f"{Fore.RED}✗ {message}{Style.RESET_ALL}", err=True)
  if errors:
    _warn(f"{len(errors)} artifact(s) could not be read")
    ctx.exit(1)


if __name__ == "__main__":
  main()
