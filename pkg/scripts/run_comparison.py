#!/usr/bin/env python3
"""
Comparison Run Script

Hybrid runs for every dataset x trainer x max-hidden setting, the
conventional 24-neuron baselines beside them, then the merged report.
"""

from pathlib import Path
import click
from colorama import Fore, Style, init
from dotenv import load_dotenv

from eann_hybrid.harness import (
  collect_artifacts, load_experiment_config, merge_artifacts, prepare_dataset,
  render_report, report_csv, run_baseline, run_evolution_experiment, write_artifact)
from eann_hybrid.harness.experiment import mode_kind
from eann_hybrid.errors import EANNError
from eann_hybrid.utils.config import section
from eann_hybrid.utils.logger import logger, setup_logger


# Initialize colorama
init(autoreset = True)

load_dotenv('.env')
setup_logger(
  log_file=section("logging").get("log_file", "logs/eann.log") or None,
  level=section("logging").get("level", "INFO")
)


@click.command()
@click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False), default=None,
              help='Flat YAML experiment file')
@click.option('--datasets', default='mackey-glass,gas-furnace,wastewater', show_default=True)
@click.option('--trainers', default='bp,scg,qna,lm', show_default=True)
@click.option('--max-hidden', 'hidden_limits', default='16,4', show_default=True)
@click.option('--output-dir', default='runs', show_default=True)
@click.option('--skip-baselines', is_flag=True, help='Only the hybrid runs')
@click.option('--debug', is_flag=True, help='Enable debug logging')
def main(config_path, datasets, trainers, hidden_limits, output_dir, skip_baselines, debug):
  """Run the full hybrid-vs-conventional comparison"""

  if debug:
    logger.setLevel("DEBUG")

  limits = [int(h) for h in hidden_limits.split(",") if h.strip()]
  root = Path(output_dir)

  for name in [d.strip() for d in datasets.split(",") if d.strip()]:
    print(f"\n{Fore.CYAN}{'='*80}")
    print(f"DATASET: {name}")
    print('='*80 + Style.RESET_ALL)
    try:
      base = load_experiment_config(config_path, dataset=name, trainers=trainers, output_dir=output_dir)
      dataset = prepare_dataset(base)
      for hidden in limits:
        config = load_experiment_config(config_path, dataset=name, trainers=trainers,
                                        output_dir=output_dir, max_hidden=hidden)
        for mode in config.trainers:
          artifact = run_evolution_experiment(config, mode, dataset, progress=True)
          write_artifact(artifact, root / artifact.name)
          print(f"{Fore.GREEN}✓ {artifact.name}: test RMSE {artifact.summary_row().test_rmse:.6g}")
      if not skip_baselines:
        for mode in base.trainers:
          artifact = run_baseline(base, mode_kind(mode), dataset)
          write_artifact(artifact, root / artifact.name)
          print(f"{Fore.GREEN}✓ {artifact.name}: test RMSE {artifact.summary_row().test_rmse:.6g}")
    except EANNError as e:
      print(f"{Fore.RED}✗ {name}: {e}")
      logger.error(f"✗ {name}: {e}")

  artifacts, errors = collect_artifacts([root])
  for message in errors:
    print(f"{Fore.RED}✗ {message}")
  rows = merge_artifacts(artifacts)
  (root / "report.csv").write_text(report_csv(rows), encoding="utf-8")
  (root / "report.txt").write_text(render_report(rows), encoding="utf-8")
  print(f"\n{Fore.YELLOW}Report:{Style.RESET_ALL}")
  print(render_report(rows))


if __name__ == '__main__':
  main()
