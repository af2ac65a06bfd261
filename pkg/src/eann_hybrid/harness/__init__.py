from .artifacts import (
  BASELINE,
  HYBRID,
  SINGLE,
  RepetitionResult,
  RunArtifact,
  SummaryRow,
  read_artifact,
  write_artifact,
)
from .experiment import (
  TRAINER_MODES,
  ExperimentConfig,
  load_experiment_config,
  mode_kind,
  parse_trainer_modes,
  prepare_dataset,
  run_baseline,
  run_evolution_experiment,
  run_single_training,
  run_training_experiment,
)
from .report import (
  ReportRow,
  collect_artifacts,
  mark_best,
  merge_artifacts,
  read_report_csv,
  render_report,
  report_csv,
)

__all__ = [
  'BASELINE', 'HYBRID', 'SINGLE', 'RepetitionResult', 'RunArtifact', 'SummaryRow',
  'read_artifact', 'write_artifact',
  'TRAINER_MODES', 'ExperimentConfig', 'load_experiment_config', 'mode_kind',
  'parse_trainer_modes', 'prepare_dataset', 'run_baseline', 'run_evolution_experiment',
  'run_single_training', 'run_training_experiment',
  'ReportRow', 'collect_artifacts', 'mark_best', 'merge_artifacts', 'read_report_csv',
  'render_report', 'report_csv',
]
