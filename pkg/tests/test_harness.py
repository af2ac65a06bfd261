from dataclasses import replace
import numpy as np
import pytest

from eann_hybrid.errors import ArchitectureParseError, ArtifactError, ConfigurationError, DatasetError
from eann_hybrid.evolution.genome import Genome
from eann_hybrid.harness import (
  BASELINE, HYBRID, SINGLE, ExperimentConfig, RepetitionResult, RunArtifact, collect_artifacts,
  load_experiment_config, merge_artifacts, parse_trainer_modes, prepare_dataset, read_artifact,
  read_report_csv, render_report, report_csv, run_baseline, run_evolution_experiment,
  run_training_experiment, write_artifact)
from eann_hybrid.harness.tables import format_rmse, render_text_table
from eann_hybrid.network.architecture import parse_architecture
from eann_hybrid.trainers.spec import TrainerKind, TrainerSpec
from eann_hybrid.utils import config as config_module


def _artifact(method, test_rmses, dataset="sine", trainer="LM", max_hidden=4, normalization=None):
  repetitions = [
    RepetitionResult(
      repetition=i,
      seed=100 + i,
      train_rmse=0.1,
      test_rmse=value,
      architecture=f"{i + 1} T",
      trainer="LM(mu_init=0.001)",
      predictions=[0.5, 0.25],
      trace=[(0, 0.3), (1, 0.2)],
    )
    for i, value in enumerate(test_rmses)
  ]
  return RunArtifact(
    method=method,
    dataset=dataset,
    trainer=trainer,
    max_hidden=max_hidden if method == HYBRID else None,
    config={"seed": 0},
    test_targets=[0.4, 0.3],
    repetitions=repetitions,
    normalization=normalization,
  )


def _tiny_experiment(**changes):
  values = dict(dataset="gas-furnace-surrogate", trainers="lm", repetitions=2, population_size=4,
                max_generations=2, max_hidden=2, epochs_per_eval=3, baseline_architecture="2 T",
                baseline_epochs=5)
  values.update(changes)
  return ExperimentConfig(**values)


@pytest.fixture
def no_repo_config(monkeypatch):
  monkeypatch.setattr(config_module, "CONFIG", {})


def test_summary_reports_worst_repetition():
  artifact = _artifact(HYBRID, [0.2, 0.5, 0.5])
  assert artifact.worst.repetition == 1
  assert artifact.best.repetition == 0
  row = artifact.summary_row()
  assert (row.test_rmse, row.architecture, row.repetitions) == (0.5, "2 T", 3)
  assert artifact.name == "sine-hybrid-lm-h4"
  assert _artifact(BASELINE, [0.1]).name == "sine-baseline-lm"


def test_artifact_needs_repetitions():
  with pytest.raises(ArtifactError):
    _artifact(HYBRID, [])


def test_write_and_read_artifact(tmp_path):
  artifact = _artifact(HYBRID, [0.2, 0.5])
  directory = write_artifact(artifact, tmp_path / artifact.name)
  for name in ("config.json", "summary.csv", "summary.txt", "best_genome.json", "predictions.csv",
               "convergence_rep0.csv", "convergence_rep1.csv", "repetitions/rep-1.json"):
    assert (directory / name).is_file(), name
  assert read_artifact(directory) == artifact
  assert (directory / "summary.csv").read_text(encoding="utf-8").splitlines() == [
    "dataset,method,trainer,max_hidden,train_rmse,test_rmse,architecture,repetitions",
    "sine,hybrid,LM,4,0.1,0.5,2 T,2",
  ]
  assert (directory / "convergence_rep0.csv").read_text(encoding="utf-8") == (
    "generation,mean_test_rmse\n0,0.3\n1,0.2\n")


def test_artifact_bytes_are_reproducible(tmp_path):
  first = write_artifact(_artifact(HYBRID, [0.2, 0.5]), tmp_path / "a")
  second = write_artifact(_artifact(HYBRID, [0.2, 0.5]), tmp_path / "b")
  for name in ("config.json", "summary.csv", "predictions.csv", "repetitions/rep-0.json"):
    assert (first / name).read_bytes() == (second / name).read_bytes()


def test_predictions_are_denormalized(tmp_path):
  normalization = {"minimums": [0.0, 0.0, 10.0], "maximums": [1.0, 1.0, 20.0]}
  artifact = _artifact(BASELINE, [0.2], normalization=normalization)
  directory = write_artifact(artifact, tmp_path / "run")
  lines = (directory / "predictions.csv").read_text(encoding="utf-8").splitlines()
  assert lines[0] == "index,desired,predicted,desired_raw,predicted_raw"
  assert lines[1] == "0,0.4,0.5,14.0,15.0"
  assert not (directory / "best_genome.json").exists()


def test_read_artifact_rejects_missing_and_corrupt(tmp_path):
  with pytest.raises(ArtifactError, match="config.json"):
    read_artifact(tmp_path / "nothing")
  directory = write_artifact(_artifact(HYBRID, [0.2]), tmp_path / "run")
  (directory / "repetitions" / "rep-0.json").write_text("{", encoding="utf-8")
  with pytest.raises(ArtifactError, match="corrupt"):
    read_artifact(directory)


def test_merge_attaches_baselines_and_marks_best():
  rows = merge_artifacts([
    _artifact(HYBRID, [0.5], max_hidden=4),
    _artifact(HYBRID, [0.3], max_hidden=16),
    _artifact(BASELINE, [0.4]),
    _artifact(BASELINE, [0.6], trainer="BP"),
    _artifact(SINGLE, [0.01]),
    _artifact(HYBRID, [0.9], dataset="flow"),
  ])
  assert [(r.dataset, r.trainer, r.max_hidden) for r in rows] == [
    ("flow", "LM", 4), ("sine", "BP", None), ("sine", "LM", 16), ("sine", "LM", 4)]
  flow, sine_bp, sine_16, sine_4 = rows
  assert flow.best == HYBRID
  assert sine_bp.baseline_test == 0.6 and sine_bp.hybrid_test is None
  assert sine_16.best == HYBRID
  assert sine_4.baseline_test == 0.4 and sine_4.best == ""

  text = render_report(rows)
  assert text.count("†") == 2
  assert "†0.3000" in text
  assert "†0.9000" in text


def test_baseline_can_win_its_dataset():
  rows = merge_artifacts([_artifact(HYBRID, [0.5]), _artifact(BASELINE, [0.2])])
  assert [r.best for r in rows] == [BASELINE]
  assert "†0.2000" in render_report(rows)


def test_report_csv_reloads(tmp_path):
  rows = merge_artifacts([
    _artifact(HYBRID, [0.123456789], max_hidden=16),
    _artifact(BASELINE, [0.4]),
    _artifact(BASELINE, [0.6], trainer="QNA"),
  ])
  path = tmp_path / "report.csv"
  path.write_text(report_csv(rows), encoding="utf-8")
  assert read_report_csv(path) == rows


def test_read_report_csv_rejects_other_files(tmp_path):
  path = tmp_path / "other.csv"
  path.write_text("a,b\n1,2\n", encoding="utf-8")
  with pytest.raises(ArtifactError):
    read_report_csv(path)


def test_collect_artifacts_searches_one_level(tmp_path):
  root = tmp_path / "runs"
  write_artifact(_artifact(HYBRID, [0.5]), root / "one")
  write_artifact(_artifact(BASELINE, [0.4]), root / "two")
  broken = root / "three"
  broken.mkdir()
  (broken / "config.json").write_text("{}", encoding="utf-8")
  artifacts, errors = collect_artifacts([root])
  assert sorted(a.method for a in artifacts) == [BASELINE, HYBRID]
  assert len(errors) == 1 and "no repetition records" in errors[0]


def test_merge_rejects_two_runs_for_one_row():
  first = _artifact(HYBRID, [0.02], max_hidden=16)
  second = _artifact(HYBRID, [0.01], max_hidden=16)
  with pytest.raises(ArtifactError, match="sine-hybrid-lm-h16"):
    merge_artifacts([first, second, _artifact(BASELINE, [0.3])])
  with pytest.raises(ArtifactError, match="sine-baseline-lm"):
    merge_artifacts([_artifact(BASELINE, [0.3]), _artifact(BASELINE, [0.2])])
  # other sizes and single-network runs do not clash
  rows = merge_artifacts([first, _artifact(HYBRID, [0.01], max_hidden=8),
                          _artifact(SINGLE, [0.5]), _artifact(SINGLE, [0.4])])
  assert [row.max_hidden for row in rows] == [16, 8]


def test_collect_artifacts_lists_duplicates(tmp_path):
  write_artifact(_artifact(HYBRID, [0.02], max_hidden=16), tmp_path / "a")
  write_artifact(_artifact(HYBRID, [0.01], max_hidden=16), tmp_path / "b")
  artifacts, errors = collect_artifacts([tmp_path])
  assert [a.repetitions[0].test_rmse for a in artifacts] == [0.02]
  assert len(errors) == 1
  assert "duplicate of" in errors[0] and "sine-hybrid-lm-h16" in errors[0]
  assert merge_artifacts(artifacts)[0].hybrid_test == 0.02


def test_format_rmse():
  assert format_rmse(None) == "-"
  assert format_rmse(0.0) == "0.0000"
  assert format_rmse(1.23456) == "1.2346"
  assert format_rmse(0.000123) == "1.23e-04"


def test_render_text_table():
  assert render_text_table(("a", "bb"), [["xxx", "y"]]) == "a    bb\n---  --\nxxx  y\n"


def test_experiment_config_defaults():
  config = ExperimentConfig()
  assert config.trainers == ("bp", "scg", "qna", "lm")
  assert config.baseline_architecture == "24 T*"
  assert config.repetitions == 3
  assert config.population_size == 40
  evolution = config.evolution_config(TrainerKind.QNA, 1)
  assert evolution.fixed_trainer is TrainerKind.QNA
  assert evolution.seed == config.repetition_seed(1)
  assert config.repetition_seed(0) != config.repetition_seed(1)


def test_parse_trainer_modes():
  assert parse_trainer_modes("LM, evolved,lm") == ("lm", "evolved")
  assert parse_trainer_modes(["qna"]) == ("qna",)
  with pytest.raises(ConfigurationError):
    parse_trainer_modes("lm,adam")
  with pytest.raises(ConfigurationError):
    parse_trainer_modes(" , ")


@pytest.mark.parametrize("changes, error", [
  ({"repetitions": 0}, ConfigurationError),
  ({"population_size": 1}, ConfigurationError),
  ({"dataset": "sunspots"}, ConfigurationError),
  ({"baseline_architecture": "24 X"}, ArchitectureParseError),
  ({"baseline_epochs": -1}, ConfigurationError),
])
def test_experiment_config_rejects_invalid(changes, error):
  with pytest.raises(error):
    ExperimentConfig(**changes)


def test_load_experiment_config_precedence(tmp_path, monkeypatch):
  monkeypatch.setattr(config_module, "CONFIG", {"harness": {"repetitions": 5, "seed": 1, "log_level": "x"}})
  path = tmp_path / "experiment.yaml"
  path.write_text("seed: 7\nmax_hidden: 4\ntrainers: lm,scg\n", encoding="utf-8")
  config = load_experiment_config(path, seed=9, workers=None)
  assert config.repetitions == 5
  assert config.seed == 9
  assert config.max_hidden == 4
  assert config.workers == 1
  assert config.trainers == ("lm", "scg")


def test_load_experiment_config_rejects_bad_files(tmp_path, no_repo_config):
  unknown = tmp_path / "unknown.yaml"
  unknown.write_text("populaton_size: 10\n", encoding="utf-8")
  with pytest.raises(ConfigurationError, match="populaton_size"):
    load_experiment_config(unknown)
  listing = tmp_path / "list.yaml"
  listing.write_text("- 1\n- 2\n", encoding="utf-8")
  with pytest.raises(ConfigurationError):
    load_experiment_config(listing)
  assert load_experiment_config().seed == 0


def test_prepare_dataset(no_repo_config):
  dataset = prepare_dataset(_tiny_experiment())
  assert dataset.normalization is not None
  train = dataset.columns[:dataset.split_index]
  assert train.min() == 0.0 and train.max() == 1.0
  assert prepare_dataset(_tiny_experiment(normalize=False)).normalization is None
  with pytest.raises(ConfigurationError, match="path"):
    prepare_dataset(_tiny_experiment(dataset="wastewater"))
  with pytest.raises(DatasetError):
    prepare_dataset(_tiny_experiment(dataset="wastewater", dataset_path="missing.csv"))


def test_evolution_experiment(tmp_path, no_repo_config):
  config = _tiny_experiment()
  artifact = run_evolution_experiment(config, "lm")
  assert artifact.method == HYBRID
  assert artifact.name == "gas-furnace-surrogate-hybrid-lm-h2"
  assert artifact.config["trainers"] == ["lm"]
  assert len(artifact.test_targets) == 146
  assert [r.seed for r in artifact.repetitions] == [config.repetition_seed(0), config.repetition_seed(1)]
  for rep in artifact.repetitions:
    assert len(rep.predictions) == 146
    assert [step for step, _ in rep.trace] == [0, 1]
    assert rep.trainer.startswith("LM(")
    assert 1 <= len(parse_architecture(rep.architecture)) <= 2
  assert artifact.summary_row().test_rmse == max(r.test_rmse for r in artifact.repetitions)

  assert run_evolution_experiment(config, "lm") == artifact

  directory = write_artifact(artifact, tmp_path / artifact.name)
  assert read_artifact(directory) == artifact
  saved = Genome.from_dict(artifact.best.genome)
  resumed = run_evolution_experiment(config, "evolved", seed_genomes=[saved])
  assert resumed.name == "gas-furnace-surrogate-hybrid-evolved-h2"
  assert resumed.trainer == "evolved"


def test_baseline_experiment(no_repo_config):
  artifact = run_baseline(_tiny_experiment(), TrainerKind.SCG)
  assert artifact.method == BASELINE
  assert artifact.trainer == "SCG"
  assert artifact.max_hidden is None
  for rep in artifact.repetitions:
    assert rep.architecture == "2 T"
    assert rep.trace_columns == ("epoch", "train_rmse")
    assert len(rep.trace) <= 5
    assert all(step == i + 1 for i, (step, _) in enumerate(rep.trace))
    assert rep.training is not None
    assert np.isfinite(rep.test_rmse)


def test_single_training_experiment(no_repo_config):
  spec = TrainerSpec.default(TrainerKind.LM)
  artifact = run_training_experiment(_tiny_experiment(repetitions=1), "1 T, 1 L*", spec, 4)
  assert artifact.method == SINGLE
  assert artifact.config["architecture"] == "1 T, 1 L*"
  assert artifact.config["epochs"] == 4
  assert artifact.repetitions[0].architecture == "1 T, 1 L*"
  assert merge_artifacts([artifact]) == []


def _published_budget(dataset, **changes):
  values = dict(dataset=dataset, repetitions=3, seed=0)
  values.update(changes)
  return ExperimentConfig(**values)


@pytest.mark.slow
def test_mackey_glass_full_budget_lm():
  artifact = run_evolution_experiment(_published_budget("mackey-glass", max_hidden=16), "lm")
  assert artifact.summary_row().test_rmse <= 0.005


@pytest.mark.slow
def test_gas_furnace_scg_desk_and_full_budget():
  desk = _published_budget("gas-furnace", repetitions=1, population_size=10, max_generations=5,
                           epochs_per_eval=100)
  best = min(r.test_rmse for r in run_evolution_experiment(desk, "scg").repetitions)
  assert best <= 0.08
  full = run_evolution_experiment(_published_budget("gas-furnace", max_hidden=16), "scg")
  assert min(r.test_rmse for r in full.repetitions) <= 0.04


@pytest.mark.slow
@pytest.mark.parametrize("dataset", ["mackey-glass", "gas-furnace"])
@pytest.mark.parametrize("kind", [TrainerKind.LM, TrainerKind.SCG])
def test_hybrid_beats_conventional_baseline(dataset, kind):
  config = _published_budget(dataset, max_hidden=16)
  prepared = prepare_dataset(config)
  hybrid = run_evolution_experiment(config, kind.value.lower(), dataset=prepared)
  baseline = run_baseline(config, kind, dataset=prepared)
  assert baseline.repetitions[0].architecture == "24 T*"
  assert hybrid.summary_row().test_rmse <= baseline.summary_row().test_rmse


@pytest.mark.slow
def test_four_hidden_neurons_do_worse_than_sixteen():
  config = _published_budget("mackey-glass", repetitions=1)
  prepared = prepare_dataset(config)
  small = run_evolution_experiment(replace(config, max_hidden=4), "lm", dataset=prepared)
  large = run_evolution_experiment(replace(config, max_hidden=16), "lm", dataset=prepared)
  assert small.summary_row().test_rmse > large.summary_row().test_rmse
