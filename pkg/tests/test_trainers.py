import numpy as np
import pytest

from eann_hybrid.datasets import embed_mackey, mackey_glass_generate, normalize
from eann_hybrid.errors import ConfigurationError, NumericalOverflowError
from eann_hybrid.network.activations import ActivationKind
from eann_hybrid.network.phenotype import EvaluationBatch, NetworkShape, flatten_params, random_phenotype
from eann_hybrid.trainers import (
  PARAMETER_RANGES, LinearLeastSquares, Termination, TrainerKind, TrainerSpec,
  bfgs_inverse_update, lm_step, optimize, train, train_bp, train_lm)

SPECS = [TrainerSpec.default(kind) for kind in TrainerKind]


def _linear_problem():
  x = np.linspace(-1.0, 1.0, 10)
  design = np.column_stack([x, np.ones_like(x)])
  targets = 0.7 * x - 0.2 + 0.05 * np.sin(7.0 * x)
  return LinearLeastSquares(design, targets)


class FailingProblem(LinearLeastSquares):
  """Linear problem whose error evaluation overflows after a number of calls"""

  def __init__(self, design, targets, fail_after):
    super().__init__(design, targets)
    self.fail_after = fail_after
    self.calls = 0

  def sse_and_gradient(self, params):
    self.calls += 1
    if self.fail_after is not None and self.calls > self.fail_after:
      raise NumericalOverflowError("forced overflow")
    return super().sse_and_gradient(params)


def test_spec_ranges_are_enforced():
  with pytest.raises(ConfigurationError, match="learning_rate"):
    TrainerSpec.create(TrainerKind.BP, learning_rate=0.3)
  with pytest.raises(ConfigurationError):
    TrainerSpec.create(TrainerKind.LM, damping=0.1)
  with pytest.raises(ConfigurationError):
    TrainerSpec(TrainerKind.QNA, (1.0, 0.5))
  assert TrainerSpec.create(TrainerKind.LM, strict=False, mu_init=1.0).value("mu_init") == 1.0


def test_parameter_fraction_stays_in_range():
  for ranges in PARAMETER_RANGES.values():
    for rng in ranges:
      assert rng.from_fraction(0.0) == rng.low
      assert rng.low <= rng.from_fraction(1.0) <= rng.high


def test_trainer_kind_parse():
  assert TrainerKind.parse(" lm ") is TrainerKind.LM
  assert TrainerKind.from_index(2) is TrainerKind.QNA
  with pytest.raises(ConfigurationError):
    TrainerKind.parse("adam")


def test_bp_single_update_by_hand():
  problem = LinearLeastSquares([[1.0]], [2.0])
  spec = TrainerSpec.create(TrainerKind.BP, strict=False, learning_rate=0.1, momentum=0.0)
  result = optimize(problem, np.array([0.0]), spec, 1)
  assert result.final_params[0] == pytest.approx(0.2)
  assert result.epoch_rmse == pytest.approx([1.8])
  assert result.termination is Termination.BUDGET_EXHAUSTED


def test_bp_stationary_start_is_converged():
  problem = LinearLeastSquares([[1.0]], [2.0])
  result = optimize(problem, np.array([2.0]), TrainerSpec.default(TrainerKind.BP), 10)
  assert result.termination is Termination.CONVERGED
  assert result.epochs_used == 0
  np.testing.assert_array_equal(result.final_params, [2.0])


def test_bp_overflow_returns_best_parameters():
  base = _linear_problem()
  problem = FailingProblem(base.design, base.targets, fail_after=3)
  spec = TrainerSpec.default(TrainerKind.BP)
  result = optimize(problem, np.zeros(2), spec, 20)
  assert result.termination is Termination.NUMERICAL_FAILURE
  assert result.epochs_used == 2
  problem.fail_after = None
  assert problem.rmse_from_sse(problem.sse(result.final_params)) == pytest.approx(min(result.epoch_rmse))


def test_lm_single_step_by_hand():
  problem = LinearLeastSquares([[1.0]], [2.0])
  spec = TrainerSpec.create(TrainerKind.LM, strict=False, mu_init=1.0)
  result = optimize(problem, np.array([0.0]), spec, 1)
  assert result.final_params[0] == pytest.approx(1.0)
  assert result.epoch_rmse == pytest.approx([1.0])
  assert result.rejected_steps == 0


def test_lm_zero_residuals_converge():
  problem = LinearLeastSquares([[1.0], [2.0]], [2.0, 4.0])
  result = optimize(problem, np.array([2.0]), TrainerSpec.default(TrainerKind.LM), 5)
  assert result.termination is Termination.CONVERGED
  assert result.epoch_rmse == []


def test_lm_undamped_step_hits_least_squares_optimum():
  problem = _linear_problem()
  spec = TrainerSpec.create(TrainerKind.LM, strict=False, mu_init=1e-12)
  result = optimize(problem, np.array([0.3, 0.3]), spec, 1)
  np.testing.assert_allclose(result.final_params, problem.solution(), atol=1e-8)


def test_heavy_damping_vanishes_step():
  rng = np.random.default_rng(3)
  jac = rng.normal(size=(12, 5))
  residuals = rng.normal(size=12)
  step = lm_step(jac, residuals, 1e12)
  assert np.linalg.norm(step) < 1e-9 * np.linalg.norm(jac.T @ residuals)


def test_bfgs_skips_update_without_positive_curvature():
  inverse_hessian = np.eye(3)
  updated, applied = bfgs_inverse_update(inverse_hessian, np.array([1.0, 0.0, 0.0]), np.array([-1.0, 0.0, 0.0]))
  assert not applied
  assert updated is inverse_hessian


def test_bfgs_update_satisfies_secant_condition():
  s = np.array([0.5, -0.2, 0.1])
  y = np.array([1.0, -0.1, 0.3])
  updated, applied = bfgs_inverse_update(np.eye(3), s, y)
  assert applied
  np.testing.assert_allclose(updated @ y, s, atol=1e-12)


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.kind.value)
def test_trainers_reach_least_squares_solution(spec):
  problem = _linear_problem()
  result = optimize(problem, np.array([0.2, 0.1]), spec, 2000)
  np.testing.assert_allclose(result.final_params, problem.solution(), atol=1e-5)
  optimum = problem.sse(problem.solution())
  assert problem.sse(result.final_params) - optimum < 1e-10


def test_scg_quadratic_converges_quickly():
  problem = _linear_problem()
  result = optimize(problem, np.zeros(2), TrainerSpec.default(TrainerKind.SCG), 2 * problem.n_params)
  np.testing.assert_allclose(result.final_params, problem.solution(), atol=1e-6)


def test_scg_accepts_zero_sigma():
  problem = _linear_problem()
  spec = TrainerSpec.create(TrainerKind.SCG, sigma=0.0, lambda_init=0.0)
  result = optimize(problem, np.zeros(2), spec, 50)
  assert np.all(np.isfinite(result.final_params))
  np.testing.assert_allclose(result.final_params, problem.solution(), atol=1e-5)


@pytest.mark.parametrize("kind", [TrainerKind.SCG, TrainerKind.QNA, TrainerKind.LM])
def test_accepted_error_never_increases(kind, small_net, small_batch):
  result = train(small_net, small_batch, TrainerSpec.default(kind), 40)
  assert result.epochs_used == len(result.epoch_rmse)
  assert np.all(np.diff(result.epoch_rmse) <= 0.0)


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.kind.value)
def test_training_is_deterministic(spec, small_net, small_batch):
  assert train(small_net, small_batch, spec, 25) == train(small_net, small_batch, spec, 25)


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.kind.value)
def test_zero_epochs_returns_initial_params(spec, small_net, small_batch):
  result = train(small_net, small_batch, spec, 0)
  np.testing.assert_array_equal(result.final_params, flatten_params(small_net))
  assert result.epoch_rmse == []
  assert result.epochs_used == 0


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.kind.value)
def test_training_returns_finite_trace(spec, small_net, small_batch):
  result = train(small_net, small_batch, spec, 50)
  assert np.all(np.isfinite(result.final_params))
  assert result.final_rmse is not None
  assert all(value >= 0.0 for value in result.epoch_rmse)


def test_dispatch_matches_named_trainer(small_net, small_batch):
  spec = TrainerSpec.default(TrainerKind.LM)
  assert train(small_net, small_batch, spec, 10) == train_lm(small_net, small_batch, spec, 10)


def test_named_trainer_rejects_other_kind(small_net, small_batch):
  with pytest.raises(ConfigurationError):
    train_bp(small_net, small_batch, TrainerSpec.default(TrainerKind.LM), 5)
  with pytest.raises(ConfigurationError):
    train(small_net, small_batch, TrainerSpec.default(TrainerKind.BP), -1)


def test_qna_quadratic_converges_quickly():
  problem = _linear_problem()
  result = optimize(problem, np.zeros(2), TrainerSpec.default(TrainerKind.QNA), problem.n_params + 5)
  np.testing.assert_allclose(result.final_params, problem.solution(), atol=1e-6)


@pytest.mark.parametrize("seed", range(20))
def test_random_linear_instances_reach_closed_form(seed):
  rng = np.random.default_rng(seed)
  design = np.column_stack([rng.uniform(-1.0, 1.0, size=(40, 2)), np.ones(40)])
  targets = design @ rng.uniform(-1.0, 1.0, size=3) + 0.1 * rng.normal(size=40)
  problem = LinearLeastSquares(design, targets)
  start = rng.uniform(-0.5, 0.5, size=3)
  for spec in SPECS:
    result = optimize(problem, start, spec, 4000)
    np.testing.assert_allclose(result.final_params, problem.solution(), atol=1e-5,
                               err_msg=spec.kind.value)


@pytest.mark.parametrize("seed", range(20))
@pytest.mark.parametrize("kind", [TrainerKind.SCG, TrainerKind.QNA, TrainerKind.LM])
def test_accepted_error_never_increases_across_seeds(kind, seed):
  rng = np.random.default_rng(seed)
  shape = NetworkShape(3, (ActivationKind.T, ActivationKind.S, ActivationKind.L, ActivationKind.TSTAR))
  batch = EvaluationBatch(rng.uniform(-1.0, 1.0, size=(30, 3)), rng.uniform(-0.5, 0.5, size=30))
  result = train(random_phenotype(rng, shape, 0.5), batch, TrainerSpec.default(kind), 30)
  assert np.all(np.diff(result.epoch_rmse) <= 0.0)


def test_bp_error_mostly_falls_on_mackey_glass():
  batch = normalize(embed_mackey(mackey_glass_generate())).train_batch()
  net = random_phenotype(np.random.default_rng(7), NetworkShape(4, (ActivationKind.T,) * 8), 0.3)
  result = train(net, batch, TrainerSpec.default(TrainerKind.BP), 100)
  trace = np.asarray(result.epoch_rmse)
  assert result.termination is Termination.BUDGET_EXHAUSTED
  assert np.all(np.isfinite(trace))
  assert np.mean(np.diff(trace) <= 0.0) > 0.5
  assert trace[-1] < trace[0]
