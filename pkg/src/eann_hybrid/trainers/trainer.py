from typing import Callable, Dict

from eann_hybrid.errors import ConfigurationError
from eann_hybrid.network.phenotype import EvaluationBatch, NetworkPhenotype, flatten_params
from eann_hybrid.trainers.backprop import backprop
from eann_hybrid.trainers.levenberg_marquardt import levenberg_marquardt
from eann_hybrid.trainers.problems import LeastSquaresProblem, NetworkProblem
from eann_hybrid.trainers.quasi_newton import quasi_newton
from eann_hybrid.trainers.scg import scaled_conjugate_gradient
from eann_hybrid.trainers.spec import TrainerKind, TrainerSpec, TrainingResult

Optimizer = Callable[[LeastSquaresProblem, object, TrainerSpec, int], TrainingResult]

OPTIMIZERS: Dict[TrainerKind, Optimizer] = {
  TrainerKind.BP: backprop,
  TrainerKind.SCG: scaled_conjugate_gradient,
  TrainerKind.QNA: quasi_newton,
  TrainerKind.LM: levenberg_marquardt,
}


def optimize(problem: LeastSquaresProblem, params, spec: TrainerSpec, epochs: int) -> TrainingResult:
  """Run the trainer named by spec.kind on any least-squares problem"""
  if epochs < 0:
    raise ConfigurationError(f"epochs must be >= 0, got {epochs}")
  return OPTIMIZERS[spec.kind](problem, params, spec, epochs)


def train(net: NetworkPhenotype, batch: EvaluationBatch, spec: TrainerSpec, epochs: int) -> TrainingResult:
  """Fine-tune a network on a batch with the trainer named by spec.kind"""
  return optimize(NetworkProblem(net.shape, batch), flatten_params(net), spec, epochs)


def _train_as(kind: TrainerKind):
  def run(net: NetworkPhenotype, batch: EvaluationBatch, spec: TrainerSpec, epochs: int) -> TrainingResult:
    if spec.kind is not kind:
      raise ConfigurationError(f"train_{kind.value.lower()} called with a {spec.kind.value} spec")
    return train(net, batch, spec, epochs)
  run.__name__ = f"train_{kind.value.lower()}"
  run.__doc__ = f"Fine-tune a network with {kind.value}"
  return run


train_bp = _train_as(TrainerKind.BP)
train_scg = _train_as(TrainerKind.SCG)
train_qna = _train_as(TrainerKind.QNA)
train_lm = _train_as(TrainerKind.LM)
