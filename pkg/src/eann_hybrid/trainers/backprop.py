"""Full-batch gradient descent with momentum."""

import numpy as np

from eann_hybrid.errors import NumericalOverflowError
from eann_hybrid.trainers.common import all_finite, check_request, is_converged
from eann_hybrid.trainers.problems import LeastSquaresProblem
from eann_hybrid.trainers.spec import Termination, TrainerKind, TrainerSpec, TrainingResult
from eann_hybrid.utils.logger import logger


def backprop(problem: LeastSquaresProblem, params, spec: TrainerSpec, epochs: int) -> TrainingResult:
  """
  One epoch = one update  dw_t = -lr * g_t + momentum * dw_{t-1}, where g_t
  is the gradient of SSE/2 divided by the number of patterns.

  BP may oscillate, so the best parameters seen are kept and returned if
  the error becomes non-finite.
  """
  check_request(spec, TrainerKind.BP, epochs)
  lr = spec.value("learning_rate")
  momentum = spec.value("momentum")

  w = np.array(params, dtype=np.float64)
  trace = []
  try:
    sse, grad = problem.sse_and_gradient(w)
  except NumericalOverflowError:
    return TrainingResult(w, trace, 0, Termination.NUMERICAL_FAILURE)

  best_w, best_sse = w.copy(), sse
  velocity = np.zeros_like(w)
  scale = 1.0 / max(problem.n_patterns, 1)
  termination = Termination.BUDGET_EXHAUSTED

  for _ in range(epochs):
    if is_converged(sse, grad):
      termination = Termination.CONVERGED
      break
    velocity = -lr * scale * grad + momentum * velocity
    candidate = w + velocity
    try:
      if not all_finite(candidate):
        raise NumericalOverflowError("non-finite weights")
      sse, grad = problem.sse_and_gradient(candidate)
    except NumericalOverflowError:
      logger.debug(f"BP diverged after {len(trace)} epochs, keeping best SSE {best_sse:.6g}")
      termination = Termination.NUMERICAL_FAILURE
      w = best_w
      break
    w = candidate
    trace.append(problem.rmse_from_sse(sse))
    if sse < best_sse:
      best_w, best_sse = w.copy(), sse

  return TrainingResult(w, trace, len(trace), termination)
