"""
BFGS quasi-Newton training with a backtracking Armijo line search.

Hyperparameters: the first trial step (initial_step), capped so the
relative parameter change stays below max_rel_step; a trial is accepted
when the SSE decrease is at least armijo_c * step * |g.d|, otherwise the
step is multiplied by contraction. One epoch = one line search.
"""

import numpy as np

from eann_hybrid.errors import NumericalOverflowError
from eann_hybrid.trainers.common import all_finite, check_request, is_converged
from eann_hybrid.trainers.linalg import bfgs_inverse_update
from eann_hybrid.trainers.problems import LeastSquaresProblem
from eann_hybrid.trainers.spec import Termination, TrainerKind, TrainerSpec, TrainingResult
from eann_hybrid.utils.logger import logger

MAX_BACKTRACKS = 50


def quasi_newton(problem: LeastSquaresProblem, params, spec: TrainerSpec, epochs: int) -> TrainingResult:
  check_request(spec, TrainerKind.QNA, epochs)
  initial_step = spec.value("initial_step")
  max_rel_step = spec.value("max_rel_step")
  armijo_c = spec.value("armijo_c")
  contraction = spec.value("contraction")

  w = np.array(params, dtype=np.float64)
  trace = []
  try:
    sse, grad = problem.sse_and_gradient(w)
  except NumericalOverflowError:
    return TrainingResult(w, trace, 0, Termination.NUMERICAL_FAILURE)

  identity = np.eye(w.size)
  inverse_hessian = identity.copy()
  fresh = True
  restarts = 0
  rejected = 0
  termination = Termination.BUDGET_EXHAUSTED

  for _ in range(epochs):
    if is_converged(sse, grad):
      termination = Termination.CONVERGED
      break

    direction = -(inverse_hessian @ grad)
    slope = float(np.dot(grad, direction))
    if not slope < 0.0:
      inverse_hessian, fresh = identity.copy(), True
      direction = -grad
      slope = float(np.dot(grad, direction))
      restarts += 1

    norm_d = float(np.linalg.norm(direction))
    step = initial_step
    limit = max_rel_step * max(float(np.linalg.norm(w)), 1.0)
    if step * norm_d > limit:
      step = limit / norm_d

    accepted = False
    for _ in range(MAX_BACKTRACKS):
      candidate = w + step * direction
      try:
        if not all_finite(candidate):
          raise NumericalOverflowError("non-finite weights")
        sse_new, grad_new = problem.sse_and_gradient(candidate)
      except NumericalOverflowError:
        step *= contraction
        continue
      if sse - sse_new >= armijo_c * step * abs(slope):
        accepted = True
        break
      step *= contraction

    if accepted:
      s = candidate - w
      y = grad_new - grad
      if fresh:
        # scale the identity start to the observed curvature
        sy, yy = float(np.dot(s, y)), float(np.dot(y, y))
        if sy > 0.0 and yy > 0.0:
          inverse_hessian = (sy / yy) * identity
      inverse_hessian, updated = bfgs_inverse_update(inverse_hessian, s, y)
      fresh = fresh and not updated
      w, sse, grad = candidate, sse_new, grad_new
    else:
      logger.debug("QNA line search exhausted, resetting the inverse Hessian")
      inverse_hessian, fresh = identity.copy(), True
      restarts += 1
      rejected += 1
    trace.append(problem.rmse_from_sse(sse))

  return TrainingResult(w, trace, len(trace), termination, restarts=restarts, rejected_steps=rejected)
