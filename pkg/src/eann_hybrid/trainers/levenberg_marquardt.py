"""
Levenberg-Marquardt: solve (J^T J + mu I) delta = -J^T e.

mu starts at mu_init, is divided by 10 after an accepted step (SSE went
down) and multiplied by 10 after a rejection, in which case the step is
discarded and re-solved within the same epoch. Past MU_MAX the trust region
has collapsed and training stops as converged.
"""

import numpy as np

from eann_hybrid.errors import NumericalOverflowError
from eann_hybrid.trainers.common import all_finite, check_request, is_converged
from eann_hybrid.trainers.linalg import lm_step
from eann_hybrid.trainers.problems import LeastSquaresProblem
from eann_hybrid.trainers.spec import Termination, TrainerKind, TrainerSpec, TrainingResult
from eann_hybrid.utils.logger import logger

DAMPING_FACTOR = 10.0
MU_MAX = 1e10


def levenberg_marquardt(problem: LeastSquaresProblem, params, spec: TrainerSpec, epochs: int) -> TrainingResult:
  check_request(spec, TrainerKind.LM, epochs)
  mu = spec.value("mu_init")

  w = np.array(params, dtype=np.float64)
  trace = []
  try:
    residuals, jac = problem.residuals_and_jacobian(w)
  except NumericalOverflowError:
    return TrainingResult(w, trace, 0, Termination.NUMERICAL_FAILURE)
  sse = float(np.dot(residuals, residuals))
  rejected = 0
  termination = Termination.BUDGET_EXHAUSTED

  for _ in range(epochs):
    if is_converged(sse, jac.T @ residuals):
      termination = Termination.CONVERGED
      break

    accepted = False
    while mu <= MU_MAX:
      try:
        delta = lm_step(jac, residuals, mu)
      except np.linalg.LinAlgError:
        mu *= DAMPING_FACTOR
        continue
      candidate = w + delta
      try:
        if not all_finite(candidate):
          raise NumericalOverflowError("non-finite weights")
        sse_new = problem.sse(candidate)
      except NumericalOverflowError:
        sse_new = np.inf
      if sse_new < sse:
        mu /= DAMPING_FACTOR
        accepted = True
        break
      mu *= DAMPING_FACTOR
      rejected += 1

    if not accepted:
      logger.debug(f"LM damping exceeded {MU_MAX:.0e}, stopping")
      termination = Termination.CONVERGED
      break

    try:
      residuals, jac = problem.residuals_and_jacobian(candidate)
    except NumericalOverflowError:
      termination = Termination.NUMERICAL_FAILURE
      break
    w = candidate
    sse = float(np.dot(residuals, residuals))
    trace.append(problem.rmse_from_sse(sse))

  return TrainingResult(w, trace, len(trace), termination, rejected_steps=rejected)
