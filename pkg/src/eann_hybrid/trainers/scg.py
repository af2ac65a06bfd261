"""
Scaled conjugate gradient (Moller).

Curvature along the search direction p comes from a finite difference of
the gradient, s = (g(w + sigma_k p) - g(w)) / sigma_k with
sigma_k = sigma / |p|. The scalar lambda regulates indefiniteness of the
Hessian: it is raised when the quadratic model is poor (comparison
parameter Delta < 0.25) and lowered when it is good (Delta >= 0.75). A step
is accepted only when Delta >= 0, which means the error decreased.

One epoch = one SCG iteration, accepted or not.
"""

import numpy as np

from eann_hybrid.errors import NumericalOverflowError
from eann_hybrid.trainers.common import all_finite, check_request, is_converged
from eann_hybrid.trainers.problems import LeastSquaresProblem
from eann_hybrid.trainers.spec import Termination, TrainerKind, TrainerSpec, TrainingResult
from eann_hybrid.utils.logger import logger

# sigma = 0 is a legal gene value but breaks finite differencing
SIGMA_FLOOR = 1e-8


def scaled_conjugate_gradient(problem: LeastSquaresProblem, params, spec: TrainerSpec, epochs: int) -> TrainingResult:
  check_request(spec, TrainerKind.SCG, epochs)
  sigma = max(spec.value("sigma"), SIGMA_FLOOR)
  lam = spec.value("lambda_init")

  w = np.array(params, dtype=np.float64)
  trace = []
  try:
    sse, grad = problem.sse_and_gradient(w)
  except NumericalOverflowError:
    return TrainingResult(w, trace, 0, Termination.NUMERICAL_FAILURE)

  n_params = w.size
  r = -grad
  p = r.copy()
  success = True
  curvature = 0.0
  since_restart = 0
  restarts = 0
  rejected = 0
  termination = Termination.BUDGET_EXHAUSTED

  for _ in range(epochs):
    if is_converged(sse, grad):
      termination = Termination.CONVERGED
      break

    p2 = float(np.dot(p, p))
    mu = float(np.dot(p, r))
    if success:
      sigma_k = sigma / np.sqrt(p2)
      try:
        _, grad_plus = problem.sse_and_gradient(w + sigma_k * p)
        curvature = float(np.dot(p, (grad_plus - grad) / sigma_k))
      except NumericalOverflowError:
        curvature = float("nan")

    if mu <= 0.0 or not np.isfinite(curvature):
      # degenerate direction: fall back to steepest descent
      logger.debug("SCG restart with steepest descent")
      restarts += 1
      p = r.copy()
      since_restart = 0
      success = True
      trace.append(problem.rmse_from_sse(sse))
      continue

    # delta = p.s + lambda |p|^2
    delta = curvature + lam * p2
    if delta <= 0.0:
      lam_new = 2.0 * (lam - delta / p2)
      delta = -delta + lam * p2
      lam = lam_new

    alpha = mu / delta
    candidate = w + alpha * p
    try:
      if not all_finite(candidate):
        raise NumericalOverflowError("non-finite weights")
      sse_new, grad_new = problem.sse_and_gradient(candidate)
      # Delta = 2 delta (E - E_new) / mu^2 with E = SSE / 2
      comparison = delta * (sse - sse_new) / (mu * mu)
    except NumericalOverflowError:
      comparison = -1.0
    if not np.isfinite(comparison):
      comparison = -1.0

    if comparison >= 0.0:
      w, sse, grad = candidate, sse_new, grad_new
      r_new = -grad
      success = True
      since_restart += 1
      if since_restart % n_params == 0:
        p = r_new.copy()
      else:
        beta = (float(np.dot(r_new, r_new)) - float(np.dot(r_new, r))) / mu
        p = r_new + beta * p
      r = r_new
      if comparison >= 0.75:
        lam = 0.25 * lam
    else:
      success = False
      rejected += 1

    if comparison < 0.25:
      lam = lam + delta * (1.0 - comparison) / p2

    trace.append(problem.rmse_from_sse(sse))

  return TrainingResult(w, trace, len(trace), termination, restarts=restarts, rejected_steps=rejected)
