"""Dense linear algebra for W up to about a hundred parameters."""

from typing import Tuple
import numpy as np
import scipy.linalg as la

from eann_hybrid.utils.logger import logger

_BOOST_ATTEMPTS = 6


def solve_spd(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
  """
  Solve A x = b for symmetric positive (semi)definite A by Cholesky.

  When the factorization fails the diagonal is boosted by growing multiples
  of its scale; raises numpy.linalg.LinAlgError if every attempt fails.
  """
  matrix = np.asarray(matrix, dtype=np.float64)
  if not np.all(np.isfinite(matrix)) or not np.all(np.isfinite(rhs)):
    raise np.linalg.LinAlgError("non-finite linear system")
  try:
    return la.cho_solve(la.cho_factor(matrix, lower=True, check_finite=False), rhs, check_finite=False)
  except la.LinAlgError:
    pass
  scale = max(float(np.max(np.abs(np.diag(matrix)))), 1.0)
  eye = np.eye(matrix.shape[0])
  for attempt in range(_BOOST_ATTEMPTS):
    boost = scale * 1e-12 * 10.0 ** (2 * attempt)
    try:
      factor = la.cho_factor(matrix + boost * eye, lower=True, check_finite=False)
      logger.debug(f"Cholesky needed a diagonal boost of {boost:.3g}")
      return la.cho_solve(factor, rhs, check_finite=False)
    except la.LinAlgError:
      continue
  raise np.linalg.LinAlgError("matrix is not positive definite even after diagonal boosting")


def lm_step(jac: np.ndarray, residuals: np.ndarray, mu: float) -> np.ndarray:
  """Damped Gauss-Newton step: solve (J^T J + mu I) delta = -J^T e"""
  gram = jac.T @ jac
  gram[np.diag_indices_from(gram)] += mu
  return solve_spd(gram, -(jac.T @ residuals))


def bfgs_inverse_update(inverse_hessian: np.ndarray, s: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, bool]:
  """
  BFGS update of an inverse-Hessian approximation.

  Returns (H, updated). The update is skipped, and H returned unchanged,
  when the curvature condition s.y > 0 fails.
  """
  sy = float(np.dot(s, y))
  if not np.isfinite(sy) or sy <= 1e-12 * np.linalg.norm(s) * np.linalg.norm(y):
    return inverse_hessian, False
  rho = 1.0 / sy
  hy = inverse_hessian @ y
  updated = (inverse_hessian
             - rho * (np.outer(s, hy) + np.outer(hy, s))
             + (rho * rho * float(np.dot(y, hy)) + rho) * np.outer(s, s))
  # keep it exactly symmetric
  updated = 0.5 * (updated + updated.T)
  return updated, True
