"""
Least-squares problems the trainers minimize.

Every trainer works on E(w) = SSE(w) / 2 through this small interface, so
the same code fine-tunes a decoded network or solves a linear model whose
closed-form optimum is known.
"""

from abc import ABC, abstractmethod
from typing import Tuple
import numpy as np

from eann_hybrid.errors import NumericalOverflowError, ShapeMismatchError
from eann_hybrid.network.phenotype import (
  EvaluationBatch,
  NetworkShape,
  residuals_and_jacobian,
  sse_and_gradient,
  unflatten_params,
)


class LeastSquaresProblem(ABC):
  """Residual model e(w) with P residuals and W parameters"""

  @property
  @abstractmethod
  def n_params(self) -> int:
    pass

  @property
  @abstractmethod
  def n_patterns(self) -> int:
    pass

  @abstractmethod
  def sse_and_gradient(self, params: np.ndarray) -> Tuple[float, np.ndarray]:
    """SSE and the gradient of SSE/2"""
    pass

  @abstractmethod
  def residuals_and_jacobian(self, params: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    pass

  def sse(self, params: np.ndarray) -> float:
    return self.sse_and_gradient(params)[0]

  def rmse_from_sse(self, sse: float) -> float:
    return float(np.sqrt(sse / self.n_patterns))


class NetworkProblem(LeastSquaresProblem):
  """Training error of one network shape on a fixed batch"""

  def __init__(self, shape: NetworkShape, batch: EvaluationBatch):
    if batch.n_inputs != shape.n_inputs:
      raise ShapeMismatchError(
        f"batch rows have {batch.n_inputs} columns, network expects {shape.n_inputs}")
    self.shape = shape
    self.batch = batch

  @property
  def n_params(self) -> int:
    return self.shape.n_params

  @property
  def n_patterns(self) -> int:
    return self.batch.n_patterns

  def sse_and_gradient(self, params):
    return sse_and_gradient(unflatten_params(self.shape, params), self.batch)

  def residuals_and_jacobian(self, params):
    return residuals_and_jacobian(unflatten_params(self.shape, params), self.batch)


class LinearLeastSquares(LeastSquaresProblem):
  """e(w) = X w - t, the linear-in-parameters case"""

  def __init__(self, design, targets):
    self.design = np.array(design, dtype=np.float64)
    if self.design.ndim == 1:
      self.design = self.design.reshape(-1, 1)
    self.targets = np.array(targets, dtype=np.float64).reshape(-1)
    if self.design.shape[0] != self.targets.shape[0]:
      raise ShapeMismatchError(
        f"{self.design.shape[0]} design rows but {self.targets.shape[0]} targets")

  @property
  def n_params(self) -> int:
    return self.design.shape[1]

  @property
  def n_patterns(self) -> int:
    return self.design.shape[0]

  def _residuals(self, params) -> np.ndarray:
    params = np.asarray(params, dtype=np.float64)
    if params.shape != (self.n_params,):
      raise ShapeMismatchError(f"expected {self.n_params} parameters, got {params.shape}")
    with np.errstate(over="ignore", invalid="ignore"):
      e = self.design @ params - self.targets
    if not np.all(np.isfinite(e)):
      raise NumericalOverflowError("non-finite residual")
    return e

  def sse_and_gradient(self, params):
    e = self._residuals(params)
    return float(np.dot(e, e)), self.design.T @ e

  def residuals_and_jacobian(self, params):
    return self._residuals(params), self.design.copy()

  def solution(self) -> np.ndarray:
    return least_squares_solution(self.design, self.targets)


def least_squares_solution(design, targets) -> np.ndarray:
  """Closed-form minimizer of |X w - t|^2 via the normal equations"""
  design = np.asarray(design, dtype=np.float64)
  targets = np.asarray(targets, dtype=np.float64)
  gram = design.T @ design
  return np.linalg.solve(gram, design.T @ targets)
