from .activations import ActivationKind, ACTIVATION_ORDER, activate, derivative
from .architecture import format_architecture, parse_architecture
from .phenotype import (
  EvaluationBatch,
  NetworkPhenotype,
  NetworkShape,
  flatten_params,
  forward,
  jacobian,
  parameter_count,
  predict,
  random_phenotype,
  residuals_and_jacobian,
  rmse,
  sse_and_gradient,
  unflatten_params,
  zero_phenotype,
)

__all__ = [
  'ActivationKind', 'ACTIVATION_ORDER', 'activate', 'derivative',
  'format_architecture', 'parse_architecture',
  'EvaluationBatch', 'NetworkPhenotype', 'NetworkShape',
  'flatten_params', 'forward', 'jacobian', 'parameter_count', 'predict',
  'random_phenotype', 'residuals_and_jacobian', 'rmse', 'sse_and_gradient',
  'unflatten_params', 'zero_phenotype',
]
