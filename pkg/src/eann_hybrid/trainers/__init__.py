from .spec import (
  MAX_PARAMETERS,
  PARAMETER_RANGES,
  ParameterRange,
  Termination,
  TrainerKind,
  TrainerSpec,
  TrainingResult,
)
from .problems import LeastSquaresProblem, LinearLeastSquares, NetworkProblem, least_squares_solution
from .linalg import bfgs_inverse_update, lm_step, solve_spd
from .trainer import optimize, train, train_bp, train_lm, train_qna, train_scg

__all__ = [
  'MAX_PARAMETERS', 'PARAMETER_RANGES', 'ParameterRange', 'Termination',
  'TrainerKind', 'TrainerSpec', 'TrainingResult',
  'LeastSquaresProblem', 'LinearLeastSquares', 'NetworkProblem', 'least_squares_solution',
  'bfgs_inverse_update', 'lm_step', 'solve_spd',
  'optimize', 'train', 'train_bp', 'train_lm', 'train_qna', 'train_scg',
]
