import numpy as np

from eann_hybrid.errors import ConfigurationError
from eann_hybrid.trainers.spec import TrainerKind, TrainerSpec

# Early exit: gradient infinity-norm or SSE below these
GRADIENT_TOLERANCE = 1e-10
SSE_TOLERANCE = 1e-14


def is_converged(sse: float, gradient: np.ndarray) -> bool:
  return sse < SSE_TOLERANCE or float(np.max(np.abs(gradient), initial=0.0)) < GRADIENT_TOLERANCE


def check_request(spec: TrainerSpec, kind: TrainerKind, epochs: int):
  if spec.kind is not kind:
    raise ConfigurationError(f"{kind.value} trainer called with a {spec.kind.value} spec")
  if epochs < 0:
    raise ConfigurationError(f"epochs must be >= 0, got {epochs}")


def all_finite(values: np.ndarray) -> bool:
  return bool(np.all(np.isfinite(values)))
