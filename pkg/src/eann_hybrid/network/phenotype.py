"""
Single-hidden-layer feedforward network with a linear output neuron.

Canonical flat parameter ordering (weights of the same node together):
  for each hidden neuron j: input weights w_j[0..n-1], then bias b_j
  then output weights v[0..h-1]
  then output bias c
so W = h * (n + 1) + h + 1.
"""

from dataclasses import dataclass
from typing import Tuple
import numpy as np

from eann_hybrid.errors import NumericalOverflowError, ShapeMismatchError
from eann_hybrid.network.activations import ActivationKind, activate_columns
from eann_hybrid.network.architecture import format_architecture


def _frozen(array, shape=None) -> np.ndarray:
  out = np.array(array, dtype=np.float64)
  if shape is not None and out.shape != shape:
    raise ShapeMismatchError(f"expected shape {shape}, got {out.shape}")
  out.setflags(write=False)
  return out


@dataclass(frozen=True)
class NetworkShape:
  """Everything but the numbers: input width and hidden activation tags"""
  n_inputs: int
  activations: Tuple[ActivationKind, ...]

  def __post_init__(self):
    object.__setattr__(self, "activations", tuple(self.activations))
    if self.n_inputs < 1:
      raise ShapeMismatchError(f"n_inputs must be >= 1, got {self.n_inputs}")
    if len(self.activations) < 1:
      raise ShapeMismatchError("a network needs at least one hidden neuron")

  @property
  def n_hidden(self) -> int:
    return len(self.activations)

  @property
  def n_params(self) -> int:
    return parameter_count(self.n_inputs, self.n_hidden)


def parameter_count(n_inputs: int, n_hidden: int) -> int:
  return n_hidden * (n_inputs + 1) + n_hidden + 1


@dataclass(frozen=True, eq=False)
class NetworkPhenotype:
  """Decoded network: immutable weights plus per-neuron activation tags"""
  n_inputs: int
  activations: Tuple[ActivationKind, ...]
  hidden_weights: np.ndarray   # h x n_inputs
  hidden_biases: np.ndarray    # h
  output_weights: np.ndarray   # h
  output_bias: float

  def __post_init__(self):
    shape = NetworkShape(self.n_inputs, tuple(self.activations))
    h = shape.n_hidden
    object.__setattr__(self, "activations", shape.activations)
    object.__setattr__(self, "hidden_weights", _frozen(self.hidden_weights, (h, self.n_inputs)))
    object.__setattr__(self, "hidden_biases", _frozen(self.hidden_biases, (h,)))
    object.__setattr__(self, "output_weights", _frozen(self.output_weights, (h,)))
    object.__setattr__(self, "output_bias", float(self.output_bias))
    if not (np.all(np.isfinite(self.hidden_weights)) and np.all(np.isfinite(self.hidden_biases))
            and np.all(np.isfinite(self.output_weights)) and np.isfinite(self.output_bias)):
      raise NumericalOverflowError("network weights must be finite")

  @property
  def shape(self) -> NetworkShape:
    return NetworkShape(self.n_inputs, self.activations)

  @property
  def n_hidden(self) -> int:
    return len(self.activations)

  @property
  def n_params(self) -> int:
    return parameter_count(self.n_inputs, self.n_hidden)

  @property
  def architecture(self) -> str:
    return format_architecture(self.activations)

  @property
  def hidden(self) -> Tuple[Tuple[ActivationKind, np.ndarray, float], ...]:
    """Per-neuron view: (activation, input weights, bias)"""
    return tuple(
      (kind, self.hidden_weights[j], float(self.hidden_biases[j]))
      for j, kind in enumerate(self.activations)
    )

  def __eq__(self, other) -> bool:
    if not isinstance(other, NetworkPhenotype):
      return NotImplemented
    return (self.n_inputs == other.n_inputs
            and self.activations == other.activations
            and np.array_equal(self.hidden_weights, other.hidden_weights)
            and np.array_equal(self.hidden_biases, other.hidden_biases)
            and np.array_equal(self.output_weights, other.output_weights)
            and self.output_bias == other.output_bias)

  __hash__ = None


@dataclass(frozen=True, eq=False)
class EvaluationBatch:
  """P input patterns with their scalar targets"""
  inputs: np.ndarray   # P x n_inputs
  targets: np.ndarray  # P

  def __post_init__(self):
    inputs = np.array(self.inputs, dtype=np.float64)
    if inputs.ndim == 1:
      inputs = inputs.reshape(-1, 1)
    targets = np.array(self.targets, dtype=np.float64).reshape(-1)
    if inputs.ndim != 2 or inputs.shape[0] < 1:
      raise ShapeMismatchError(f"inputs must be a non-empty P x d matrix, got shape {inputs.shape}")
    if targets.shape[0] != inputs.shape[0]:
      raise ShapeMismatchError(
        f"{inputs.shape[0]} input rows but {targets.shape[0]} targets")
    inputs.setflags(write=False)
    targets.setflags(write=False)
    object.__setattr__(self, "inputs", inputs)
    object.__setattr__(self, "targets", targets)

  @property
  def n_patterns(self) -> int:
    return self.inputs.shape[0]

  @property
  def n_inputs(self) -> int:
    return self.inputs.shape[1]

  def repeated(self, times: int) -> "EvaluationBatch":
    return EvaluationBatch(np.tile(self.inputs, (times, 1)), np.tile(self.targets, times))


def _check_batch(net: NetworkPhenotype, batch: EvaluationBatch):
  if batch.n_inputs != net.n_inputs:
    raise ShapeMismatchError(
      f"batch rows have {batch.n_inputs} columns, network expects {net.n_inputs}")


def _hidden_layer(net: NetworkPhenotype, inputs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
  with np.errstate(over="ignore", invalid="ignore"):
    z = inputs @ net.hidden_weights.T + net.hidden_biases
  return activate_columns(net.activations, z)


def predict(net: NetworkPhenotype, inputs) -> np.ndarray:
  """Network outputs for a P x n_inputs matrix"""
  inputs = np.asarray(inputs, dtype=np.float64)
  if inputs.ndim != 2 or inputs.shape[1] != net.n_inputs:
    raise ShapeMismatchError(
      f"expected a P x {net.n_inputs} matrix, got shape {inputs.shape}")
  a, _ = _hidden_layer(net, inputs)
  return a @ net.output_weights + net.output_bias


def forward(net: NetworkPhenotype, x) -> float:
  """Network output for one input vector"""
  x = np.asarray(x, dtype=np.float64)
  if x.ndim != 1 or x.shape[0] != net.n_inputs:
    raise ShapeMismatchError(
      f"input vector has length {x.size}, network expects {net.n_inputs}")
  return float(predict(net, x.reshape(1, -1))[0])


def _residuals(net: NetworkPhenotype, batch: EvaluationBatch):
  _check_batch(net, batch)
  a, da = _hidden_layer(net, batch.inputs)
  with np.errstate(over="ignore", invalid="ignore"):
    e = a @ net.output_weights + net.output_bias - batch.targets
  if not np.all(np.isfinite(e)):
    raise NumericalOverflowError("non-finite network output")
  return a, da, e


def rmse(net: NetworkPhenotype, batch: EvaluationBatch) -> float:
  _, _, e = _residuals(net, batch)
  return float(np.sqrt(np.dot(e, e) / batch.n_patterns))


def sse_and_gradient(net: NetworkPhenotype, batch: EvaluationBatch) -> Tuple[float, np.ndarray]:
  """
  Sum of squared errors and the gradient of SSE/2 in canonical ordering.

  Raises NumericalOverflowError when any intermediate is non-finite.
  """
  a, da, e = _residuals(net, batch)
  with np.errstate(over="ignore", invalid="ignore"):
    sse = float(np.dot(e, e))
    delta = (e[:, None] * net.output_weights[None, :]) * da   # P x h
    grad_w = delta.T @ batch.inputs                           # h x n
    grad_b = delta.sum(axis=0)
    grad_v = a.T @ e
    grad_c = e.sum()
  hidden_block = np.hstack([grad_w, grad_b[:, None]]).reshape(-1)
  gradient = np.concatenate([hidden_block, grad_v, [grad_c]])
  if not (np.isfinite(sse) and np.all(np.isfinite(gradient))):
    raise NumericalOverflowError("non-finite error or gradient")
  return sse, gradient


def residuals_and_jacobian(net: NetworkPhenotype, batch: EvaluationBatch) -> Tuple[np.ndarray, np.ndarray]:
  """Residual vector e (P) and Jacobian de/dw (P x W)"""
  a, da, e = _residuals(net, batch)
  p = batch.n_patterns
  with np.errstate(over="ignore", invalid="ignore"):
    scaled = da * net.output_weights[None, :]                          # P x h
    augmented = np.hstack([batch.inputs, np.ones((p, 1))])             # P x (n+1)
    hidden_block = (scaled[:, :, None] * augmented[:, None, :]).reshape(p, -1)
  jac = np.hstack([hidden_block, a, np.ones((p, 1))])
  if not np.all(np.isfinite(jac)):
    raise NumericalOverflowError("non-finite Jacobian entry")
  return e, jac


def jacobian(net: NetworkPhenotype, batch: EvaluationBatch) -> np.ndarray:
  """Per-pattern Jacobian of residuals e_p = forward(x_p) - t_p"""
  return residuals_and_jacobian(net, batch)[1]


def flatten_params(net: NetworkPhenotype) -> np.ndarray:
  hidden_block = np.hstack([net.hidden_weights, net.hidden_biases[:, None]]).reshape(-1)
  return np.concatenate([hidden_block, net.output_weights, [net.output_bias]])


def unflatten_params(shape: NetworkShape, vector) -> NetworkPhenotype:
  vector = np.asarray(vector, dtype=np.float64).reshape(-1)
  if vector.shape[0] != shape.n_params:
    raise ShapeMismatchError(
      f"parameter vector has length {vector.shape[0]}, shape needs {shape.n_params}")
  n, h = shape.n_inputs, shape.n_hidden
  split = h * (n + 1)
  hidden_block = vector[:split].reshape(h, n + 1)
  return NetworkPhenotype(
    n_inputs=n,
    activations=shape.activations,
    hidden_weights=hidden_block[:, :n],
    hidden_biases=hidden_block[:, n],
    output_weights=vector[split:split + h],
    output_bias=float(vector[-1]),
  )


def random_phenotype(
    rng: np.random.Generator,
    shape: NetworkShape,
    init_range: float = 0.3) -> NetworkPhenotype:
  """Network with every parameter uniform on [-init_range, +init_range]"""
  return unflatten_params(shape, rng.uniform(-init_range, init_range, size=shape.n_params))


def zero_phenotype(shape: NetworkShape) -> NetworkPhenotype:
  return unflatten_params(shape, np.zeros(shape.n_params))

