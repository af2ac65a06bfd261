"""
Fixed-length binary chromosome.

Segments, in order:
  alg      2 bits             trainer kind (BP, SCG, QNA, LM)
  params   4 x 8 bits         trainer hyperparameters, linear in their ranges
  arch     5 bits             hidden count h = 1 + floor(v * (M - 1) / 31)
  act      M x 3 bits         activation per hidden slot, value mod 5
  weights  W_max x 16 bits    weights, linear in [-8, +8]

M is max_hidden. The weight segment holds max_hidden complete hidden slots
(n_inputs weights then bias each), then M output weights, then the output
bias. A genome with h active neurons uses the first h slots, the first h
output weights and the bias; everything else is carried along unused.
Integers are read most significant bit first.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, Optional, Tuple
import numpy as np

from eann_hybrid.errors import ConfigurationError, ShapeMismatchError
from eann_hybrid.network.activations import ActivationKind
from eann_hybrid.network.phenotype import NetworkPhenotype, NetworkShape, flatten_params, unflatten_params
from eann_hybrid.trainers.spec import MAX_PARAMETERS, PARAMETER_RANGES, TrainerKind, TrainerSpec

ALG_BITS = 2
PARAM_BITS = 8
ARCH_BITS = 5
ACT_BITS = 3
WEIGHT_BITS = 16
WEIGHT_LIMIT = 8.0
MAX_HIDDEN_LIMIT = 2 ** ARCH_BITS

PARAM_LEVELS = 2 ** PARAM_BITS - 1
ARCH_LEVELS = 2 ** ARCH_BITS - 1
WEIGHT_LEVELS = 2 ** WEIGHT_BITS - 1

SEGMENTS = ("alg", "params", "arch", "act", "weights")


def _weights_to_ints(values: np.ndarray) -> np.ndarray:
  return np.rint((values + WEIGHT_LIMIT) / (2.0 * WEIGHT_LIMIT) * WEIGHT_LEVELS).astype(np.int64)


def _ints_to_weights(ints: np.ndarray) -> np.ndarray:
  return -WEIGHT_LIMIT + 2.0 * WEIGHT_LIMIT * ints / WEIGHT_LEVELS


def _to_ints(bits: np.ndarray, width: int) -> np.ndarray:
  powers = 1 << np.arange(width - 1, -1, -1, dtype=np.int64)
  return bits.reshape(-1, width).astype(np.int64) @ powers


def _to_bits(ints, width: int) -> np.ndarray:
  ints = np.asarray(ints, dtype=np.int64).reshape(-1, 1)
  shifts = np.arange(width - 1, -1, -1, dtype=np.int64)
  return ((ints >> shifts) & 1).astype(np.uint8).reshape(-1)


@dataclass(frozen=True)
class GenomeLayout:
  """Bit offsets of every segment for a given (n_inputs, max_hidden)"""
  n_inputs: int
  max_hidden: int

  def __post_init__(self):
    if self.n_inputs < 1:
      raise ConfigurationError(f"n_inputs must be >= 1, got {self.n_inputs}")
    if not 1 <= self.max_hidden <= MAX_HIDDEN_LIMIT:
      raise ConfigurationError(
        f"max_hidden must be in [1, {MAX_HIDDEN_LIMIT}], got {self.max_hidden}")

  @property
  def max_weights(self) -> int:
    return self.max_hidden * (self.n_inputs + 1) + self.max_hidden + 1

  @property
  def lengths(self) -> Dict[str, int]:
    return {
      "alg": ALG_BITS,
      "params": MAX_PARAMETERS * PARAM_BITS,
      "arch": ARCH_BITS,
      "act": self.max_hidden * ACT_BITS,
      "weights": self.max_weights * WEIGHT_BITS,
    }

  @property
  def slices(self) -> Dict[str, slice]:
    out = {}
    start = 0
    for name in SEGMENTS:
      stop = start + self.lengths[name]
      out[name] = slice(start, stop)
      start = stop
    return out

  @property
  def total_length(self) -> int:
    return sum(self.lengths.values())

  def active_weight_genes(self, n_hidden: int) -> np.ndarray:
    """Weight-gene indices, in canonical parameter order, for h active neurons"""
    return _active_weight_genes(self.n_inputs, self.max_hidden, n_hidden)

  def hidden_gene(self, n_hidden: int) -> int:
    """Smallest 5-bit value that decodes to n_hidden"""
    if not 1 <= n_hidden <= self.max_hidden:
      raise ShapeMismatchError(f"hidden count {n_hidden} outside [1, {self.max_hidden}]")
    if self.max_hidden == 1:
      return 0
    return -(-(n_hidden - 1) * ARCH_LEVELS // (self.max_hidden - 1))

  def hidden_count(self, gene: int) -> int:
    return 1 + (gene * (self.max_hidden - 1)) // ARCH_LEVELS


@lru_cache(maxsize=None)
def _active_weight_genes(n_inputs: int, max_hidden: int, n_hidden: int) -> np.ndarray:
  slot = n_inputs + 1
  hidden = np.arange(n_hidden * slot)
  output_start = max_hidden * slot
  output = output_start + np.arange(n_hidden)
  genes = np.concatenate([hidden, output, [output_start + max_hidden]])
  genes.setflags(write=False)
  return genes


@dataclass(frozen=True, eq=False)
class Genome:
  """Immutable bit string plus the shape it was laid out for"""
  bits: np.ndarray
  n_inputs: int
  max_hidden: int

  def __post_init__(self):
    bits = np.array(self.bits, dtype=np.uint8).reshape(-1)
    if np.any(bits > 1):
      raise ShapeMismatchError("genome bits must be 0 or 1")
    expected = self.layout.total_length
    if bits.size != expected:
      raise ShapeMismatchError(
        f"genome has {bits.size} bits, layout ({self.n_inputs} inputs, max {self.max_hidden} "
        f"hidden) needs {expected}")
    bits.setflags(write=False)
    object.__setattr__(self, "bits", bits)

  @property
  def layout(self) -> GenomeLayout:
    return GenomeLayout(self.n_inputs, self.max_hidden)

  def segment(self, name: str) -> np.ndarray:
    return self.bits[self.layout.slices[name]]

  @property
  def key(self) -> bytes:
    """Lexicographic order of these bytes is the bit-string order"""
    return self.bits.tobytes()

  def __len__(self) -> int:
    return self.bits.size

  def __eq__(self, other) -> bool:
    if not isinstance(other, Genome):
      return NotImplemented
    return (self.n_inputs == other.n_inputs and self.max_hidden == other.max_hidden
            and np.array_equal(self.bits, other.bits))

  __hash__ = None

  def hamming(self, other: "Genome") -> int:
    return int(np.count_nonzero(self.bits != other.bits))

  def to_dict(self) -> Dict[str, Any]:
    return {
      "n_inputs": self.n_inputs,
      "max_hidden": self.max_hidden,
      "bits": "".join("1" if b else "0" for b in self.bits),
    }

  @classmethod
  def from_dict(cls, data: Dict[str, Any]) -> "Genome":
    text = str(data["bits"])
    if set(text) - {"0", "1"}:
      raise ShapeMismatchError("genome bit string may only contain '0' and '1'")
    return cls(np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0"),
               int(data["n_inputs"]), int(data["max_hidden"]))


def decode(
    genome: Genome,
    n_inputs: int,
    max_hidden: int,
    kind_override: Optional[TrainerKind] = None) -> Tuple[NetworkPhenotype, TrainerSpec]:
  """
  Decode a genome into a network and trainer spec. Every bit string decodes.

  kind_override replaces the trainer gene; the hyperparameter genes are then
  read with the overriding kind's ranges.
  """
  if (genome.n_inputs, genome.max_hidden) != (n_inputs, max_hidden):
    raise ShapeMismatchError(
      f"genome laid out for ({genome.n_inputs}, {genome.max_hidden}), "
      f"decode asked for ({n_inputs}, {max_hidden})")
  layout = genome.layout

  kind = kind_override or TrainerKind.from_index(int(_to_ints(genome.segment("alg"), ALG_BITS)[0]))
  levels = _to_ints(genome.segment("params"), PARAM_BITS)
  ranges = PARAMETER_RANGES[kind]
  spec = TrainerSpec(kind, tuple(r.from_fraction(v / PARAM_LEVELS) for r, v in zip(ranges, levels)))

  h = layout.hidden_count(int(_to_ints(genome.segment("arch"), ARCH_BITS)[0]))
  codes = _to_ints(genome.segment("act"), ACT_BITS)[:h]
  activations = tuple(ActivationKind.from_index(int(c)) for c in codes)

  weight_ints = _to_ints(genome.segment("weights"), WEIGHT_BITS)
  params = _ints_to_weights(weight_ints[layout.active_weight_genes(h)])
  return unflatten_params(NetworkShape(n_inputs, activations), params), spec


def encode(
    net: NetworkPhenotype,
    spec: TrainerSpec,
    max_hidden: int,
    base: Optional[Genome] = None) -> Genome:
  """
  Encode a network and trainer spec. Inactive genes are copied from `base`
  (zeros without one). Weights outside [-8, 8] are clamped.
  """
  layout = GenomeLayout(net.n_inputs, max_hidden)
  if net.n_hidden > max_hidden:
    raise ShapeMismatchError(f"network has {net.n_hidden} hidden neurons, max_hidden is {max_hidden}")
  if base is not None and (base.n_inputs, base.max_hidden) != (net.n_inputs, max_hidden):
    raise ShapeMismatchError("base genome has a different layout")
  bits = np.zeros(layout.total_length, dtype=np.uint8) if base is None else base.bits.copy()
  slices = layout.slices

  bits[slices["alg"]] = _to_bits(spec.kind.index, ALG_BITS)

  levels = _to_ints(bits[slices["params"]], PARAM_BITS)
  for i, (rng, value) in enumerate(zip(PARAMETER_RANGES[spec.kind], spec.params)):
    levels[i] = int(np.clip(np.rint(rng.to_fraction(value) * PARAM_LEVELS), 0, PARAM_LEVELS))
  bits[slices["params"]] = _to_bits(levels, PARAM_BITS)

  bits[slices["arch"]] = _to_bits(layout.hidden_gene(net.n_hidden), ARCH_BITS)

  codes = _to_ints(bits[slices["act"]], ACT_BITS)
  codes[:net.n_hidden] = [kind.index for kind in net.activations]
  bits[slices["act"]] = _to_bits(codes, ACT_BITS)

  genome = Genome(bits, net.n_inputs, max_hidden)
  return with_weights(genome, net.n_hidden, flatten_params(net))[0]


def with_weights(genome: Genome, n_hidden: int, params) -> Tuple[Genome, int]:
  """
  Write a canonical parameter vector for n_hidden neurons into the weight
  genes. Returns the new genome and how many values were clamped to [-8, 8].
  """
  layout = genome.layout
  params = np.asarray(params, dtype=np.float64).reshape(-1)
  genes = layout.active_weight_genes(n_hidden)
  if params.size != genes.size:
    raise ShapeMismatchError(
      f"{params.size} parameters for {n_hidden} hidden neurons, expected {genes.size}")
  clamped = int(np.count_nonzero(np.abs(params) > WEIGHT_LIMIT))
  weight_slice = layout.slices["weights"]
  ints = _to_ints(genome.bits[weight_slice], WEIGHT_BITS)
  ints[genes] = _weights_to_ints(np.clip(params, -WEIGHT_LIMIT, WEIGHT_LIMIT))
  bits = genome.bits.copy()
  bits[weight_slice] = _to_bits(ints, WEIGHT_BITS)
  return Genome(bits, genome.n_inputs, genome.max_hidden), clamped


def random_genome(
    rng: np.random.Generator,
    n_inputs: int,
    max_hidden: int,
    init_range: float = 0.3) -> Genome:
  """
  Uniform random bits everywhere except the weight genes, which are drawn
  so decoded weights are uniform on [-init_range, +init_range].
  """
  layout = GenomeLayout(n_inputs, max_hidden)
  if not 0.0 <= init_range <= WEIGHT_LIMIT:
    raise ConfigurationError(f"init_range must be in [0, {WEIGHT_LIMIT}], got {init_range}")
  bits = rng.integers(0, 2, size=layout.total_length, dtype=np.uint8)
  # Integer band whose decoded values stay inside the init range
  low = int(np.ceil((WEIGHT_LIMIT - init_range) / (2.0 * WEIGHT_LIMIT) * WEIGHT_LEVELS))
  high = int(np.floor((WEIGHT_LIMIT + init_range) / (2.0 * WEIGHT_LIMIT) * WEIGHT_LEVELS))
  ints = rng.integers(low, high + 1, size=layout.max_weights)
  bits[layout.slices["weights"]] = _to_bits(ints, WEIGHT_BITS)
  return Genome(bits, n_inputs, max_hidden)
