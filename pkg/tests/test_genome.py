import numpy as np
import pytest

from eann_hybrid.errors import ConfigurationError, ShapeMismatchError
from eann_hybrid.evolution.config import EvolutionConfig
from eann_hybrid.evolution.genome import (
  SEGMENTS, Genome, GenomeLayout, decode, encode, random_genome, with_weights)
from eann_hybrid.evolution.population import mutate
from eann_hybrid.network.activations import ActivationKind
from eann_hybrid.network.phenotype import flatten_params
from eann_hybrid.trainers.spec import PARAMETER_RANGES, TrainerKind


def _constant_genome(value, n_inputs=4, max_hidden=16):
  layout = GenomeLayout(n_inputs, max_hidden)
  return Genome(np.full(layout.total_length, value, dtype=np.uint8), n_inputs, max_hidden)


def test_layout_length():
  layout = GenomeLayout(4, 16)
  assert layout.max_weights == 97
  assert layout.lengths == {"alg": 2, "params": 32, "arch": 5, "act": 48, "weights": 97 * 16}
  assert layout.total_length == 1639
  assert GenomeLayout(4, 4).total_length == 2 + 32 + 5 + 12 + 25 * 16


def test_all_zero_genome_decodes_to_range_minima():
  net, spec = decode(_constant_genome(0), 4, 16)
  assert net.n_hidden == 1
  assert net.activations == (ActivationKind.T,)
  assert np.all(flatten_params(net) == -8.0)
  assert spec.kind is TrainerKind.BP
  assert spec.as_dict() == {"learning_rate": 0.05, "momentum": 0.05}


def test_all_one_genome_decodes_to_range_maxima():
  net, spec = decode(_constant_genome(1), 4, 16)
  assert net.n_hidden == 16
  assert set(net.activations) == {ActivationKind.S}
  assert np.all(flatten_params(net) == 8.0)
  assert spec.kind is TrainerKind.LM
  assert spec.value("mu_init") == 0.02


def test_all_one_genome_with_fixed_trainer():
  _, spec = decode(_constant_genome(1), 4, 16, kind_override=TrainerKind.BP)
  assert spec.kind is TrainerKind.BP
  assert spec.value("learning_rate") == 0.25


@pytest.mark.parametrize("max_hidden", [1, 4, 16, 32])
def test_hidden_gene_round_trip(max_hidden):
  layout = GenomeLayout(2, max_hidden)
  for h in range(1, max_hidden + 1):
    gene = layout.hidden_gene(h)
    assert 0 <= gene <= 31
    assert layout.hidden_count(gene) == h
  assert {layout.hidden_count(g) for g in range(32)} == set(range(1, max_hidden + 1))


def test_layout_rejects_too_many_hidden():
  with pytest.raises(ConfigurationError):
    GenomeLayout(4, 33)


def test_encode_decode_preserves_active_segments():
  rng = np.random.default_rng(5)
  for _ in range(20):
    genome = random_genome(rng, 4, 16)
    net, spec = decode(genome, 4, 16)
    again = encode(net, spec, 16, base=genome)
    assert decode(again, 4, 16) == (net, spec)
    np.testing.assert_array_equal(again.segment("alg"), genome.segment("alg"))
    np.testing.assert_array_equal(again.segment("params"), genome.segment("params"))
    np.testing.assert_array_equal(again.segment("weights"), genome.segment("weights"))


def test_encode_without_base_decodes_back():
  net, spec = decode(random_genome(np.random.default_rng(9), 3, 4), 3, 4)
  assert decode(encode(net, spec, 4), 3, 4) == (net, spec)


def test_decode_rejects_other_shape():
  genome = random_genome(np.random.default_rng(0), 4, 16)
  with pytest.raises(ShapeMismatchError):
    decode(genome, 4, 4)
  with pytest.raises(ShapeMismatchError):
    Genome(genome.bits[:-1], 4, 16)


def test_decoded_trainer_parameters_stay_in_range():
  rng = np.random.default_rng(11)
  for _ in range(200):
    _, spec = decode(random_genome(rng, 2, 4), 2, 4)
    for value, bounds in zip(spec.params, PARAMETER_RANGES[spec.kind]):
      assert bounds.contains(value)


def test_random_genome_initial_weights():
  rng = np.random.default_rng(2024)
  weights = []
  for _ in range(300):
    net, _ = decode(random_genome(rng, 4, 16), 4, 16)
    weights.extend(flatten_params(net))
  weights = np.array(weights)
  assert weights.size > 10000
  assert np.all(np.abs(weights) <= 0.3)
  assert abs(weights.mean()) < 0.01


def test_random_genome_covers_hidden_counts():
  rng = np.random.default_rng(77)
  counts = {decode(random_genome(rng, 4, 16), 4, 16)[0].n_hidden for _ in range(1000)}
  assert counts == set(range(1, 17))


def test_random_genome_is_deterministic():
  first = random_genome(np.random.default_rng(42), 4, 16)
  second = random_genome(np.random.default_rng(42), 4, 16)
  assert first == second


def test_with_weights_clamps_and_counts():
  genome = random_genome(np.random.default_rng(1), 1, 1)
  net, _ = decode(genome, 1, 1)
  params = np.array([9.0, 0.5, -10.0, 0.25])   # w, b, v, c for 1 input / 1 hidden
  updated, clamped = with_weights(genome, net.n_hidden, params)
  assert clamped == 2
  decoded, _ = decode(updated, 1, 1)
  np.testing.assert_allclose(flatten_params(decoded), [8.0, 0.5, -8.0, 0.25], atol=2.5e-4)


def test_genome_dict_form():
  genome = random_genome(np.random.default_rng(3), 2, 4)
  data = genome.to_dict()
  assert set(data["bits"]) <= {"0", "1"}
  assert len(data["bits"]) == genome.layout.total_length
  assert Genome.from_dict(data) == genome


def test_mutation_rate_zero_keeps_genome():
  genome = random_genome(np.random.default_rng(0), 4, 16)
  config = EvolutionConfig(mutation_rate=0.0)
  assert mutate(genome, config, np.random.default_rng(1)) == genome


def test_mutation_rate_one_flips_one_bit_per_segment():
  genome = random_genome(np.random.default_rng(0), 4, 16)
  config = EvolutionConfig(mutation_rate=1.0)
  child = mutate(genome, config, np.random.default_rng(1))
  assert genome.hamming(child) == 5
  for name in SEGMENTS:
    assert np.count_nonzero(child.segment(name) != genome.segment(name)) == 1


def test_mutation_distance_distribution():
  genome = random_genome(np.random.default_rng(0), 4, 4)
  config = EvolutionConfig()
  rng = np.random.default_rng(8)
  distances = [genome.hamming(mutate(genome, config, rng)) for _ in range(10000)]
  assert abs(np.mean(distances) - 2.0) < 0.1
  assert max(distances) <= 5
