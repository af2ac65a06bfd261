from .genome import (
  SEGMENTS,
  WEIGHT_LIMIT,
  Genome,
  GenomeLayout,
  decode,
  encode,
  random_genome,
  with_weights,
)
from .config import EVOLVED, EvolutionConfig, FitnessSplit
from .population import (
  GenerationStats,
  Individual,
  evaluate,
  generation_stats,
  individual_stream,
  mutate,
  rank_population,
  select_parents,
)
from .evolve import (
  EvolutionReport,
  evaluate_population,
  evolve,
  fitness_batches,
  initial_population,
  next_generation,
)

__all__ = [
  'SEGMENTS', 'WEIGHT_LIMIT', 'Genome', 'GenomeLayout',
  'decode', 'encode', 'random_genome', 'with_weights',
  'EVOLVED', 'EvolutionConfig', 'FitnessSplit',
  'GenerationStats', 'Individual', 'evaluate', 'generation_stats',
  'individual_stream', 'mutate', 'rank_population', 'select_parents',
  'EvolutionReport', 'evaluate_population', 'evolve', 'fitness_batches',
  'initial_population', 'next_generation',
]
