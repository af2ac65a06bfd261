"""
Architecture strings in the "count TAG" comma-separated grammar used by the
results tables, e.g. "8 T, 2 T*, 1 L*" (11 hidden neurons).
"""

import re
from typing import List, Sequence, Tuple, TYPE_CHECKING

from eann_hybrid.errors import ArchitectureParseError

if TYPE_CHECKING:
  from eann_hybrid.network.activations import ActivationKind

GRAMMAR = '"<count> <tag>[, <count> <tag>]..." with count >= 1 and tag in T, L, S, T*, L* (TS/LS accepted)'

_GROUP = re.compile(r"^\s*(\d+)\s+([A-Za-z]+\*?)\s*$")


def format_architecture(kinds: Sequence["ActivationKind"]) -> str:
  """Group hidden activations by tag, in order of first appearance"""
  counts: List[Tuple["ActivationKind", int]] = []
  for kind in kinds:
    for i, (seen, count) in enumerate(counts):
      if seen is kind:
        counts[i] = (seen, count + 1)
        break
    else:
      counts.append((kind, 1))
  return ", ".join(f"{count} {kind.value}" for kind, count in counts)


def parse_architecture(text: str) -> Tuple["ActivationKind", ...]:
  """Expand "8 T, 2 T*" into a tuple of 10 activation tags"""
  from eann_hybrid.network.activations import ActivationKind

  if not text or not text.strip():
    raise ArchitectureParseError(f"empty architecture string; expected {GRAMMAR}")
  kinds: List[ActivationKind] = []
  for part in text.split(","):
    match = _GROUP.match(part)
    if not match:
      raise ArchitectureParseError(f"cannot parse {part.strip()!r}; expected {GRAMMAR}")
    count = int(match.group(1))
    if count < 1:
      raise ArchitectureParseError(
        f"hidden count must be >= 1 in {part.strip()!r}; expected {GRAMMAR}")
    try:
      kind = ActivationKind.from_tag(match.group(2))
    except ValueError:
      raise ArchitectureParseError(
        f"unknown activation tag {match.group(2)!r}; expected {GRAMMAR}") from None
    kinds.extend([kind] * count)
  return tuple(kinds)
