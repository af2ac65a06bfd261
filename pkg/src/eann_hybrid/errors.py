from typing import List, Optional


class EANNError(Exception):
  """Base class for every error raised by eann_hybrid"""


class ShapeMismatchError(EANNError, ValueError):
  """Input dimension or parameter vector length does not match the network"""


class NumericalOverflowError(EANNError, ArithmeticError):
  """A non-finite value appeared while evaluating a network"""


class ConfigurationError(EANNError, ValueError):
  """Invalid configuration or generator parameters"""


class DatasetError(EANNError, ValueError):
  """Malformed, short or degenerate data"""

  def __init__(self, message: str, diagnostics: Optional[List[str]] = None):
    self.diagnostics = list(diagnostics or [])
    if self.diagnostics:
      shown = "; ".join(self.diagnostics[:10])
      more = len(self.diagnostics) - 10
      if more > 0:
        shown += f"; ... ({more} more)"
      message = f"{message}: {shown}"
    super().__init__(message)


class ArchitectureParseError(EANNError, ValueError):
  """Architecture string does not follow the "count TAG, count TAG" grammar"""


class ArtifactError(EANNError):
  """Run artifact directory is missing or corrupt"""
