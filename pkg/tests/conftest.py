import logging
import os
import numpy as np
import pytest

from eann_hybrid.datasets.dataset import SupervisedDataset
from eann_hybrid.network.activations import ActivationKind
from eann_hybrid.network.phenotype import EvaluationBatch, NetworkShape, random_phenotype


def pytest_collection_modifyitems(config, items):
  if os.environ.get("EANN_RUN_SLOW") == "1":
    return
  skip_slow = pytest.mark.skip(reason="set EANN_RUN_SLOW=1 to run")
  for item in items:
    if "slow" in item.keywords:
      item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def _detach_log_handlers():
  yield
  logging.getLogger("eann_hybrid").handlers.clear()


@pytest.fixture
def rng():
  return np.random.default_rng(12345)


@pytest.fixture
def small_net(rng):
  shape = NetworkShape(3, (ActivationKind.T, ActivationKind.L, ActivationKind.TSTAR, ActivationKind.S))
  return random_phenotype(rng, shape, 0.5)


@pytest.fixture
def small_batch(rng):
  return EvaluationBatch(rng.uniform(-1.0, 1.0, size=(20, 3)), rng.uniform(-0.5, 0.5, size=20))


@pytest.fixture
def sine_dataset():
  """Two lagged sine values -> next value, 80 patterns split 50/30"""
  t = np.arange(83) * 0.2
  series = 0.5 + 0.4 * np.sin(t)
  inputs = np.column_stack([series[0:80], series[1:81]])
  targets = series[2:82]
  return SupervisedDataset(
    name="sine",
    inputs=inputs,
    targets=targets,
    split_index=50,
    input_names=("x(t-1)", "x(t)"),
    target_name="x(t+1)",
    embedding="[x(t-1), x(t)] -> x(t+1)",
    provenance="test fixture",
  )
