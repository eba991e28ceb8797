import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from qube.ddqn import PhaseConfig
from qube.neural import MLPModel
from qube.pipeline import default_configs


def constant_model(cfg: PhaseConfig, preferred: int = 0) -> MLPModel:
    """Zero weights; the output bias makes ``preferred`` the greedy action everywhere."""
    dims = cfg.layer_dims
    weights = [np.zeros((a, b)) for a, b in zip(dims[:-1], dims[1:])]
    biases = [np.zeros(b) for b in dims[1:]]
    biases[-1][preferred] = 1.0
    return MLPModel(dims, weights, biases, cfg.phase)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def configs():
    return default_configs()


@pytest.fixture
def constant_models(configs):
    """Every phase greedily plays its first action (phase 3: U)."""
    return {phase: constant_model(cfg) for phase, cfg in configs.items()}


@pytest.fixture
def tiny_config():
    def make(phase: int, **overrides) -> PhaseConfig:
        settings = dict(
            batch_size=8, memory_size=64, min_scramble=1, max_scramble=2,
            target_update_every=2, log_every=5,
        )
        settings.update(overrides)
        return PhaseConfig.for_phase(phase, **settings)
    return make
