"""Pytest configuration and fixtures for the scheduling tests."""

import sys
from pathlib import Path

# Add project root to path
PROJECT_ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(PROJECT_ROOT))

import pytest
import torch

from config import ModelConfig, TrainConfig
from instances import JsspInstance, load_instance


@pytest.fixture
def tiny() -> JsspInstance:
    """2x2 fixture: J0 = M0(3), M1(2); J1 = M1(4), M0(1). Optimum 6."""
    return load_instance("tiny2x2")


@pytest.fixture
def ft06() -> JsspInstance:
    return load_instance("ft06")


@pytest.fixture
def ft10() -> JsspInstance:
    return load_instance("ft10")


@pytest.fixture
def three_by_three() -> JsspInstance:
    """3x3 instance used for hand simulations."""
    return JsspInstance(
        machine_of=[[0, 1, 2], [1, 0, 2], [2, 1, 0]],
        proc_time=[[2, 3, 1], [1, 2, 4], [3, 1, 2]],
        name="hand3x3",
    )


@pytest.fixture
def small_model_config() -> ModelConfig:
    """Small model that keeps forward/backward fast."""
    return ModelConfig(arch="hgt", layers=1, hidden_dim=8, heads=2, embed_dim=4, dropout=0.0)


@pytest.fixture
def quick_train_config() -> TrainConfig:
    """A couple of PPO updates on a tiny instance."""
    return TrainConfig(total_steps=16, episodes_per_update=2, epochs=2, minibatch=4, eval_interval=8, eval_episodes=2)


@pytest.fixture
def generator() -> torch.Generator:
    g = torch.Generator()
    g.manual_seed(1234)
    return g


@pytest.fixture
def sample_config_dict() -> dict:
    """Full settings dictionary as stored in config.json."""
    return {
        "model": {"arch": "gin", "layers": 2, "hidden_dim": 32, "heads": 2, "embed_dim": 16,
                  "dropout": 0.0, "in_features": 3},
        "train": {"total_steps": 1000, "seed": 3, "lr": 1e-3, "adam_betas": [0.8, 0.99]},
        "eval": {"episodes": 10, "reference_arch": "hgt"},
        "seeds": [0, 1],
        "ablation_layers": [1, 2],
        "ablation_seeds": [0],
        "out_dir": "out",
        "workers": 1,
    }
