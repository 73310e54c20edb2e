from __future__ import annotations

import pytest

from dyad_runner.config import GameConfig


@pytest.fixture
def config() -> GameConfig:
    return GameConfig(rng_seed=1234)


@pytest.fixture
def fast_config() -> GameConfig:
    # 2.5 s trials: 150 ticks, 2 balloons; keeps protocol-level tests quick
    return GameConfig(trial_duration=2.5, rng_seed=1234)
