from __future__ import annotations

import pytest

from dyad_runner.config import AMPLITUDE_SETS, ConfigError, GameConfig, Role


def test_defaults_are_valid():
    cfg = GameConfig()
    assert cfg.dt == pytest.approx(1 / 60)
    assert cfg.ticks_per_trial == 1800
    assert cfg.track_length == pytest.approx(90.0)
    assert cfg.noise_window_ticks == 30
    assert cfg.balloons_per_trial() == 24


def test_amplitude_sets():
    assert AMPLITUDE_SETS[Role.PPS] == (0.5, 0.7, 0.9, 1.1)
    assert AMPLITUDE_SETS[Role.PCG] == (0.75, 1.0, 1.25, 1.5)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"forward_speed": 0.0},
        {"trial_duration": -1.0},
        {"balloon_spacing": 0.0},
        {"noise_speed_min": 1.6},  # exceeds max
        {"track_width": 2.0},  # cannot contain the 1.5 m amplitude
        {"noise_window": 0.3333},  # not a whole number of ticks at 60 Hz
        {"state_decimation": 0},
    ],
)
def test_invariant_violations_raise(kwargs):
    with pytest.raises(ConfigError):
        GameConfig(**kwargs)


def test_dict_roundtrip(tmp_path):
    cfg = GameConfig(trial_duration=10.0, rng_seed=77)
    assert GameConfig.from_dict(cfg.to_dict()) == cfg
    path = tmp_path / "config.json"
    import json

    path.write_text(json.dumps(cfg.to_dict()))
    assert GameConfig.from_file(path) == cfg


def test_unknown_config_key_rejected():
    with pytest.raises(ConfigError):
        GameConfig.from_dict({"warp_speed": 9})


def test_depth_is_exact_at_balloon_ticks():
    cfg = GameConfig()
    # balloon k sits at z = 3.75k, reached exactly at tick 75k
    for k in (1, 7, 24):
        assert cfg.depth_at(75 * k) == k * 3.75
    assert cfg.depth_at(cfg.ticks_per_trial) >= cfg.track_length
