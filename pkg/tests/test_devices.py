from __future__ import annotations

import json
import math
import random

import pytest

from dyad_runner.config import GameConfig
from dyad_runner.devices import (
    ImuSample,
    OrientationState,
    PedalState,
    joystick_map,
    keyboard_map,
    load_imu_stream,
    mahony_update,
    pedal_map,
    roll_angle,
)

G = 9.81


def rolled_gravity_sample(t: float, roll_deg: float) -> ImuSample:
    """Static handle rolled about its forward (x) axis."""
    r = math.radians(roll_deg)
    return ImuSample(t=t, accel=(0.0, G * math.sin(r), G * math.cos(r)), gyro=(0.0, 0.0, 0.0))


def quat_norm(q):
    return math.sqrt(sum(c * c for c in q))


class TestMahony:
    def test_level_handle_stays_identity(self):
        state = OrientationState()
        for i in range(500):
            state = mahony_update(state, rolled_gravity_sample(i * 0.01, 0.0), 0.01)
        assert state.q == pytest.approx((1.0, 0.0, 0.0, 0.0), abs=1e-9)

    @pytest.mark.parametrize("roll", [-60.0, -30.0, 30.0, 60.0])
    def test_converges_to_static_roll(self, roll):
        state = OrientationState()
        for i in range(500):  # 5 s at 100 Hz
            state = mahony_update(state, rolled_gravity_sample(i * 0.01, roll), 0.01)
        assert roll_angle(state.q) == pytest.approx(roll, abs=0.5)

    @pytest.mark.parametrize("roll", [-90.0, -75.0, 45.0, 90.0])
    def test_converges_and_stays_across_full_roll_range(self, roll):
        state = OrientationState()
        for i in range(1000):  # 10 s: enough for the widest initial error
            state = mahony_update(state, rolled_gravity_sample(i * 0.01, roll), 0.01)
        assert roll_angle(state.q) == pytest.approx(roll, abs=0.5)
        for i in range(200):  # and it stays there
            state = mahony_update(state, rolled_gravity_sample(10 + i * 0.01, roll), 0.01)
            assert roll_angle(state.q) == pytest.approx(roll, abs=0.5)

    def test_unit_norm_every_update(self):
        state = OrientationState()
        rng = random.Random(1)
        for i in range(2000):
            sample = ImuSample(
                t=i * 0.01,
                accel=(rng.uniform(-2, 2), rng.uniform(-2, 2), G),
                gyro=(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)),
            )
            state = mahony_update(state, sample, 0.01)
            assert abs(quat_norm(state.q) - 1.0) < 1e-9

    def test_zero_accel_sample_skipped(self):
        state = OrientationState(q=(0.9, 0.1, 0.2, 0.1))
        sample = ImuSample(t=0.0, accel=(0.0, 0.0, 0.0), gyro=(1.0, 0.0, 0.0))
        assert mahony_update(state, sample, 0.01) is state

    def test_integral_gain_accumulates(self):
        state = OrientationState(ki=0.1)
        state = mahony_update(state, rolled_gravity_sample(0.0, 45.0), 0.01)
        assert state.integral != (0.0, 0.0, 0.0)

    def test_magnetometer_branch_keeps_unit_norm(self):
        state = OrientationState()
        for i in range(200):
            sample = ImuSample(
                t=i * 0.01,
                accel=(0.0, 0.0, G),
                gyro=(0.0, 0.0, 0.0),
                mag=(0.3, 0.0, 0.5),
            )
            state = mahony_update(state, sample, 0.01)
            assert abs(quat_norm(state.q) - 1.0) < 1e-9

    def test_bad_dt_rejected(self):
        with pytest.raises(ValueError):
            mahony_update(OrientationState(), rolled_gravity_sample(0, 0), 0.0)


class TestRollAngle:
    def test_identity(self):
        assert roll_angle((1.0, 0.0, 0.0, 0.0)) == 0.0

    def test_pure_quarter_roll(self):
        q = (math.cos(math.pi / 4), math.sin(math.pi / 4), 0.0, 0.0)
        assert roll_angle(q) == pytest.approx(90.0)

    def test_conjugate_negates_roll(self):
        rng = random.Random(7)
        for _ in range(100):
            theta = rng.uniform(-math.pi * 0.9, math.pi * 0.9)
            q = (math.cos(theta / 2), math.sin(theta / 2), 0.0, 0.0)
            conj = (q[0], -q[1], -q[2], -q[3])
            assert roll_angle(conj) == pytest.approx(-roll_angle(q), abs=1e-9)

    def test_range_half_open(self):
        q = (0.0, 1.0, 0.0, 0.0)  # 180 degree roll
        assert roll_angle(q) == pytest.approx(180.0)


class TestMaps:
    def test_joystick_deadzone_edges(self):
        cfg = GameConfig()
        assert joystick_map(19.9, cfg).direction == 0
        assert joystick_map(20.1, cfg).direction == 1
        assert joystick_map(-90.0, cfg).direction == -1

    def test_joystick_sign_symmetry(self):
        cfg = GameConfig()
        for deg in [0.0, 5.0, 19.999, 20.001, 45.0, 120.0, 180.0]:
            assert joystick_map(-deg, cfg).direction == -joystick_map(deg, cfg).direction

    @pytest.mark.parametrize(
        "left,right,expected",
        [(False, False, 0), (True, False, -1), (False, True, 1), (True, True, 0)],
    )
    def test_pedal_exhaustive(self, left, right, expected):
        assert pedal_map(PedalState(left, right)).direction == expected

    @pytest.mark.parametrize(
        "keys,expected",
        [(set(), 0), ({"left"}, -1), ({"right"}, 1), ({"left", "right"}, 0)],
    )
    def test_keyboard_exhaustive(self, keys, expected):
        assert keyboard_map(keys).direction == expected


class TestStreamFile:
    def test_roundtrip(self, tmp_path):
        rows = [
            {"t": 0.00, "ax": 0.0, "ay": 0.0, "az": G, "gx": 0.0, "gy": 0.0, "gz": 0.0},
            {"t": 0.01, "ax": 0.1, "ay": 0.0, "az": G, "gx": 0.5, "gy": 0.0, "gz": 0.0,
             "mx": 0.2, "my": 0.0, "mz": 0.4},
        ]
        path = tmp_path / "stream.jsonl"
        path.write_text("\n".join(json.dumps(r) for r in rows))
        samples = list(load_imu_stream(path))
        assert len(samples) == 2
        assert samples[0].mag is None
        assert samples[1].mag == (0.2, 0.0, 0.4)
        assert samples[1].gyro == (0.5, 0.0, 0.0)

    def test_nonmonotone_timestamps_rejected(self, tmp_path):
        rows = [
            {"t": 0.01, "ax": 0, "ay": 0, "az": G, "gx": 0, "gy": 0, "gz": 0},
            {"t": 0.01, "ax": 0, "ay": 0, "az": G, "gx": 0, "gy": 0, "gz": 0},
        ]
        path = tmp_path / "stream.jsonl"
        path.write_text("\n".join(json.dumps(r) for r in rows))
        with pytest.raises(ValueError):
            list(load_imu_stream(path))
