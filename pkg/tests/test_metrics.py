from __future__ import annotations

import math

import pytest

from dyad_runner.agents import AgentKind, AgentSpec, make_agent
from dyad_runner.config import Device, GameConfig, Role
from dyad_runner.metrics import (
    MetricInputError,
    area_error,
    summarize_block,
    trial_area_errors,
    trial_score,
    unit_trajectory,
)
from dyad_runner.session.plan import build_plan
from dyad_runner.session.runner import run_trial

TWO_PI = 2.0 * math.pi


def sinusoid_samples(amplitude, frequency, phase, z_max, dz):
    zs = [i * dz for i in range(int(round(z_max / dz)) + 1)]
    return [(z, amplitude * math.sin(TWO_PI * frequency * z + phase)) for z in zs]


def test_exact_match_trajectory_is_zero():
    samples = sinusoid_samples(1.0, 0.08, 0.4, 90.0, 0.05)
    assert area_error(samples, 1.0, 0.08, 0.4) == 0.0


def test_constant_zero_vs_seven_periods():
    # closed form: each 12.5 m period of |sin| integrates to 2*T/pi
    expected = 7 * 2 * 1.0 * 12.5 / math.pi
    samples = [(i * 0.05, 0.0) for i in range(int(87.5 / 0.05) + 1)]
    got = area_error(samples, 1.0, 0.08, 0.0)
    assert abs(got - expected) / expected < 0.005
    assert expected == pytest.approx(55.70, abs=0.01)


def test_fine_grid_quadrature_cross_check():
    # independent check of the trapezoid against a 100x finer quadrature
    amplitude, frequency, phase = 0.9, 0.08, 1.1
    coarse = [(i * 0.05, 0.3 * math.sin(0.2 * i * 0.05)) for i in range(1801)]
    got = area_error(coarse, amplitude, frequency, phase)
    fine_dz = 0.0005
    n = int(90.0 / fine_dz)
    total = 0.0
    prev = abs(0.3 * math.sin(0.0) - amplitude * math.sin(phase))
    for i in range(1, n + 1):
        z = i * fine_dz
        err = abs(0.3 * math.sin(0.2 * z) - amplitude * math.sin(TWO_PI * frequency * z + phase))
        total += 0.5 * (err + prev) * fine_dz
        prev = err
    assert got == pytest.approx(total, rel=0.005)


def test_error_scaling_is_linear():
    base = sinusoid_samples(1.0, 0.08, 0.0, 90.0, 0.05)
    def offset(c):
        return [(z, x + c * math.sin(0.13 * z)) for z, x in base]
    one = area_error(offset(1.0), 1.0, 0.08, 0.0)
    three = area_error(offset(3.0), 1.0, 0.08, 0.0)
    assert three == pytest.approx(3.0 * one, rel=1e-9)


def test_reflection_invariance():
    traj = [(i * 0.1, 0.2 + 0.1 * math.sin(0.3 * i)) for i in range(500)]
    a = area_error(traj, 1.0, 0.08, 0.7)
    mirrored = [(z, -x) for z, x in traj]
    b = area_error(mirrored, 1.0, 0.08, 0.7 + math.pi)
    assert a == pytest.approx(b, rel=1e-12)


def test_grid_refinement_stability():
    def traj(dz):
        zs = [i * dz for i in range(int(round(90.0 / dz)) + 1)]
        return [(z, 0.5 * math.sin(0.21 * z + 0.3)) for z in zs]
    coarse = area_error(traj(0.05), 1.0, 0.08, 0.0)
    fine = area_error(traj(0.025), 1.0, 0.08, 0.0)
    assert abs(fine - coarse) / coarse < 0.01


def test_bad_trajectories_rejected():
    with pytest.raises(MetricInputError):
        area_error([(0.0, 0.0)], 1.0, 0.08, 0.0)
    with pytest.raises(MetricInputError):
        area_error([(0.0, 0.0), (0.0, 1.0)], 1.0, 0.08, 0.0)
    with pytest.raises(MetricInputError):
        area_error([(1.0, 0.0), (0.5, 1.0)], 1.0, 0.08, 0.0)


def _agents(config, kinds, seed=3):
    return {
        Role.PPS: make_agent(AgentSpec(kinds[0]), config, seed),
        Role.PCG: make_agent(AgentSpec(kinds[1]), config, seed + 1),
    }


def test_collab_uses_ball_trajectory(config):
    plan = build_plan("M0", first_device=Device.PEDAL, master_seed=31)
    trial = plan.trial(2, 1)
    record = run_trial(trial, _agents(config, (AgentKind.IDLE, AgentKind.IDLE)), config, "M0")
    traj = unit_trajectory(record, 0)
    # both avatars idle at x=0, so the ball trajectory is exactly zero
    assert all(x == 0.0 for _, x in traj)
    errors = trial_area_errors(record)
    assert len(errors) == 1 and errors[0] > 0


def test_equal_avatars_match_single_player(config):
    plan = build_plan("M1", first_device=Device.PEDAL, master_seed=32)
    collab = plan.trial(2, 2)
    record = run_trial(collab, _agents(config, (AgentKind.IDLE, AgentKind.IDLE)), config, "M1")
    ball_traj = unit_trajectory(record, 0)
    solo_like = [(z, record.rows[i - 1].x[0] if i else 0.0) for i, (z, _) in enumerate(ball_traj)]
    assert ball_traj == solo_like  # identical avatars -> ball == either avatar


def test_trial_score_consistency(config):
    plan = build_plan("M2", first_device=Device.KEYBOARD, master_seed=33)
    record = run_trial(plan.trial(1, 1), _agents(config, (AgentKind.PERFECT, AgentKind.PERFECT)), config, "M2")
    for unit in range(2):
        assert trial_score(record, unit) == record.final_scores[unit]
    idle = run_trial(plan.trial(1, 2), _agents(config, (AgentKind.IDLE, AgentKind.IDLE)), config, "M2")
    assert trial_score(idle, 0) == idle.final_scores[0]


def test_incomplete_record_excluded(config):
    plan = build_plan("M3", first_device=Device.KEYBOARD, master_seed=34)
    record = run_trial(plan.trial(1, 1), _agents(config, (AgentKind.PERFECT, AgentKind.PERFECT)), config, "M3")
    record.complete = False
    with pytest.raises(MetricInputError):
        trial_score(record)


def test_summarize_block_means(config):
    plan = build_plan("M4", first_device=Device.PEDAL, master_seed=35)
    records = [
        run_trial(t, _agents(config, (AgentKind.PERFECT, AgentKind.PERFECT)), config, "M4")
        for t in plan.blocks[0].trials
    ]
    summary = summarize_block(records, Role.PCG, "M4")
    assert summary.participant == "M4-PCG"
    assert len(summary.scores) == 4
    expected_mean = sum(summary.scores) / 4
    assert summary.mean_score == pytest.approx(expected_mean)
    assert summary.block == 1 and summary.device == "pedal"


def test_summary_statistics_basics():
    from dyad_runner.metrics import PerformanceSummary
    from dyad_runner.config import Mode

    s = PerformanceSummary("p", Role.PCG, 1, Mode.SOLO, "pedal",
                           (20.0, 22.0, 24.0, 26.0), (1.0, 1.0, 1.0, 1.0))
    assert s.mean_score == pytest.approx(23.0)
    assert s.sd_area_error == 0.0
    same = PerformanceSummary("p", Role.PCG, 1, Mode.SOLO, "pedal",
                              (24.0,) * 4, (2.0,) * 4)
    assert same.sd_score == 0.0 and same.mean_score == 24.0
