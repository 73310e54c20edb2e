from __future__ import annotations

import pytest

from dyad_runner.agents import (
    AgentKind,
    AgentSpec,
    BangbangAgent,
    IdleAgent,
    LaggedAgent,
    PerfectAgent,
    PlayerView,
    ReplayAgent,
    ReplayExhausted,
    make_agent,
    parse_agent_arg,
)
from dyad_runner.config import GameConfig, Mode, Role
from dyad_runner.game import engine
from dyad_runner.game.balloons import make_field


def view_at(x: float, z: float, field) -> PlayerView:
    return PlayerView(x=x, z=z, field=field, score=0)


def test_perfect_holds_on_target():
    cfg = GameConfig()
    field = make_field(1.0, 0.0, cfg)
    agent = PerfectAgent()
    target = field.curve_x(12.0)
    assert agent.command(view_at(target, 12.0, field), 0).direction == 0
    assert agent.command(view_at(target - 0.2, 12.0, field), 0).direction == 1
    assert agent.command(view_at(target + 0.2, 12.0, field), 0).direction == -1


def test_idle_never_moves(config):
    field = make_field(0.9, 0.3, config)
    state = engine.new_trial(Mode.SOLO, (Role.PCG,), (field,), (None,), config)
    agent = IdleAgent()
    for t in range(config.ticks_per_trial):
        cmd = agent.command(view_at(state.avatars[0].x, state.avatars[0].z, field), t)
        state = engine.tick(state, (cmd.direction,), config)
    assert state.avatars[0].x == 0.0


def test_lagged_delays_perfect_decisions():
    cfg = GameConfig()
    field = make_field(1.0, 0.0, cfg)
    perfect = PerfectAgent()
    lagged = LaggedAgent(lag_ticks=3)
    views = [view_at(0.0, z * 0.05, field) for z in range(10)]
    perfect_stream = [perfect.command(v, t).direction for t, v in enumerate(views)]
    lagged_stream = [lagged.command(v, t).direction for t, v in enumerate(views)]
    assert lagged_stream[:3] == [0, 0, 0]
    assert lagged_stream[3:] == perfect_stream[:7]


def test_bangbang_jitter_is_seeded():
    cfg = GameConfig()
    field = make_field(1.0, 0.0, cfg)
    a1 = BangbangAgent(error_sd=0.3, seed=5, jitter_window_ticks=30)
    a2 = BangbangAgent(error_sd=0.3, seed=5, jitter_window_ticks=30)
    t1 = [a1.target(view_at(0, 1.0, field), t) for t in range(90)]
    t2 = [a2.target(view_at(0, 1.0, field), t) for t in range(90)]
    assert t1 == t2
    assert len({round(v, 9) for v in t1}) <= 3  # constant within each jitter window


def test_replay_exhaustion_raises():
    agent = ReplayAgent([1, 0])
    field = make_field(1.0, 0.0, GameConfig())
    v = view_at(0, 0, field)
    assert agent.command(v, 0).direction == 1
    assert agent.command(v, 1).direction == 0
    with pytest.raises(ReplayExhausted):
        agent.command(v, 2)


def test_parse_agent_arg():
    assert parse_agent_arg("perfect").kind is AgentKind.PERFECT
    lag = parse_agent_arg("lagged:0.5")
    assert lag.kind is AgentKind.LAGGED and lag.lag == 0.5
    bb = parse_agent_arg("bangbang:0.4")
    assert bb.kind is AgentKind.BANGBANG and bb.error_sd == 0.4
    assert parse_agent_arg("idle").kind is AgentKind.IDLE
    with pytest.raises(ValueError):
        parse_agent_arg("perfect:1.0")
    with pytest.raises(ValueError):
        parse_agent_arg("warp")


def test_make_agent_kinds(config):
    assert isinstance(make_agent(AgentSpec(AgentKind.PERFECT), config, 1), PerfectAgent)
    lagged = make_agent(AgentSpec(AgentKind.LAGGED, lag=0.5), config, 1)
    assert isinstance(lagged, LaggedAgent) and lagged.lag_ticks == 30
    assert isinstance(make_agent(AgentSpec(AgentKind.IDLE), config, 1), IdleAgent)
    with pytest.raises(ValueError):
        make_agent(AgentSpec(AgentKind.REPLAY), config, 1)


def test_negative_spec_values_rejected():
    with pytest.raises(ValueError):
        AgentSpec(AgentKind.LAGGED, lag=-1.0)
    with pytest.raises(ValueError):
        AgentSpec(AgentKind.BANGBANG, error_sd=-0.1)
