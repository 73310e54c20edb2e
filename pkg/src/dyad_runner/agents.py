"""Synthetic players for headless verification runs.

Agents see only what a human would: their own avatar position and the
balloon curve ahead. They emit direction-only commands, matching the
device output alphabet, so a perfect agent still cannot out-steer the
device speed limits.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum

from .config import GameConfig
from .devices import CommandSourceKind, LateralCommand
from .game.balloons import BalloonField
from .seeds import rng_for


class AgentKind(str, Enum):
    PERFECT = "perfect"
    LAGGED = "lagged"
    BANGBANG = "bangbang"
    IDLE = "idle"
    REPLAY = "replay"


@dataclass(frozen=True)
class AgentSpec:
    kind: AgentKind
    lag: float = 0.0  # s, command delay (lagged)
    error_sd: float = 0.0  # m, target jitter (bangbang)
    replay_path: str | None = None
    hysteresis: float = 0.05  # m, holds still within this band of the target

    def __post_init__(self) -> None:
        if self.lag < 0:
            raise ValueError("lag must be nonnegative")
        if self.error_sd < 0:
            raise ValueError("error_sd must be nonnegative")


@dataclass(frozen=True)
class PlayerView:
    """Per-tick observation handed to a command source."""

    x: float
    z: float
    field: BalloonField
    score: int


class ReplayExhausted(RuntimeError):
    """A replay source ran out of recorded commands."""


class Agent:
    """Base command source; one instance per player per trial."""

    def __init__(self, source: CommandSourceKind = CommandSourceKind.KEYBOARD):
        self.source = source

    def command(self, view: PlayerView, tick: int) -> LateralCommand:
        raise NotImplementedError

    def _emit(self, direction: int) -> LateralCommand:
        return LateralCommand(direction=direction, source=self.source)


class IdleAgent(Agent):
    def command(self, view: PlayerView, tick: int) -> LateralCommand:
        return self._emit(0)


class PerfectAgent(Agent):
    """Bang-bang toward the sinusoid at the current depth."""

    def __init__(self, hysteresis: float = 0.05, **kw):
        super().__init__(**kw)
        self.hysteresis = hysteresis

    def target(self, view: PlayerView, tick: int) -> float:
        return view.field.curve_x(view.z)

    def command(self, view: PlayerView, tick: int) -> LateralCommand:
        target = self.target(view, tick)
        if view.x < target - self.hysteresis:
            return self._emit(1)
        if view.x > target + self.hysteresis:
            return self._emit(-1)
        return self._emit(0)


class LaggedAgent(PerfectAgent):
    """The perfect agent's decisions, delayed by a fixed number of ticks."""

    def __init__(self, lag_ticks: int, **kw):
        super().__init__(**kw)
        if lag_ticks < 0:
            raise ValueError("lag_ticks must be nonnegative")
        self.lag_ticks = lag_ticks
        self._pending: deque[LateralCommand] = deque()

    def command(self, view: PlayerView, tick: int) -> LateralCommand:
        self._pending.append(super().command(view, tick))
        if len(self._pending) <= self.lag_ticks:
            return self._emit(0)
        return self._pending.popleft()


class BangbangAgent(PerfectAgent):
    """Perfect steering toward a jittered target, redrawn every jitter window."""

    def __init__(self, error_sd: float, seed: int, jitter_window_ticks: int, **kw):
        super().__init__(**kw)
        self.error_sd = error_sd
        self.seed = seed
        self.jitter_window_ticks = max(1, jitter_window_ticks)

    def target(self, view: PlayerView, tick: int) -> float:
        window = tick // self.jitter_window_ticks
        jitter = rng_for(self.seed, "jitter", window).gauss(0.0, self.error_sd)
        return view.field.curve_x(view.z) + jitter


class ReplayAgent(Agent):
    """Feeds back a recorded per-tick command sequence."""

    def __init__(self, directions: list[int], **kw):
        super().__init__(**kw)
        self._directions = directions
        self._cursor = 0

    def command(self, view: PlayerView, tick: int) -> LateralCommand:
        if self._cursor >= len(self._directions):
            raise ReplayExhausted(f"replay log ended after {self._cursor} commands")
        direction = self._directions[self._cursor]
        self._cursor += 1
        return self._emit(direction)


def make_agent(
    spec: AgentSpec,
    config: GameConfig,
    seed: int,
    source: CommandSourceKind = CommandSourceKind.KEYBOARD,
) -> Agent:
    if spec.kind is AgentKind.IDLE:
        return IdleAgent(source=source)
    if spec.kind is AgentKind.PERFECT:
        return PerfectAgent(hysteresis=spec.hysteresis, source=source)
    if spec.kind is AgentKind.LAGGED:
        return LaggedAgent(
            lag_ticks=int(round(spec.lag * config.tick_rate)),
            hysteresis=spec.hysteresis,
            source=source,
        )
    if spec.kind is AgentKind.BANGBANG:
        return BangbangAgent(
            error_sd=spec.error_sd,
            seed=seed,
            jitter_window_ticks=config.noise_window_ticks,
            hysteresis=spec.hysteresis,
            source=source,
        )
    if spec.kind is AgentKind.REPLAY:
        # a replay source is tied to one player of one recorded trial;
        # build it from the record (session.runner.replay_sources)
        raise ValueError("replay agents are built from a trial record, not a spec")
    raise ValueError(f"unknown agent kind {spec.kind}")


def parse_agent_arg(text: str) -> AgentSpec:
    """Parse a CLI agent token such as 'perfect', 'lagged:0.5', 'bangbang:0.3'."""
    name, _, arg = text.strip().partition(":")
    kind = AgentKind(name.lower())
    if kind is AgentKind.LAGGED:
        return AgentSpec(kind=kind, lag=float(arg) if arg else 0.25)
    if kind is AgentKind.BANGBANG:
        return AgentSpec(kind=kind, error_sd=float(arg) if arg else 0.2)
    if kind is AgentKind.REPLAY:
        return AgentSpec(kind=kind, replay_path=arg or None)
    if arg:
        raise ValueError(f"agent {name!r} takes no argument")
    return AgentSpec(kind=kind)
