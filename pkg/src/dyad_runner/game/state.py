"""Immutable state types for one trial of the runner game.

A trial tracks one scoring unit per balloon field: in solo mode every
avatar runs its own track (own field, own score); in collaborative mode
both avatars share a single field and the blue ball at their mean
position does the collecting.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..config import GameConfig, Mode, Role
from ..seeds import rng_for
from .balloons import BalloonField


@dataclass(frozen=True)
class AvatarState:
    role: Role
    x: float  # lateral, meters
    z: float  # depth, meters
    lateral_velocity: float = 0.0


@dataclass(frozen=True)
class CollabBall:
    x: float
    radius: float
    active: bool


@dataclass(frozen=True)
class NoiseState:
    """Randomized PPS lateral speed, constant within one noise window.

    Each window's speed is a pure function of (seed, window_index), so
    the stream is deterministic and resumable from any tick.
    """

    seed: int
    window_index: int
    current_speed: float

    @classmethod
    def initial(cls, seed: int, config: GameConfig) -> "NoiseState":
        return cls(seed=seed, window_index=0, current_speed=window_speed(seed, 0, config))


def window_speed(seed: int, window_index: int, config: GameConfig) -> float:
    rng = rng_for(seed, "noise-window", window_index)
    return rng.uniform(config.noise_speed_min, config.noise_speed_max)


@dataclass(frozen=True)
class CollectionEvent:
    unit: int  # scoring unit (field index)
    balloon: int  # balloon index within the field
    tick: int


@dataclass(frozen=True)
class TrialState:
    mode: Mode
    tick: int
    avatars: tuple[AvatarState, ...]
    fields: tuple[BalloonField, ...]  # one per avatar (solo) or one shared (collab)
    scores: tuple[int, ...]  # aligned with fields
    noises: tuple[NoiseState | None, ...]  # aligned with avatars; PPS only
    ball: CollabBall | None
    events: tuple[CollectionEvent, ...] = ()  # collections from the last tick

    def __post_init__(self) -> None:
        if self.mode is Mode.COLLABORATIVE:
            if len(self.avatars) != 2:
                raise ValueError("collaborative trials need exactly 2 avatars")
            if len(self.fields) != 1:
                raise ValueError("collaborative trials share a single field")
        else:
            if self.ball is not None:
                raise ValueError("solo trials have no ball")
            if len(self.fields) != len(self.avatars):
                raise ValueError("solo trials need one field per avatar")
        if len(self.scores) != len(self.fields):
            raise ValueError("scores must align with fields")
        if len(self.noises) != len(self.avatars):
            raise ValueError("noises must align with avatars")

    def score_of(self, unit: int = 0) -> int:
        return self.scores[unit]
