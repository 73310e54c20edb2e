"""Deterministic tick-based simulation of the balloon-collecting runner."""

from .balloons import Balloon, BalloonField, generate_balloons, make_field
from .engine import (
    TrialComplete,
    check_collection,
    collab_ball,
    new_trial,
    pps_lateral_command,
    resample_noise,
    tick,
)
from .state import (
    AvatarState,
    CollabBall,
    CollectionEvent,
    NoiseState,
    TrialState,
    window_speed,
)

__all__ = [
    "Balloon",
    "BalloonField",
    "generate_balloons",
    "make_field",
    "TrialComplete",
    "check_collection",
    "collab_ball",
    "new_trial",
    "pps_lateral_command",
    "resample_noise",
    "tick",
    "AvatarState",
    "CollabBall",
    "CollectionEvent",
    "NoiseState",
    "TrialState",
    "window_speed",
]
