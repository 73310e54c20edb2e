"""Game world configuration, player roles, and play modes.

All tunable constants of the track, scoring geometry, and input noise
live in :class:`GameConfig` so a single value object pins down the whole
simulation. Defaults reproduce the study setup: 3 m/s forward speed,
30 s trials at 60 Hz, a 4 m track, sinusoid frequency 0.08 cycles/m,
and the +/-20 degree joystick deadzone with 0.5 s noise windows.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields, replace
from enum import Enum
from pathlib import Path


class Role(str, Enum):
    """The two player roles of a dyad."""

    PPS = "PPS"  # pseudo person with stroke: joystick with deadzone + speed noise
    PCG = "PCG"  # pseudo caregiver: pedal or keyboard at fixed lateral speed

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


class Mode(str, Enum):
    SOLO = "solo"
    COLLABORATIVE = "collaborative"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


class Device(str, Enum):
    JOYSTICK = "joystick"
    PEDAL = "pedal"
    KEYBOARD = "keyboard"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


# Balloon sinusoid amplitudes (meters) selectable per role. The PPS set is
# the PCG set scaled down ~30% to mirror the joystick's reduced range.
AMPLITUDE_SETS: dict[Role, tuple[float, ...]] = {
    Role.PPS: (0.5, 0.7, 0.9, 1.1),
    Role.PCG: (0.75, 1.0, 1.25, 1.5),
}


class ConfigError(ValueError):
    """Raised when a GameConfig violates a world invariant."""


@dataclass(frozen=True)
class GameConfig:
    forward_speed: float = 3.0  # m/s, constant for all avatars
    pcg_lateral_speed: float = 1.5  # m/s while a pedal/keyboard command is held
    trial_duration: float = 30.0  # s
    tick_rate: int = 60  # Hz
    track_width: float = 4.0  # m, lateral extent; avatars clamped to +/- half
    sinusoid_frequency: float = 0.08  # cycles per meter of depth
    balloon_spacing: float = 3.75  # m between consecutive balloons along z
    collection_radius_solo: float = 0.1  # m, solo collector radius
    ball_radius_max: float = 0.1  # m, collaborative ball at zero separation
    balloon_visual_radius: float = 0.05  # m, added to collector radius on contact
    deadzone_deg: float = 20.0  # joystick roll band producing no motion
    noise_window: float = 0.5  # s between PPS speed redraws
    noise_speed_min: float = 0.5  # m/s
    noise_speed_max: float = 1.5  # m/s
    state_decimation: int = 3  # server broadcasts every Nth tick
    rng_seed: int = 0

    def __post_init__(self) -> None:
        positive = (
            "forward_speed",
            "pcg_lateral_speed",
            "trial_duration",
            "tick_rate",
            "track_width",
            "sinusoid_frequency",
            "balloon_spacing",
            "collection_radius_solo",
            "ball_radius_max",
            "noise_window",
            "noise_speed_min",
            "noise_speed_max",
        )
        for name in positive:
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be strictly positive")
        if self.balloon_visual_radius < 0:
            raise ConfigError("balloon_visual_radius must be nonnegative")
        if self.deadzone_deg < 0:
            raise ConfigError("deadzone_deg must be nonnegative")
        if self.noise_speed_min > self.noise_speed_max:
            raise ConfigError("noise_speed_min must not exceed noise_speed_max")
        if self.state_decimation < 1:
            raise ConfigError("state_decimation must be at least 1")
        max_amplitude = max(max(v) for v in AMPLITUDE_SETS.values())
        if self.track_width < 2 * max_amplitude:
            raise ConfigError(
                f"track_width {self.track_width} cannot contain amplitude {max_amplitude}"
            )
        window_ticks = self.tick_rate * self.noise_window
        if abs(window_ticks - round(window_ticks)) > 1e-9:
            raise ConfigError("tick_rate * noise_window must be an integer tick count")

    @property
    def dt(self) -> float:
        return 1.0 / self.tick_rate

    @property
    def ticks_per_trial(self) -> int:
        n = self.trial_duration * self.tick_rate
        return int(round(n))

    @property
    def track_length(self) -> float:
        return self.forward_speed * self.trial_duration

    @property
    def noise_window_ticks(self) -> int:
        return int(round(self.tick_rate * self.noise_window))

    @property
    def half_width(self) -> float:
        return self.track_width / 2.0

    def balloons_per_trial(self) -> int:
        return int(self.track_length / self.balloon_spacing + 1e-9)

    def collection_tolerance(self, collector_radius: float) -> float:
        return collector_radius + self.balloon_visual_radius

    def depth_at(self, tick: int) -> float:
        """Avatar depth after `tick` elapsed ticks, computed without drift."""
        return self.forward_speed * tick / self.tick_rate

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "GameConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_file(cls, path: str | Path) -> "GameConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def with_seed(self, seed: int) -> "GameConfig":
        return replace(self, rng_seed=seed)
