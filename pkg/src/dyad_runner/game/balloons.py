"""Balloon field generation along a randomized sinusoid.

Balloons sit exactly on x = A*sin(2*pi*f*z + phase) at every multiple of
the balloon spacing. Randomization between trials of equal amplitude
comes from a uniform random phase, so the lateral pattern cannot be
memorized while the governing curve stays the same.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace

from ..config import ConfigError, GameConfig

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Balloon:
    x: float
    z: float
    collected: bool = False


@dataclass(frozen=True)
class BalloonField:
    amplitude: float
    frequency: float  # cycles per meter
    phase: float  # radians
    balloons: tuple[Balloon, ...]

    def __post_init__(self) -> None:
        zs = [b.z for b in self.balloons]
        if any(b2 <= b1 for b1, b2 in zip(zs, zs[1:])):
            raise ValueError("balloons must be sorted by strictly increasing z")
        if any(abs(b.x) > self.amplitude + 1e-12 for b in self.balloons):
            raise ValueError("balloon x exceeds the field amplitude")

    def curve_x(self, z: float) -> float:
        """Lateral position of the target sinusoid at depth z."""
        return self.amplitude * math.sin(TWO_PI * self.frequency * z + self.phase)

    @property
    def zs(self) -> tuple[float, ...]:
        return tuple(b.z for b in self.balloons)

    def collect(self, index: int) -> "BalloonField":
        updated = list(self.balloons)
        updated[index] = replace(updated[index], collected=True)
        return replace(self, balloons=tuple(updated))

    def collected_count(self) -> int:
        return sum(1 for b in self.balloons if b.collected)


def make_field(amplitude: float, phase: float, config: GameConfig) -> BalloonField:
    """Place balloons on the sinusoid at every spacing multiple within the track."""
    if amplitude > config.half_width:
        raise ConfigError(
            f"amplitude {amplitude} exceeds half track width {config.half_width}"
        )
    count = config.balloons_per_trial()
    f = config.sinusoid_frequency
    balloons = []
    for k in range(1, count + 1):
        z = k * config.balloon_spacing
        x = amplitude * math.sin(TWO_PI * f * z + phase)
        balloons.append(Balloon(x=x, z=z))
    return BalloonField(
        amplitude=amplitude, frequency=f, phase=phase, balloons=tuple(balloons)
    )


def generate_balloons(
    amplitude: float, config: GameConfig, rng: random.Random
) -> BalloonField:
    """Build a field with a phase drawn uniformly from [0, 2*pi)."""
    phase = rng.random() * TWO_PI
    return make_field(amplitude, phase, config)
