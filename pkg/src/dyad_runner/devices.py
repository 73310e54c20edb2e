"""Input-device pipelines: IMU orientation filtering and command mapping.

Raw sources (IMU sample streams, pedal states, held keys) are reduced to
a common direction-only command. The joystick path runs a Mahony
complementary filter on accelerometer/gyro samples, extracts the roll
about the handle's forward axis, and applies the +/-20 degree deadzone.
Hardware is replaced by sample replay: streams arrive from JSONL files
or from the wire protocol.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Iterator

from .config import GameConfig

Vec3 = tuple[float, float, float]
Quat = tuple[float, float, float, float]  # (w, x, y, z)


class CommandSourceKind(str, Enum):
    JOYSTICK = "joystick"
    PEDAL = "pedal"
    KEYBOARD = "keyboard"


@dataclass(frozen=True)
class LateralCommand:
    direction: int  # -1 left, 0 hold, +1 right
    source: CommandSourceKind

    def __post_init__(self) -> None:
        if self.direction not in (-1, 0, 1):
            raise ValueError("direction must be -1, 0, or +1")


@dataclass(frozen=True)
class PedalState:
    left: bool
    right: bool


@dataclass(frozen=True)
class ImuSample:
    t: float  # seconds
    accel: Vec3  # m/s^2, specific force (reads +g along up axis at rest)
    gyro: Vec3  # rad/s
    mag: Vec3 | None = None  # unitless; normalized before use


@dataclass(frozen=True)
class OrientationState:
    """Unit-quaternion attitude estimate with PI feedback gains."""

    q: Quat = (1.0, 0.0, 0.0, 0.0)
    integral: Vec3 = (0.0, 0.0, 0.0)
    kp: float = 1.0
    ki: float = 0.0


def _normalize3(v: Vec3) -> Vec3 | None:
    n = math.sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])
    if n == 0.0:
        return None
    return (v[0] / n, v[1] / n, v[2] / n)


def mahony_update(state: OrientationState, sample: ImuSample, dt: float) -> OrientationState:
    """One Mahony filter step: gravity (and optional magnetic) error feedback.

    The correction is the cross product of the measured and predicted
    field directions, scaled by kp (plus ki times its integral) and added
    to the gyro rate before quaternion integration. A zero-norm
    accelerometer sample is skipped and the state returned unchanged.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    a = _normalize3(sample.accel)
    if a is None:
        return state

    q0, q1, q2, q3 = state.q
    # predicted gravity direction in the body frame (world +z rotated by q')
    vx = 2.0 * (q1 * q3 - q0 * q2)
    vy = 2.0 * (q0 * q1 + q2 * q3)
    vz = q0 * q0 - q1 * q1 - q2 * q2 + q3 * q3
    ex = a[1] * vz - a[2] * vy
    ey = a[2] * vx - a[0] * vz
    ez = a[0] * vy - a[1] * vx

    m = _normalize3(sample.mag) if sample.mag is not None else None
    if m is not None:
        # reference field from the current estimate: rotate m to world,
        # zero its east component, rotate back, and compare
        hx, hy, hz = _rotate(state.q, m)
        bx = math.sqrt(hx * hx + hy * hy)
        wx, wy, wz = _rotate_inv(state.q, (bx, 0.0, hz))
        ex += m[1] * wz - m[2] * wy
        ey += m[2] * wx - m[0] * wz
        ez += m[0] * wy - m[1] * wx

    ix, iy, iz = state.integral
    if state.ki > 0.0:
        ix += ex * dt
        iy += ey * dt
        iz += ez * dt
    gx = sample.gyro[0] + state.kp * ex + state.ki * ix
    gy = sample.gyro[1] + state.kp * ey + state.ki * iy
    gz = sample.gyro[2] + state.kp * ez + state.ki * iz

    # quaternion rate integration: q += 0.5 * q x (0, omega) * dt
    half_dt = 0.5 * dt
    nq0 = q0 + (-q1 * gx - q2 * gy - q3 * gz) * half_dt
    nq1 = q1 + (q0 * gx + q2 * gz - q3 * gy) * half_dt
    nq2 = q2 + (q0 * gy - q1 * gz + q3 * gx) * half_dt
    nq3 = q3 + (q0 * gz + q1 * gy - q2 * gx) * half_dt
    norm = math.sqrt(nq0 * nq0 + nq1 * nq1 + nq2 * nq2 + nq3 * nq3)
    q = (nq0 / norm, nq1 / norm, nq2 / norm, nq3 / norm)
    return replace(state, q=q, integral=(ix, iy, iz))


def _rotate(q: Quat, v: Vec3) -> Vec3:
    """Rotate v from the body frame into the world frame."""
    q0, q1, q2, q3 = q
    x, y, z = v
    return (
        (q0 * q0 + q1 * q1 - q2 * q2 - q3 * q3) * x
        + 2.0 * (q1 * q2 - q0 * q3) * y
        + 2.0 * (q1 * q3 + q0 * q2) * z,
        2.0 * (q1 * q2 + q0 * q3) * x
        + (q0 * q0 - q1 * q1 + q2 * q2 - q3 * q3) * y
        + 2.0 * (q2 * q3 - q0 * q1) * z,
        2.0 * (q1 * q3 - q0 * q2) * x
        + 2.0 * (q2 * q3 + q0 * q1) * y
        + (q0 * q0 - q1 * q1 - q2 * q2 + q3 * q3) * z,
    )


def _rotate_inv(q: Quat, v: Vec3) -> Vec3:
    q0, q1, q2, q3 = q
    return _rotate((q0, -q1, -q2, -q3), v)


def roll_angle(q: Quat) -> float:
    """Roll about the forward (x) axis in degrees, range (-180, 180]."""
    q0, q1, q2, q3 = q
    roll = math.degrees(math.atan2(2.0 * (q0 * q1 + q2 * q3), 1.0 - 2.0 * (q1 * q1 + q2 * q2)))
    if roll <= -180.0:
        roll += 360.0
    return roll


def joystick_map(roll_deg: float, config: GameConfig) -> LateralCommand:
    """Deadzone then sign: positive roll (rightward tilt) moves right."""
    if abs(roll_deg) <= config.deadzone_deg:
        direction = 0
    else:
        direction = 1 if roll_deg > 0 else -1
    return LateralCommand(direction=direction, source=CommandSourceKind.JOYSTICK)


def pedal_map(pedals: PedalState) -> LateralCommand:
    """Only-left moves left, only-right moves right, both or neither cancel."""
    direction = int(pedals.right) - int(pedals.left)
    return LateralCommand(direction=direction, source=CommandSourceKind.PEDAL)


KEY_LEFT = "left"
KEY_RIGHT = "right"


def keyboard_map(keys: set[str]) -> LateralCommand:
    direction = int(KEY_RIGHT in keys) - int(KEY_LEFT in keys)
    return LateralCommand(direction=direction, source=CommandSourceKind.KEYBOARD)


def load_imu_stream(path: str | Path) -> Iterator[ImuSample]:
    """Read a JSONL IMU stream: {t, ax, ay, az, gx, gy, gz, mx?, my?, mz?}."""
    last_t = None
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            row = json.loads(line)
            sample = imu_sample_from_dict(row)
            if last_t is not None and sample.t <= last_t:
                raise ValueError(f"{path}:{line_no}: timestamps must strictly increase")
            last_t = sample.t
            yield sample


def imu_sample_from_dict(row: dict) -> ImuSample:
    mag = None
    if all(row.get(k) is not None for k in ("mx", "my", "mz")):
        mag = (float(row["mx"]), float(row["my"]), float(row["mz"]))
    return ImuSample(
        t=float(row["t"]),
        accel=(float(row["ax"]), float(row["ay"]), float(row["az"])),
        gyro=(float(row["gx"]), float(row["gy"]), float(row["gz"])),
        mag=mag,
    )
