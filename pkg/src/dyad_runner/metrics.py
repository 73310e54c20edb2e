"""Performance measures over trial records: score and area error.

Area error integrates the absolute lateral deviation between the scoring
trajectory (the player's in solo mode, the ball's in collaborative mode)
and the balloon sinusoid, trapezoidally over depth z. Units are m^2;
with constant forward speed this differs from a time integral only by
the forward-speed factor.
"""

from __future__ import annotations

import csv
import math
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

from .config import Mode, Role
from .session.runner import TrialRecord, performance_window

TWO_PI = 2.0 * math.pi


class TrajectorySample(NamedTuple):
    z: float
    x: float


class MetricInputError(ValueError):
    pass


def area_error(
    trajectory: list[TrajectorySample] | list[tuple[float, float]],
    amplitude: float,
    frequency: float,
    phase: float,
) -> float:
    """Trapezoidal integral of |x(z) - A sin(2 pi f z + phase)| over the samples."""
    if len(trajectory) < 2:
        raise MetricInputError("need at least two trajectory samples")
    total = 0.0
    prev_z = None
    prev_err = None
    for z, x in trajectory:
        if prev_z is not None and z <= prev_z:
            raise MetricInputError("trajectory z must strictly increase")
        err = abs(x - amplitude * math.sin(TWO_PI * frequency * z + phase))
        if prev_z is not None:
            total += 0.5 * (err + prev_err) * (z - prev_z)
        prev_z, prev_err = z, err
    return total


def unit_trajectory(record: TrialRecord, unit: int) -> list[TrajectorySample]:
    """The scoring trajectory of one unit, starting from the centered spawn."""
    samples = [TrajectorySample(0.0, 0.0)]
    if record.mode is Mode.COLLABORATIVE:
        samples.extend(TrajectorySample(row.z, row.ball[0]) for row in record.rows)
    else:
        samples.extend(TrajectorySample(row.z, row.x[unit]) for row in record.rows)
    return samples


def trial_area_errors(record: TrialRecord) -> tuple[float, ...]:
    """Area error per scoring unit, also cached on the record."""
    errors = []
    for i, unit in enumerate(record.units):
        traj = unit_trajectory(record, i)
        errors.append(
            area_error(traj, unit.amplitude, record.config.sinusoid_frequency, unit.phase)
        )
    record.area_errors = tuple(errors)
    return record.area_errors


def trial_score(record: TrialRecord, unit: int = 0) -> int:
    """Recounted collection events; must agree with the logged final score."""
    if not record.complete:
        raise MetricInputError("incomplete trial records are excluded from analysis")
    counted = sum(1 for row in record.rows for u, _ in row.events if u == unit)
    if record.final_scores and counted != record.final_scores[unit]:
        raise MetricInputError(
            f"event recount {counted} disagrees with logged score {record.final_scores[unit]}"
        )
    return counted


def unit_index_for_role(record: TrialRecord, role: Role) -> int:
    """Which scoring unit carries this participant's performance."""
    if record.mode is Mode.COLLABORATIVE:
        return 0
    for i, unit in enumerate(record.units):
        if unit.label == role.value:
            return i
    raise MetricInputError(f"record has no unit for {role.value}")


@dataclass(frozen=True)
class PerformanceSummary:
    participant: str
    role: Role
    block: int
    mode: Mode
    device: str  # the PCG device in play for the block
    scores: tuple[float, ...]
    area_errors: tuple[float, ...]

    @property
    def mean_score(self) -> float:
        return statistics.fmean(self.scores)

    @property
    def sd_score(self) -> float:
        return statistics.stdev(self.scores) if len(self.scores) > 1 else 0.0

    @property
    def mean_area_error(self) -> float:
        return statistics.fmean(self.area_errors)

    @property
    def sd_area_error(self) -> float:
        return statistics.stdev(self.area_errors) if len(self.area_errors) > 1 else 0.0


def participant_id(dyad_id: str, role: Role) -> str:
    return f"{dyad_id}-{role.value}"


def summarize_block(
    block_records: list[TrialRecord], role: Role, dyad_id: str
) -> PerformanceSummary:
    """Mean and SD over the block's four performance trials for one participant."""
    window = performance_window(block_records)
    usable = [r for r in window if r.complete]
    if not usable:
        raise MetricInputError("no complete performance trials in block")
    scores = []
    errors = []
    for record in usable:
        unit = unit_index_for_role(record, role)
        scores.append(float(trial_score(record, unit)))
        if record.area_errors is None:
            trial_area_errors(record)
        errors.append(record.area_errors[unit])
    first = usable[0]
    return PerformanceSummary(
        participant=participant_id(dyad_id, role),
        role=role,
        block=first.block,
        mode=first.mode,
        device=first.pcg_device.value,
        scores=tuple(scores),
        area_errors=tuple(errors),
    )


def write_summary_csv(summaries: list[PerformanceSummary], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "participant",
                "block",
                "mode",
                "device",
                "mean_score",
                "sd_score",
                "mean_area_error",
                "sd_area_error",
            ]
        )
        for s in summaries:
            writer.writerow(
                [
                    s.participant,
                    s.block,
                    s.mode.value,
                    s.device,
                    f"{s.mean_score:.4f}",
                    f"{s.sd_score:.4f}",
                    f"{s.mean_area_error:.4f}",
                    f"{s.sd_area_error:.4f}",
                ]
            )
    return path
