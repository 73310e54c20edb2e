"""Comparison tables over per-participant condition values.

Each battery mirrors one of the study's reporting tables: performance
(score, area error), PANAS affect scales, and IMI subscales, compared
across play modes or across PCG input devices. Sign conventions follow
the tables: mode comparisons are collaborative minus solo, device
comparisons pedal minus keyboard. The significance flag column marks
p-values whose 2-decimal rounding is at or below 0.05, covering both
statistical and marginal significance.
"""

from __future__ import annotations

import csv
import statistics
from dataclasses import dataclass
from pathlib import Path

from ..config import Device, Mode, Role
from .tests import (
    DegenerateSampleError,
    PairedSample,
    StatsInputError,
    TestResult,
    gated_compare,
)

# participant -> {(mode, pcg_device) -> value}, per role
ConditionValues = dict[str, dict[tuple[Mode, Device], float]]
MetricValues = dict[str, dict[Role, ConditionValues]]


@dataclass(frozen=True)
class ComparisonSpec:
    sample_population: str
    role: Role
    groups: str  # "Mode" or "Devices"
    metric: str
    mode_filter: Mode | None = None  # devices comparisons within one mode
    device_filter: Device | None = None  # mode comparisons within one device


@dataclass(frozen=True)
class ComparisonRow:
    spec: ComparisonSpec
    result: TestResult | None
    note: str = ""


def _population(role: Role, mode: Mode | None = None, device: Device | None = None) -> str:
    tag = role.value
    if mode is not None:
        tag += " (C)" if mode is Mode.COLLABORATIVE else " (S)"
    elif device is not None:
        tag += " (P)" if device is Device.PEDAL else " (K)"
    return tag


def performance_battery() -> list[ComparisonSpec]:
    rows = []
    for metric in ("Score", "Area Error"):
        rows.append(ComparisonSpec(_population(Role.PCG), Role.PCG, "Mode", metric))
    for mode in (Mode.COLLABORATIVE, Mode.SOLO):
        for metric in ("Score", "Area Error"):
            rows.append(
                ComparisonSpec(
                    _population(Role.PCG, mode), Role.PCG, "Devices", metric, mode_filter=mode
                )
            )
    for metric in ("Score", "Area Error"):
        rows.append(ComparisonSpec(_population(Role.PPS), Role.PPS, "Mode", metric))
    return rows


def panas_battery() -> list[ComparisonSpec]:
    rows = []
    for role in (Role.PCG, Role.PPS):
        for metric in ("Positive", "Negative"):
            for mode in (Mode.SOLO, Mode.COLLABORATIVE):
                rows.append(
                    ComparisonSpec(
                        _population(role, mode), role, "Devices", metric, mode_filter=mode
                    )
                )
    return rows


def imi_battery() -> list[ComparisonSpec]:
    rows = []
    for metric in ("Tension", "Interest", "Competence"):
        for mode in (Mode.SOLO, Mode.COLLABORATIVE):
            rows.append(
                ComparisonSpec(
                    _population(Role.PCG, mode), Role.PCG, "Devices", metric, mode_filter=mode
                )
            )
    rows.append(
        ComparisonSpec(
            _population(Role.PCG, device=Device.PEDAL),
            Role.PCG,
            "Mode",
            "Competence",
            device_filter=Device.PEDAL,
        )
    )
    for metric in ("Tension", "Interest", "Competence"):
        for mode in (Mode.SOLO, Mode.COLLABORATIVE):
            rows.append(
                ComparisonSpec(
                    _population(Role.PPS, mode), Role.PPS, "Devices", metric, mode_filter=mode
                )
            )
    return rows


def _condition_mean(
    values: dict[tuple[Mode, Device], float], mode: Mode, device: Device | None
) -> float | None:
    picked = [
        v
        for (m, d), v in values.items()
        if m is mode and (device is None or d is device)
    ]
    if not picked:
        return None
    return statistics.fmean(picked)


def paired_sample_for(spec: ComparisonSpec, values: ConditionValues) -> PairedSample:
    labels = []
    a = []
    b = []
    for participant in sorted(values):
        conditions = values[participant]
        if spec.groups == "Mode":
            first = _condition_mean(conditions, Mode.COLLABORATIVE, spec.device_filter)
            second = _condition_mean(conditions, Mode.SOLO, spec.device_filter)
        elif spec.groups == "Devices":
            first = conditions.get((spec.mode_filter, Device.PEDAL))
            second = conditions.get((spec.mode_filter, Device.KEYBOARD))
        else:
            raise StatsInputError(f"unknown grouping {spec.groups!r}")
        if first is None or second is None:
            continue
        labels.append(participant)
        a.append(first)
        b.append(second)
    return PairedSample.of(a, b, labels)


def run_battery(
    specs: list[ComparisonSpec],
    values_by_metric: MetricValues,
    alpha: float = 0.05,
) -> list[ComparisonRow]:
    rows = []
    for spec in specs:
        values = values_by_metric.get(spec.metric, {}).get(spec.role, {})
        sample = paired_sample_for(spec, values)
        if len(sample.a) < 3:
            rows.append(ComparisonRow(spec, None, note=f"n={len(sample.a)} too small"))
            continue
        try:
            result = gated_compare(sample, alpha=alpha)
        except DegenerateSampleError:
            rows.append(ComparisonRow(spec, None, note="degenerate differences"))
            continue
        except StatsInputError as exc:
            rows.append(ComparisonRow(spec, None, note=str(exc)))
            continue
        rows.append(ComparisonRow(spec, result))
    return rows


def significance_flag(p: float) -> str:
    """Statistical or marginal significance: rounded p at or below 0.05."""
    return "*" if round(p, 2) <= 0.05 else ""


REPORT_COLUMNS = (
    "sample_population",
    "groups_tested",
    "metric",
    "test",
    "statistic",
    "df",
    "p",
    "flag",
)


def comparison_csv_rows(rows: list[ComparisonRow]) -> list[list[str]]:
    out = [list(REPORT_COLUMNS)]
    for row in rows:
        if row.result is None:
            out.append(
                [
                    row.spec.sample_population,
                    row.spec.groups,
                    row.spec.metric,
                    row.note or "skipped",
                    "",
                    "",
                    "",
                    "",
                ]
            )
            continue
        r = row.result
        out.append(
            [
                row.spec.sample_population,
                row.spec.groups,
                row.spec.metric,
                r.test.value,
                f"{r.statistic:.2f}",
                "" if r.df is None else str(r.df),
                f"{r.p_two_sided:.4f}",
                significance_flag(r.p_two_sided),
            ]
        )
    return out


def write_comparisons_csv(rows: list[ComparisonRow], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        csv.writer(fh).writerows(comparison_csv_rows(rows))
    return path
