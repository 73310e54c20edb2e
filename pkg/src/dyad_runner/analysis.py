"""Session-directory analysis: metrics, survey scoring, comparison tables.

Walks an output directory of one or more dyad sessions, summarizes the
performance windows, scores post-block questionnaires per condition, and
runs the normality-gated comparison batteries. Emits the comparison
report plus supporting CSVs (performance summaries, per-checkpoint
survey scores, condition-level median/IQR and mean/SD, IOS changes).
"""

from __future__ import annotations

import csv
import statistics
from dataclasses import dataclass, field
from pathlib import Path

from .config import Device, Mode, Role
from .metrics import (
    PerformanceSummary,
    participant_id,
    summarize_block,
    write_summary_csv,
)
from .session.plan import Instrument
from .session.storage import list_dyads, load_block_records, read_plan, read_surveys
from .stats.report import (
    ComparisonRow,
    MetricValues,
    imi_battery,
    panas_battery,
    performance_battery,
    run_battery,
    write_comparisons_csv,
)
from .stats.surveys import SurveyResponse, ios_change, score_imi, score_panas

PERFORMANCE_METRICS = ("Score", "Area Error")
PANAS_METRICS = ("Positive", "Negative")
IMI_METRICS = ("Tension", "Interest", "Competence")


@dataclass
class SurveyScoreRow:
    participant: str
    role: Role
    position: str
    instrument: str
    metric: str
    value: float
    block: int | None = None
    mode: Mode | None = None
    device: Device | None = None


@dataclass
class AnalysisResult:
    summaries: list[PerformanceSummary] = field(default_factory=list)
    survey_scores: list[SurveyScoreRow] = field(default_factory=list)
    ios_changes: list[tuple[str, int, int, int]] = field(default_factory=list)
    comparisons: list[ComparisonRow] = field(default_factory=list)
    dyads: list[str] = field(default_factory=list)


class AnalysisError(RuntimeError):
    pass


def _score_checkpoint_surveys(out_dir: Path, dyad_id: str, plan) -> list[SurveyScoreRow]:
    block_info = {b.index: (b.mode, b.pcg_device) for b in plan.blocks}
    rows: list[SurveyScoreRow] = []
    for payload in read_surveys(out_dir, dyad_id):
        participant = payload["participant"]
        position = payload["position"]
        instrument = payload["instrument"]
        scores = payload["item_scores"]
        role = Role.PPS if participant.endswith(Role.PPS.value) else Role.PCG
        block = None
        mode = device = None
        if position.startswith("after_block_") or position.startswith("before_block_"):
            block = int(position.rsplit("_", 1)[1])
            mode, device = block_info[block]
        if instrument == Instrument.IMI.value:
            imi = score_imi(SurveyResponse.of(Instrument.IMI, scores))
            for metric, value in zip(IMI_METRICS, (imi.tension, imi.interest, imi.competence)):
                rows.append(
                    SurveyScoreRow(
                        participant, role, position, instrument, metric, value,
                        block, mode, device,
                    )
                )
        elif instrument == Instrument.PANAS.value:
            positive, negative = score_panas(SurveyResponse.of(Instrument.PANAS, scores))
            for metric, value in zip(PANAS_METRICS, (positive, negative)):
                rows.append(
                    SurveyScoreRow(
                        participant, role, position, instrument, metric, float(value),
                        block, mode, device,
                    )
                )
        elif instrument == Instrument.IOS.value:
            rows.append(
                SurveyScoreRow(
                    participant, role, position, instrument, "IOS", float(scores[0]),
                    block, mode, device,
                )
            )
        # preference answers are categorical; they are carried in the raw files
    return rows


def analyze_sessions(out_dir: str | Path) -> AnalysisResult:
    out_dir = Path(out_dir)
    result = AnalysisResult(dyads=list_dyads(out_dir))
    if not result.dyads:
        raise AnalysisError(f"no dyad sessions found under {out_dir}")

    perf_values: MetricValues = {
        m: {Role.PPS: {}, Role.PCG: {}} for m in PERFORMANCE_METRICS
    }
    survey_values: MetricValues = {
        m: {Role.PPS: {}, Role.PCG: {}} for m in (*PANAS_METRICS, *IMI_METRICS)
    }

    for dyad_id in result.dyads:
        plan = read_plan(out_dir, dyad_id)
        for block in plan.blocks:
            records = load_block_records(out_dir, dyad_id, block.index)
            if len(records) != 8 or not all(r.complete for r in records):
                continue  # incomplete blocks are excluded from analysis
            for role in (Role.PPS, Role.PCG):
                summary = summarize_block(records, role, dyad_id)
                result.summaries.append(summary)
                condition = (block.mode, block.pcg_device)
                perf = perf_values["Score"][role].setdefault(summary.participant, {})
                perf[condition] = summary.mean_score
                area = perf_values["Area Error"][role].setdefault(summary.participant, {})
                area[condition] = summary.mean_area_error

        scored = _score_checkpoint_surveys(out_dir, dyad_id, plan)
        result.survey_scores.extend(scored)
        # post-block administrations carry the condition comparisons
        for row in scored:
            if row.position.startswith("after_block_") and row.metric in survey_values:
                survey_values[row.metric][row.role].setdefault(row.participant, {})[
                    (row.mode, row.device)
                ] = row.value

        ios = {
            (r.participant, r.position): int(r.value)
            for r in scored
            if r.instrument == Instrument.IOS.value
        }
        for role in (Role.PPS, Role.PCG):
            participant = participant_id(dyad_id, role)
            pre = ios.get((participant, "session_start"))
            post = ios.get((participant, "session_end"))
            if pre is not None and post is not None:
                result.ios_changes.append((participant, pre, post, ios_change(pre, post)))

    result.comparisons.extend(run_battery(performance_battery(), perf_values))
    result.comparisons.extend(run_battery(panas_battery(), survey_values))
    result.comparisons.extend(run_battery(imi_battery(), survey_values))
    return result


def _condition_survey_summary(rows: list[SurveyScoreRow]) -> list[list[str]]:
    grouped: dict[tuple[Role, Mode, Device, str], list[float]] = {}
    for row in rows:
        if row.mode is None or not row.position.startswith("after_block_"):
            continue
        grouped.setdefault((row.role, row.mode, row.device, row.metric), []).append(row.value)
    out = [["role", "mode", "device", "metric", "median", "iqr", "mean", "sd", "n"]]
    for (role, mode, device, metric), values in sorted(
        grouped.items(), key=lambda kv: (kv[0][0].value, kv[0][1].value, kv[0][2].value, kv[0][3])
    ):
        values.sort()
        median = statistics.median(values)
        if len(values) >= 2:
            q = statistics.quantiles(values, n=4, method="inclusive")
            iqr = q[2] - q[0]
            sd = statistics.stdev(values)
        else:
            iqr = 0.0
            sd = 0.0
        out.append(
            [
                role.value,
                mode.value,
                device.value,
                metric,
                f"{median:.2f}",
                f"{iqr:.2f}",
                f"{statistics.fmean(values):.2f}",
                f"{sd:.2f}",
                str(len(values)),
            ]
        )
    return out


def write_report(result: AnalysisResult, report_path: str | Path) -> dict[str, Path]:
    """The comparison CSV at report_path plus supporting CSVs alongside it."""
    report_path = Path(report_path)
    base = report_path.with_suffix("")
    written = {"report": write_comparisons_csv(result.comparisons, report_path)}

    written["summary"] = write_summary_csv(result.summaries, Path(f"{base}_performance.csv"))

    survey_path = Path(f"{base}_survey_scores.csv")
    with open(survey_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["participant", "position", "block", "mode", "device", "instrument", "metric", "value"]
        )
        for row in result.survey_scores:
            writer.writerow(
                [
                    row.participant,
                    row.position,
                    "" if row.block is None else row.block,
                    "" if row.mode is None else row.mode.value,
                    "" if row.device is None else row.device.value,
                    row.instrument,
                    row.metric,
                    f"{row.value:.4f}",
                ]
            )
    written["survey_scores"] = survey_path

    condition_path = Path(f"{base}_survey_summary.csv")
    with open(condition_path, "w", newline="", encoding="utf-8") as fh:
        csv.writer(fh).writerows(_condition_survey_summary(result.survey_scores))
    written["survey_summary"] = condition_path

    ios_path = Path(f"{base}_ios.csv")
    with open(ios_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["participant", "pre", "post", "change"])
        for participant, pre, post, change in result.ios_changes:
            writer.writerow([participant, pre, post, change])
    written["ios"] = ios_path
    return written
