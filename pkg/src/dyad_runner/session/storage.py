"""On-disk layout and canonical serialization of session artifacts.

Layout under an output root:

    <out>/<dyad_id>/plan.json
    <out>/<dyad_id>/block<k>/trial<j>.jsonl
    <out>/<dyad_id>/surveys/<position>__<participant>__<instrument>.json

Trial logs are JSON Lines: a meta header, one row per tick, and a final
line. Serialization is canonical (sorted keys, fixed separators, repr
floats) so identical simulations produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..config import Device, GameConfig, Mode
from .plan import SessionPlan, validate_plan
from .runner import TickRow, TrialRecord, UnitInfo


def dumps_canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def dyad_dir(out_dir: str | Path, dyad_id: str) -> Path:
    return Path(out_dir) / dyad_id


def plan_path(out_dir: str | Path, dyad_id: str) -> Path:
    return dyad_dir(out_dir, dyad_id) / "plan.json"


def trial_path(out_dir: str | Path, dyad_id: str, block: int, index: int) -> Path:
    return dyad_dir(out_dir, dyad_id) / f"block{block}" / f"trial{index}.jsonl"


def survey_path(
    out_dir: str | Path, dyad_id: str, position: str, participant: str, instrument: str
) -> Path:
    name = f"{position}__{participant}__{instrument}.json"
    return dyad_dir(out_dir, dyad_id) / "surveys" / name


def write_plan(plan: SessionPlan, out_dir: str | Path) -> Path:
    path = plan_path(out_dir, plan.dyad_id)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_canonical(plan.to_dict()) + "\n", encoding="utf-8")
    return path


def read_plan(out_dir: str | Path, dyad_id: str) -> SessionPlan:
    with open(plan_path(out_dir, dyad_id), encoding="utf-8") as fh:
        plan = SessionPlan.from_dict(json.load(fh))
    validate_plan(plan)
    return plan


def serialize_trial_record(record: TrialRecord) -> str:
    lines = [dumps_canonical(record.meta_dict())]
    lines.extend(dumps_canonical(row.to_dict()) for row in record.rows)
    lines.append(
        dumps_canonical(
            {
                "type": "final",
                "scores": list(record.final_scores),
                "complete": record.complete,
                "ticks": len(record.rows),
            }
        )
    )
    return "\n".join(lines) + "\n"


def write_trial_record(record: TrialRecord, out_dir: str | Path) -> Path:
    path = trial_path(out_dir, record.dyad_id, record.block, record.index)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(serialize_trial_record(record), encoding="utf-8")
    return path


def read_trial_record(path: str | Path) -> TrialRecord:
    with open(path, encoding="utf-8") as fh:
        lines = [json.loads(line) for line in fh if line.strip()]
    if not lines or lines[0].get("type") != "meta":
        raise ValueError(f"{path}: missing meta header")
    meta = lines[0]
    record = TrialRecord(
        dyad_id=meta["dyad_id"],
        block=meta["block"],
        index=meta["index"],
        mode=Mode(meta["mode"]),
        practice=meta["practice"],
        pcg_device=Device(meta["pcg_device"]),
        pps_amplitude=meta["amplitudes"]["PPS"],
        pcg_amplitude=meta["amplitudes"]["PCG"],
        trial_seed=meta["trial_seed"],
        config=GameConfig.from_dict(meta["config"]),
        units=tuple(
            UnitInfo(u["label"], u["amplitude"], u["phase"]) for u in meta["units"]
        ),
    )
    final = None
    for line in lines[1:]:
        if line["type"] == "tick":
            record.rows.append(TickRow.from_dict(line))
        elif line["type"] == "final":
            final = line
    if final is not None:
        record.final_scores = tuple(final["scores"])
        record.complete = final["complete"]
    return record


def is_complete_trial(path: Path) -> bool:
    if not path.exists():
        return False
    try:
        last = path.read_text(encoding="utf-8").rstrip("\n").rsplit("\n", 1)[-1]
        parsed = json.loads(last)
    except (OSError, json.JSONDecodeError):
        return False
    return parsed.get("type") == "final" and parsed.get("complete") is True


def completed_trials(out_dir: str | Path, plan: SessionPlan) -> set[tuple[int, int]]:
    done = set()
    for trial in plan.all_trials():
        if is_complete_trial(trial_path(out_dir, plan.dyad_id, trial.block, trial.index)):
            done.add((trial.block, trial.index))
    return done


def write_survey(
    out_dir: str | Path,
    dyad_id: str,
    position: str,
    participant: str,
    instrument: str,
    item_scores: list[int],
) -> Path:
    path = survey_path(out_dir, dyad_id, position, participant, instrument)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "participant": participant,
        "position": position,
        "instrument": instrument,
        "item_scores": item_scores,
    }
    path.write_text(dumps_canonical(payload) + "\n", encoding="utf-8")
    return path


def read_surveys(out_dir: str | Path, dyad_id: str) -> list[dict]:
    root = dyad_dir(out_dir, dyad_id) / "surveys"
    if not root.is_dir():
        return []
    out = []
    for path in sorted(root.glob("*.json")):
        with open(path, encoding="utf-8") as fh:
            out.append(json.load(fh))
    return out


def load_block_records(out_dir: str | Path, dyad_id: str, block: int) -> list[TrialRecord]:
    records = []
    for index in range(1, 9):
        path = trial_path(out_dir, dyad_id, block, index)
        if path.exists():
            records.append(read_trial_record(path))
    return records


def list_dyads(out_dir: str | Path) -> list[str]:
    root = Path(out_dir)
    if not root.is_dir():
        return []
    return sorted(p.name for p in root.iterdir() if (p / "plan.json").exists())
