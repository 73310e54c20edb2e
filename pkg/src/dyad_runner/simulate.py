"""Headless session execution with synthetic agents.

Runs the full four-block protocol for one or more dyads, persisting
trial logs and seeded synthetic questionnaire answers in the same layout
the live server writes, so the analysis pipeline and the determinism
checks exercise identical code paths.
"""

from __future__ import annotations

from pathlib import Path

from .agents import AgentSpec, make_agent
from .config import Device, GameConfig, Role
from .devices import CommandSourceKind
from .seeds import derive_seed, rng_for
from .session.plan import SessionPlan, build_plan
from .session.runner import TRIAL_ROLES, run_trial
from .session.storage import (
    completed_trials,
    write_plan,
    write_survey,
    write_trial_record,
)
from .stats.surveys import synthetic_response


def source_kind_for(role: Role, pcg_device: Device) -> CommandSourceKind:
    if role is Role.PPS:
        return CommandSourceKind.JOYSTICK
    return (
        CommandSourceKind.PEDAL
        if pcg_device is Device.PEDAL
        else CommandSourceKind.KEYBOARD
    )


def simulate_session(
    dyad_id: str,
    agent_specs: dict[Role, AgentSpec],
    config: GameConfig,
    master_seed: int,
    out_dir: str | Path,
    blocks: set[int] | None = None,
    first_device: Device | None = None,
    resume: bool = False,
    surveys: bool = True,
) -> SessionPlan:
    """Simulate one dyad's session; returns the plan it ran."""
    plan = build_plan(dyad_id, first_device=first_device, master_seed=master_seed)
    write_plan(plan, out_dir)
    done = completed_trials(out_dir, plan) if resume else set()

    for block in plan.blocks:
        if blocks is not None and block.index not in blocks:
            continue
        for trial in block.trials:
            if (block.index, trial.index) in done:
                continue
            sources = {}
            for role in TRIAL_ROLES:
                agent_seed = derive_seed(
                    master_seed, dyad_id, "agent", role.value, block.index, trial.index
                )
                sources[role] = make_agent(
                    agent_specs[role],
                    config,
                    agent_seed,
                    source=source_kind_for(role, block.pcg_device),
                )
            record = run_trial(trial, sources, config, dyad_id)
            write_trial_record(record, out_dir)

    if surveys:
        write_synthetic_surveys(plan, master_seed, out_dir)
    return plan


def write_synthetic_surveys(plan: SessionPlan, master_seed: int, out_dir: str | Path) -> None:
    """Seeded, valid questionnaire answers for every checkpoint and participant."""
    for checkpoint in plan.checkpoints:
        for role in TRIAL_ROLES:
            participant = f"{plan.dyad_id}-{role.value}"
            for instrument in checkpoint.instruments:
                rng = rng_for(
                    master_seed,
                    plan.dyad_id,
                    "survey",
                    checkpoint.position,
                    role.value,
                    instrument.value,
                )
                scores = synthetic_response(instrument, rng)
                write_survey(
                    out_dir,
                    plan.dyad_id,
                    checkpoint.position,
                    participant,
                    instrument.value,
                    scores,
                )
