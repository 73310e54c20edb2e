"""dyad-runner command line: plan, simulate, analyze, replay, serve."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .agents import AgentSpec, parse_agent_arg
from .analysis import analyze_sessions, write_report
from .config import Device, GameConfig, Role
from .session.plan import SessionPlan, build_plan
from .session.runner import replay_sources, run_trial, trial_plan_of
from .session.storage import (
    dumps_canonical,
    read_trial_record,
    serialize_trial_record,
)
from .simulate import simulate_session


def _load_config(path: str | None, seed: int | None = None) -> GameConfig:
    config = GameConfig.from_file(path) if path else GameConfig()
    if seed is not None:
        config = config.with_seed(seed)
    return config


@click.group()
@click.version_option(package_name="dyad-runner")
def main() -> None:
    """Collaborative rehab exergame: headless simulation, live serving, analysis."""


@main.command("plan")
@click.option("--dyad", "dyad_id", required=True, help="Dyad identifier.")
@click.option(
    "--first-device",
    type=click.Choice(["pedal", "keyboard"]),
    default=None,
    help="PCG device for blocks 1-2 (drawn from the seed when omitted).",
)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
              help="Write the plan JSON here instead of stdout.")
def plan_cmd(dyad_id: str, first_device: str | None, seed: int, out_path: str | None) -> None:
    """Build the counterbalanced 4-block session plan."""
    device = Device(first_device) if first_device else None
    plan = build_plan(dyad_id, first_device=device, master_seed=seed)
    text = dumps_canonical(plan.to_dict()) + "\n"
    if out_path:
        Path(out_path).parent.mkdir(parents=True, exist_ok=True)
        Path(out_path).write_text(text, encoding="utf-8")
        click.echo(f"wrote {out_path}")
    else:
        click.echo(text, nl=False)


def _parse_blocks(text: str | None) -> set[int] | None:
    if not text:
        return None
    blocks: set[int] = set()
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-", 1)
            blocks.update(range(int(lo), int(hi) + 1))
        else:
            blocks.add(int(part))
    return blocks


@main.command("simulate")
@click.option(
    "--agents",
    default="perfect,perfect",
    show_default=True,
    help="PPS,PCG agent specs: perfect | lagged:SECONDS | bangbang:SD | idle.",
)
@click.option("--blocks", default=None, help="Subset of blocks, e.g. '1,3' or '1-2'.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--dyads", type=int, default=1, show_default=True, help="Dyad sessions to run.")
@click.option("--dyad-prefix", default="SIM", show_default=True)
@click.option(
    "--out", "out_dir", envvar="DYAD_RUNNER_OUT", default="sessions", show_default=True,
    type=click.Path(file_okay=False),
)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--resume/--no-resume", default=False, show_default=True)
def simulate_cmd(
    agents: str,
    blocks: str | None,
    seed: int,
    dyads: int,
    dyad_prefix: str,
    out_dir: str,
    config_path: str | None,
    resume: bool,
) -> None:
    """Run seeded headless sessions with synthetic agents."""
    tokens = [t for t in agents.split(",") if t.strip()]
    if len(tokens) == 1:
        tokens = tokens * 2
    if len(tokens) != 2:
        raise click.BadParameter("expected one or two agent specs (PPS,PCG)")
    specs: dict[Role, AgentSpec] = {
        Role.PPS: parse_agent_arg(tokens[0]),
        Role.PCG: parse_agent_arg(tokens[1]),
    }
    config = _load_config(config_path, seed)
    block_set = _parse_blocks(blocks)
    for i in range(dyads):
        dyad_id = f"{dyad_prefix}{i}"
        plan = simulate_session(
            dyad_id,
            specs,
            config,
            master_seed=seed + i,
            out_dir=out_dir,
            blocks=block_set,
            resume=resume,
        )
        click.echo(
            f"{dyad_id}: {len(plan.all_trials())} trials planned, "
            f"devices {plan.device_order[0].value} then {plan.device_order[1].value}"
        )
    click.echo(f"session data under {out_dir}")


@main.command("analyze")
@click.option(
    "--in", "in_dir", envvar="DYAD_RUNNER_OUT", default="sessions", show_default=True,
    type=click.Path(exists=True, file_okay=False),
)
@click.option(
    "--report", "report_path", default="report.csv", show_default=True,
    type=click.Path(dir_okay=False),
)
def analyze_cmd(in_dir: str, report_path: str) -> None:
    """Score sessions and emit the comparison tables."""
    result = analyze_sessions(in_dir)
    written = write_report(result, report_path)
    click.echo(f"analyzed {len(result.dyads)} dyad(s): {', '.join(result.dyads)}")
    for name, path in written.items():
        click.echo(f"  {name}: {path}")
    skipped = sum(1 for row in result.comparisons if row.result is None)
    if skipped:
        click.echo(f"  note: {skipped} comparison(s) skipped (insufficient or degenerate data)")


@main.command("replay")
@click.option(
    "--trial", "trial_file", required=True, type=click.Path(exists=True, dir_okay=False)
)
@click.option("--verify/--no-verify", default=True, show_default=True,
              help="Re-simulate from the logged commands and compare byte-for-byte.")
def replay_cmd(trial_file: str, verify: bool) -> None:
    """Re-run a recorded trial from its own command log."""
    record = read_trial_record(trial_file)
    click.echo(
        f"trial block {record.block} #{record.index} ({record.mode.value}), "
        f"ticks={len(record.rows)}, scores={list(record.final_scores)}, "
        f"complete={record.complete}"
    )
    if not verify:
        return
    if not record.complete:
        click.echo("incomplete record: replay verification skipped")
        sys.exit(2)
    replayed = run_trial(
        trial_plan_of(record), replay_sources(record), record.config, record.dyad_id
    )
    original = Path(trial_file).read_text(encoding="utf-8")
    if serialize_trial_record(replayed) == original:
        click.echo("replay OK: record reproduced byte-for-byte")
    else:
        click.echo("replay MISMATCH: re-simulation differs from the log")
        sys.exit(1)


@main.command("serve")
@click.option("--plan", "plan_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--dyad", "dyad_id", default=None, help="Build a plan inline instead of --plan.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option(
    "--bind", envvar="DYAD_RUNNER_BIND", default="127.0.0.1:8765", show_default=True
)
@click.option(
    "--out", "out_dir", envvar="DYAD_RUNNER_OUT", default="sessions", show_default=True,
    type=click.Path(file_okay=False),
)
@click.option("--lockstep", is_flag=True, default=False,
              help="Advance only when every player has sent the current tick (scripted clients).")
@click.option("--frontend", "frontend_dir", type=click.Path(file_okay=False), default=None,
              help="Directory of built web-client assets to serve at /.")
def serve_cmd(
    plan_path: str | None,
    dyad_id: str | None,
    seed: int,
    config_path: str | None,
    bind: str,
    out_dir: str,
    lockstep: bool,
    frontend_dir: str | None,
) -> None:
    """Host a live two-player session."""
    from .server.app import serve_session

    if plan_path:
        plan = SessionPlan.load(plan_path)
    elif dyad_id:
        plan = build_plan(dyad_id, master_seed=seed)
    else:
        raise click.UsageError("provide --plan FILE or --dyad ID")
    config = _load_config(config_path, seed if config_path is None else None)
    if frontend_dir is None:
        bundled = Path(__file__).resolve().parents[2] / "frontend"
        if (bundled / "index.html").exists() and (bundled / "dist").is_dir():
            frontend_dir = str(bundled)
    click.echo(f"serving dyad {plan.dyad_id} on ws://{bind}/ws (out: {out_dir})")
    code = serve_session(
        plan,
        config,
        bind=bind,
        out_dir=out_dir,
        realtime=not lockstep,
        frontend_dir=frontend_dir,
    )
    sys.exit(code)


if __name__ == "__main__":
    main()
