"""Trial execution: drives the game engine from command sources and logs ticks.

The runner is the single owner of mutable trial state. Sources (agents,
replay logs, or the server's live input queues) are polled once per tick;
a source that ends early aborts the trial and the record is marked
incomplete so analysis can exclude it without failing the session.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..agents import PlayerView, ReplayAgent, ReplayExhausted
from ..config import Device, GameConfig, Mode, Role
from ..devices import CommandSourceKind, LateralCommand
from ..game import TrialState, engine
from ..game.balloons import generate_balloons
from ..seeds import rng_for
from .plan import TrialPlan

TRIAL_ROLES = (Role.PPS, Role.PCG)  # avatar order is fixed across the artifact


class ProtocolError(RuntimeError):
    """A block or session violates the protocol preconditions."""


@dataclass(frozen=True)
class UnitInfo:
    """One scoring unit: a solo player's track or the shared collaborative track."""

    label: str  # role name, or "ball" for the shared unit
    amplitude: float
    phase: float


@dataclass(frozen=True)
class TickRow:
    tick: int
    t: float  # seconds at the end of the tick
    z: float  # shared avatar depth at the end of the tick
    x: tuple[float, ...]  # per avatar, PPS first
    v: tuple[float, ...]
    cmd: tuple[int, ...]
    ball: tuple[float, float] | None  # (x, radius)
    scores: tuple[int, ...]
    events: tuple[tuple[int, int], ...]  # (unit, balloon index)

    def to_dict(self) -> dict:
        return {
            "type": "tick",
            "tick": self.tick,
            "t": self.t,
            "z": self.z,
            "x": list(self.x),
            "v": list(self.v),
            "cmd": list(self.cmd),
            "ball": list(self.ball) if self.ball is not None else None,
            "scores": list(self.scores),
            "events": [list(e) for e in self.events],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TickRow":
        return cls(
            tick=d["tick"],
            t=d["t"],
            z=d["z"],
            x=tuple(d["x"]),
            v=tuple(d["v"]),
            cmd=tuple(d["cmd"]),
            ball=tuple(d["ball"]) if d["ball"] is not None else None,
            scores=tuple(d["scores"]),
            events=tuple((e[0], e[1]) for e in d["events"]),
        )


@dataclass
class TrialRecord:
    dyad_id: str
    block: int
    index: int
    mode: Mode
    practice: bool
    pcg_device: Device
    pps_amplitude: float
    pcg_amplitude: float
    trial_seed: int
    config: GameConfig
    units: tuple[UnitInfo, ...]
    rows: list[TickRow] = field(default_factory=list)
    final_scores: tuple[int, ...] = ()
    complete: bool = False
    area_errors: tuple[float, ...] | None = None  # filled by metrics

    def meta_dict(self) -> dict:
        return {
            "type": "meta",
            "dyad_id": self.dyad_id,
            "block": self.block,
            "index": self.index,
            "mode": self.mode.value,
            "practice": self.practice,
            "pcg_device": self.pcg_device.value,
            "amplitudes": {"PPS": self.pps_amplitude, "PCG": self.pcg_amplitude},
            "trial_seed": self.trial_seed,
            "units": [
                {"label": u.label, "amplitude": u.amplitude, "phase": u.phase}
                for u in self.units
            ],
            "config": self.config.to_dict(),
        }

    def commands_for(self, player: int) -> list[int]:
        return [row.cmd[player] for row in self.rows]


class CommandSource:
    """Anything that yields one lateral command per tick (duck-typed)."""

    def command(self, view: PlayerView, tick: int) -> LateralCommand:  # pragma: no cover
        raise NotImplementedError


def build_trial_state(trial: TrialPlan, config: GameConfig) -> tuple[TrialState, tuple[UnitInfo, ...]]:
    """Expand a trial plan into the initial engine state plus unit metadata."""
    if trial.mode is Mode.COLLABORATIVE:
        rng = rng_for(trial.phase_seed("shared"))
        fields = (generate_balloons(trial.shared_amplitude, config, rng),)
        units = (UnitInfo("ball", fields[0].amplitude, fields[0].phase),)
    else:
        built = []
        units_list = []
        for role in TRIAL_ROLES:
            rng = rng_for(trial.phase_seed(role.value))
            f = generate_balloons(trial.amplitude_for(role), config, rng)
            built.append(f)
            units_list.append(UnitInfo(role.value, f.amplitude, f.phase))
        fields = tuple(built)
        units = tuple(units_list)
    noise_seeds = tuple(
        trial.noise_seed() if role is Role.PPS else None for role in TRIAL_ROLES
    )
    state = engine.new_trial(trial.mode, TRIAL_ROLES, fields, noise_seeds, config)
    return state, units


def view_for(state: TrialState, player: int) -> PlayerView:
    avatar = state.avatars[player]
    unit = 0 if state.mode is Mode.COLLABORATIVE else player
    return PlayerView(
        x=avatar.x, z=avatar.z, field=state.fields[unit], score=state.scores[unit]
    )


def record_tick(state: TrialState, commands: tuple[int, ...], config: GameConfig) -> TickRow:
    """Snapshot the post-tick state; `state.tick` has already advanced."""
    return TickRow(
        tick=state.tick - 1,
        t=state.tick / config.tick_rate,
        z=state.avatars[0].z,
        x=tuple(a.x for a in state.avatars),
        v=tuple(a.lateral_velocity for a in state.avatars),
        cmd=commands,
        ball=(state.ball.x, state.ball.radius) if state.ball is not None else None,
        scores=state.scores,
        events=tuple((e.unit, e.balloon) for e in state.events),
    )


def run_trial(
    trial: TrialPlan,
    sources: dict[Role, CommandSource],
    config: GameConfig,
    dyad_id: str,
) -> TrialRecord:
    """Execute one full trial headlessly. Missing commands abort the trial."""
    for role in TRIAL_ROLES:
        if role not in sources:
            raise ProtocolError(f"no command source for {role.value}")
    state, units = build_trial_state(trial, config)
    record = TrialRecord(
        dyad_id=dyad_id,
        block=trial.block,
        index=trial.index,
        mode=trial.mode,
        practice=trial.practice,
        pcg_device=trial.pcg_device,
        pps_amplitude=trial.pps_amplitude,
        pcg_amplitude=trial.pcg_amplitude,
        trial_seed=trial.trial_seed,
        config=config,
        units=units,
    )
    try:
        for t in range(config.ticks_per_trial):
            commands = tuple(
                sources[role].command(view_for(state, i), t).direction
                for i, role in enumerate(TRIAL_ROLES)
            )
            state = engine.tick(state, commands, config)
            record.rows.append(record_tick(state, commands, config))
    except ReplayExhausted:
        record.final_scores = state.scores
        record.complete = False
        return record
    record.final_scores = state.scores
    record.complete = True
    return record


def replay_sources(record: TrialRecord) -> dict[Role, ReplayAgent]:
    """Command sources that re-issue a record's logged per-tick directions."""
    kinds = {
        Role.PPS: CommandSourceKind.JOYSTICK,
        Role.PCG: CommandSourceKind.PEDAL
        if record.pcg_device is Device.PEDAL
        else CommandSourceKind.KEYBOARD,
    }
    return {
        role: ReplayAgent(record.commands_for(i), source=kinds[role])
        for i, role in enumerate(TRIAL_ROLES)
    }


def trial_plan_of(record: TrialRecord) -> TrialPlan:
    return TrialPlan(
        block=record.block,
        index=record.index,
        mode=record.mode,
        practice=record.practice,
        pcg_device=record.pcg_device,
        pps_amplitude=record.pps_amplitude,
        pcg_amplitude=record.pcg_amplitude,
        trial_seed=record.trial_seed,
    )


def performance_window(block_records: list[TrialRecord]) -> list[TrialRecord]:
    """The last four trials of a completed 8-trial block."""
    if len(block_records) != 8:
        raise ProtocolError(f"a block has 8 trials, got {len(block_records)}")
    ordered = sorted(block_records, key=lambda r: r.index)
    return ordered[4:]
