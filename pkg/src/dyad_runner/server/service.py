"""Authoritative live session: one loop owns the game state.

Connection handlers communicate with the loop only through per-client
inbound queues and per-client outbound queues; no game state is shared
across tasks. In realtime mode the loop advances on a wall-clock timer
and applies the latest queued input per player each tick. In lockstep
mode (scripted clients, equivalence testing) it waits for every player's
input for the current tick, which makes the run bit-reproducible.

A single client dropping mid-trial aborts that trial (persisted as an
incomplete record) and the loop waits for the role to rejoin before
redoing it; when every client is gone the session ends. Completed trials
and answered checkpoints are skipped on restart, so a disconnect costs
at most the interrupted trial.
"""

from __future__ import annotations

import asyncio
from dataclasses import dataclass, field

from ..config import Device, GameConfig, Mode, Role
from ..devices import (
    OrientationState,
    PedalState,
    imu_sample_from_dict,
    joystick_map,
    keyboard_map,
    mahony_update,
    pedal_map,
    roll_angle,
)
from ..game import engine
from ..session.plan import CheckpointSpec, Instrument, SessionPlan, TrialPlan
from ..session.runner import TRIAL_ROLES, TrialRecord, build_trial_state, record_tick
from ..session.storage import (
    is_complete_trial,
    survey_path,
    trial_path,
    write_plan,
    write_survey,
    write_trial_record,
)
from ..stats.surveys import default_instruments
from . import protocol as wire

BALLOON_LOOKAHEAD = 40.0  # m of track streamed ahead of the avatars
BALLOON_LOOKBEHIND = 5.0


class DuplicateRole(RuntimeError):
    pass


class SessionAborted(RuntimeError):
    """Every client left; the session ends and is resumable on restart."""


class PlayerDropped(RuntimeError):
    """One client left mid-step; the step is retried once they rejoin."""

    def __init__(self, role: Role):
        super().__init__(f"{role.value} disconnected")
        self.role = role


@dataclass
class ClientSlot:
    role: Role
    device: Device
    inbox: asyncio.Queue = field(default_factory=asyncio.Queue)
    outbox: asyncio.Queue = field(default_factory=asyncio.Queue)
    connected: bool = True
    out_seq: int = 0
    orientation: OrientationState = field(default_factory=OrientationState)
    last_imu_t: float | None = None
    current_direction: int = 0
    tick_directions: dict[int, int] = field(default_factory=dict)

    def queue(self, message) -> None:
        self.out_seq += 1
        self.outbox.put_nowait(message.model_copy(update={"seq": self.out_seq}))


class SessionService:
    def __init__(
        self,
        plan: SessionPlan,
        config: GameConfig,
        out_dir,
        realtime: bool = True,
    ):
        self.plan = plan
        self.config = config
        self.out_dir = out_dir
        self.realtime = realtime
        self.clients: dict[Role, ClientSlot] = {}
        self.players_ready = asyncio.Event()
        self.all_left = asyncio.Event()
        self.ever_ready = False
        self.finished = asyncio.Event()
        self.status = "waiting"
        self.instruments = default_instruments()
        # the plan, not the hello, decides which device the PCG holds per block
        self.active_pcg_device: Device | None = None
        # one token per trial execution; late inputs from an earlier
        # attempt (or an earlier trial) are discarded by token mismatch
        self.trial_token = 0

    # -- connection lifecycle -------------------------------------------------

    def join(self, hello: wire.Hello) -> ClientSlot:
        if hello.protocol_version != wire.PROTOCOL_VERSION:
            raise ValueError(
                f"protocol version {hello.protocol_version} unsupported"
            )
        if hello.dyad_id != self.plan.dyad_id:
            raise ValueError(f"session is for dyad {self.plan.dyad_id!r}")
        if hello.role in self.clients and self.clients[hello.role].connected:
            raise DuplicateRole(f"{hello.role.value} already joined")
        if hello.role is Role.PPS and hello.device is not Device.JOYSTICK:
            raise ValueError("the PPS plays with the joystick")
        if hello.role is Role.PCG and hello.device is Device.JOYSTICK:
            raise ValueError("the PCG plays with the pedal or keyboard")
        slot = ClientSlot(role=hello.role, device=hello.device)
        self.clients[hello.role] = slot
        slot.queue(
            wire.HelloAck(
                seq=0,
                config=self.config.to_dict(),
                plan_summary=self._plan_summary(),
            )
        )
        slot.queue(wire.SessionControl(seq=0, status=self.status))
        self.all_left.clear()
        if all(r in self.clients and self.clients[r].connected for r in TRIAL_ROLES):
            self.players_ready.set()
            self.ever_ready = True
        return slot

    def leave(self, slot: ClientSlot) -> None:
        slot.connected = False
        slot.inbox.put_nowait(None)  # wake any pending await
        self.players_ready.clear()
        if not any(s.connected for s in self.clients.values()):
            self.all_left.set()

    async def _require_players(self) -> None:
        """Block until both roles are connected; abort once everyone is gone."""
        while not self.players_ready.is_set():
            if not self.ever_ready:
                await self.players_ready.wait()
                continue
            if self.all_left.is_set():
                raise SessionAborted("all clients disconnected")
            ready = asyncio.create_task(self.players_ready.wait())
            gone = asyncio.create_task(self.all_left.wait())
            done, pending = await asyncio.wait(
                {ready, gone}, return_when=asyncio.FIRST_COMPLETED
            )
            for task in pending:
                task.cancel()

    def _plan_summary(self) -> dict:
        return {
            "dyad_id": self.plan.dyad_id,
            "blocks": [
                {
                    "index": b.index,
                    "mode": b.mode.value,
                    "pcg_device": b.pcg_device.value,
                    "trials": len(b.trials),
                }
                for b in self.plan.blocks
            ],
            "checkpoints": [c.position for c in self.plan.checkpoints],
        }

    def _broadcast(self, message) -> None:
        for slot in self.clients.values():
            if slot.connected:
                slot.queue(message)

    # -- input translation ----------------------------------------------------

    def _expected_device(self, slot: ClientSlot) -> Device:
        if slot.role is Role.PPS:
            return Device.JOYSTICK
        return self.active_pcg_device or slot.device

    def translate_input(self, slot: ClientSlot, msg: wire.InputMsg) -> int | None:
        """Map a payload to a direction; None (plus an error frame) on mismatch."""
        payload = msg.payload
        expected = self._expected_device(slot)
        if payload.kind == "direction":
            return payload.direction
        if payload.kind == "keys":
            if expected is not Device.KEYBOARD:
                self._payload_error(slot, payload.kind)
                return None
            return keyboard_map(set(payload.keys)).direction
        if payload.kind == "pedal":
            if expected is not Device.PEDAL:
                self._payload_error(slot, payload.kind)
                return None
            return pedal_map(PedalState(payload.left, payload.right)).direction
        if expected is not Device.JOYSTICK:
            self._payload_error(slot, payload.kind)
            return None
        if payload.kind == "roll":
            return joystick_map(payload.roll_deg, self.config).direction
        # imu: fold through this client's server-side orientation filter
        sample = imu_sample_from_dict(payload.model_dump())
        dt = 0.01 if slot.last_imu_t is None else sample.t - slot.last_imu_t
        if dt > 0:
            slot.orientation = mahony_update(slot.orientation, sample, dt)
            slot.last_imu_t = sample.t
        return joystick_map(roll_angle(slot.orientation.q), self.config).direction

    def _payload_error(self, slot: ClientSlot, kind: str) -> None:
        slot.queue(
            wire.ErrorMsg(
                seq=0,
                code="payload_mismatch",
                message=f"{kind} payload does not match device {slot.device.value}",
            )
        )

    def _apply_message(self, slot: ClientSlot, msg) -> None:
        if isinstance(msg, wire.InputMsg):
            if msg.trial_token != self.trial_token:
                return  # late frame from a previous trial or attempt
            direction = self.translate_input(slot, msg)
            if direction is not None:
                slot.current_direction = direction
                slot.tick_directions[msg.client_tick] = direction

    # -- session flow ---------------------------------------------------------

    async def run(self) -> str:
        """Execute the plan; returns 'complete' or 'aborted'."""
        write_plan(self.plan, self.out_dir)
        await self._require_players()
        self.status = "running"
        self._broadcast(wire.SessionControl(seq=0, status="running"))
        try:
            await self._run_checkpoint(self._checkpoint("session_start"))
            for block in self.plan.blocks:
                await self._run_checkpoint(self._checkpoint(f"before_block_{block.index}"))
                for trial in block.trials:
                    await self._run_trial(trial)
                await self._run_checkpoint(self._checkpoint(f"after_block_{block.index}"))
            await self._run_checkpoint(self._checkpoint("session_end"))
            self.status = "complete"
        except SessionAborted as exc:
            self.status = "aborted"
            self._broadcast(
                wire.SessionControl(seq=0, status="aborted", detail=str(exc))
            )
        else:
            self._broadcast(wire.SessionControl(seq=0, status="complete"))
        finally:
            self.finished.set()
        return self.status

    def _checkpoint(self, position: str) -> CheckpointSpec:
        for checkpoint in self.plan.checkpoints:
            if checkpoint.position == position:
                return checkpoint
        raise KeyError(position)

    def _participant(self, role: Role) -> str:
        return f"{self.plan.dyad_id}-{role.value}"

    async def _run_checkpoint(self, checkpoint: CheckpointSpec) -> None:
        while True:
            await self._require_players()
            try:
                await self._administer_checkpoint(checkpoint)
                return
            except PlayerDropped:
                continue  # answered instruments persisted; re-prompt the rest

    async def _administer_checkpoint(self, checkpoint: CheckpointSpec) -> None:
        for instrument in checkpoint.instruments:
            pending = []
            for role in TRIAL_ROLES:
                path = survey_path(
                    self.out_dir,
                    self.plan.dyad_id,
                    checkpoint.position,
                    self._participant(role),
                    instrument.value,
                )
                if not path.exists():
                    pending.append(role)
            if not pending:
                continue
            lo, hi = self.instruments.scale(instrument)
            count = self.instruments.item_count(instrument)
            for role in pending:
                self.clients[role].queue(
                    wire.SurveyPrompt(
                        seq=0,
                        position=checkpoint.position,
                        instrument=instrument.value,
                        items=count,
                        scale_min=lo,
                        scale_max=hi,
                    )
                )
            for role in pending:
                await self._collect_answer(role, checkpoint.position, instrument)

    async def _collect_answer(
        self, role: Role, position: str, instrument: Instrument
    ) -> None:
        slot = self.clients[role]
        lo, hi = self.instruments.scale(instrument)
        count = self.instruments.item_count(instrument)
        while True:
            msg = await slot.inbox.get()
            if msg is None:
                raise PlayerDropped(role)
            if isinstance(msg, wire.SurveyAnswer):
                if (
                    msg.position == position
                    and msg.instrument == instrument.value
                    and len(msg.item_scores) == count
                    and all(lo <= s <= hi for s in msg.item_scores)
                ):
                    write_survey(
                        self.out_dir,
                        self.plan.dyad_id,
                        position,
                        self._participant(role),
                        instrument.value,
                        list(msg.item_scores),
                    )
                    return
                slot.queue(
                    wire.ErrorMsg(
                        seq=0,
                        code="invalid_answer",
                        message=f"expected {count} scores in [{lo}, {hi}] for "
                        f"{instrument.value} at {position}",
                    )
                )
            # stray inputs between trials are dropped

    async def _run_trial(self, trial: TrialPlan) -> None:
        path = trial_path(self.out_dir, self.plan.dyad_id, trial.block, trial.index)
        while not is_complete_trial(path):
            await self._require_players()
            try:
                await self._execute_trial(trial)
            except PlayerDropped:
                continue  # incomplete record persisted; redo once rejoined

    async def _execute_trial(self, trial: TrialPlan) -> None:
        self.active_pcg_device = trial.pcg_device
        self.trial_token += 1
        state, units = build_trial_state(trial, self.config)
        record = TrialRecord(
            dyad_id=self.plan.dyad_id,
            block=trial.block,
            index=trial.index,
            mode=trial.mode,
            practice=trial.practice,
            pcg_device=trial.pcg_device,
            pps_amplitude=trial.pps_amplitude,
            pcg_amplitude=trial.pcg_amplitude,
            trial_seed=trial.trial_seed,
            config=self.config,
            units=units,
        )
        for i, role in enumerate(TRIAL_ROLES):
            slot = self.clients[role]
            slot.current_direction = 0
            slot.tick_directions.clear()
            unit = units[0] if trial.mode is Mode.COLLABORATIVE else units[i]
            slot.queue(
                wire.TrialControl(
                    seq=0,
                    action="start",
                    block=trial.block,
                    index=trial.index,
                    mode=trial.mode,
                    pcg_device=trial.pcg_device,
                    practice=trial.practice,
                    duration=self.config.trial_duration,
                    trial_token=self.trial_token,
                    unit=wire.UnitSummary(
                        label=unit.label, amplitude=unit.amplitude, phase=unit.phase
                    ),
                )
            )

        ticks = self.config.ticks_per_trial
        dt = self.config.dt
        loop = asyncio.get_running_loop()
        start_time = loop.time()
        try:
            for t in range(ticks):
                if self.realtime:
                    deadline = start_time + (t + 1) * dt
                    delay = deadline - loop.time()
                    if delay > 0:
                        await asyncio.sleep(delay)
                commands = await self._gather_commands(t)
                state = engine.tick(state, commands, self.config)
                record.rows.append(record_tick(state, commands, self.config))
                if (t + 1) % self.config.state_decimation == 0 or t == ticks - 1:
                    self._broadcast_state(state, trial, t)
        except PlayerDropped:
            record.final_scores = state.scores
            record.complete = False
            write_trial_record(record, self.out_dir)
            raise
        record.final_scores = state.scores
        record.complete = True
        write_trial_record(record, self.out_dir)
        for slot in self.clients.values():
            slot.queue(
                wire.TrialControl(
                    seq=0,
                    action="end",
                    block=trial.block,
                    index=trial.index,
                    mode=trial.mode,
                    pcg_device=trial.pcg_device,
                    practice=trial.practice,
                    duration=self.config.trial_duration,
                    final_scores=list(record.final_scores),
                    complete=record.complete,
                )
            )

    async def _gather_commands(self, tick: int) -> tuple[int, ...]:
        commands = []
        for role in TRIAL_ROLES:
            slot = self.clients[role]
            if not slot.connected:
                raise PlayerDropped(role)
            while True:  # drain whatever has arrived
                try:
                    msg = slot.inbox.get_nowait()
                except asyncio.QueueEmpty:
                    break
                if msg is None:
                    raise PlayerDropped(role)
                self._apply_message(slot, msg)
            if self.realtime:
                commands.append(slot.current_direction)
                continue
            # lockstep: wait until this player has supplied this exact tick
            while tick not in slot.tick_directions:
                msg = await slot.inbox.get()
                if msg is None:
                    raise PlayerDropped(role)
                self._apply_message(slot, msg)
            commands.append(slot.tick_directions[tick])
        return tuple(commands)

    def _broadcast_state(self, state, trial: TrialPlan, tick: int) -> None:
        time_remaining = self.config.trial_duration - (tick + 1) * self.config.dt
        for i, role in enumerate(TRIAL_ROLES):
            slot = self.clients[role]
            if not slot.connected:
                continue
            if state.mode is Mode.COLLABORATIVE:
                unit = 0
                avatars = [
                    wire.AvatarView(role=a.role, x=a.x, z=a.z) for a in state.avatars
                ]
                ball = wire.BallView(
                    x=state.ball.x, radius=state.ball.radius, active=state.ball.active
                )
            else:
                unit = i
                own = state.avatars[i]
                avatars = [wire.AvatarView(role=own.role, x=own.x, z=own.z)]
                ball = None
            z_now = state.avatars[0].z
            balloons = [
                wire.BalloonView(x=b.x, z=b.z, collected=b.collected)
                for b in state.fields[unit].balloons
                if z_now - BALLOON_LOOKBEHIND <= b.z <= z_now + BALLOON_LOOKAHEAD
            ]
            slot.queue(
                wire.StateUpdate(
                    seq=0,
                    server_tick=state.tick,
                    block=trial.block,
                    trial=trial.index,
                    mode=state.mode,
                    avatars=avatars,
                    ball=ball,
                    balloons=balloons,
                    score=state.scores[unit],
                    scores=list(state.scores),
                    time_remaining=max(0.0, time_remaining),
                )
            )
