"""The four-block experimental protocol as a deterministic, serializable plan.

Block modes run solo, collaborative, solo, collaborative. The PCG's
device (pedal or keyboard) is fixed for the first two blocks and swaps
for the last two; the PPS always uses the joystick. Each block holds 8
trials: 4 practice then 4 performance, and within each half every
amplitude of each role's set appears exactly once. Questionnaire
checkpoints bracket every block (IMI + PANAS), with the closeness scale
(IOS) at session start/end and the preference question at the end.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from ..config import AMPLITUDE_SETS, Device, Mode, Role
from ..seeds import derive_seed, rng_for

BLOCK_MODES = (Mode.SOLO, Mode.COLLABORATIVE, Mode.SOLO, Mode.COLLABORATIVE)
TRIALS_PER_BLOCK = 8
PRACTICE_PER_BLOCK = 4


class Instrument(str, Enum):
    IMI = "IMI"
    PANAS = "PANAS"
    IOS = "IOS"
    PREFERENCE = "Preference"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


class PlanError(ValueError):
    """A session plan violates the protocol structure."""


@dataclass(frozen=True)
class TrialPlan:
    block: int  # 1-based
    index: int  # 1-based within the block
    mode: Mode
    practice: bool
    pcg_device: Device
    pps_amplitude: float
    pcg_amplitude: float
    trial_seed: int

    def amplitude_for(self, role: Role) -> float:
        return self.pps_amplitude if role is Role.PPS else self.pcg_amplitude

    @property
    def shared_amplitude(self) -> float:
        # collaborative trials use the unreduced (PCG) amplitude set
        return self.pcg_amplitude

    def phase_seed(self, label: str) -> int:
        return derive_seed(self.trial_seed, "phase", label)

    def noise_seed(self) -> int:
        return derive_seed(self.trial_seed, "noise", Role.PPS.value)

    def to_dict(self) -> dict:
        return {
            "block": self.block,
            "index": self.index,
            "mode": self.mode.value,
            "practice": self.practice,
            "pcg_device": self.pcg_device.value,
            "pps_amplitude": self.pps_amplitude,
            "pcg_amplitude": self.pcg_amplitude,
            "trial_seed": self.trial_seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TrialPlan":
        return cls(
            block=d["block"],
            index=d["index"],
            mode=Mode(d["mode"]),
            practice=d["practice"],
            pcg_device=Device(d["pcg_device"]),
            pps_amplitude=d["pps_amplitude"],
            pcg_amplitude=d["pcg_amplitude"],
            trial_seed=d["trial_seed"],
        )


@dataclass(frozen=True)
class BlockPlan:
    index: int
    mode: Mode
    pcg_device: Device
    trials: tuple[TrialPlan, ...]

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "mode": self.mode.value,
            "pcg_device": self.pcg_device.value,
            "trials": [t.to_dict() for t in self.trials],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BlockPlan":
        return cls(
            index=d["index"],
            mode=Mode(d["mode"]),
            pcg_device=Device(d["pcg_device"]),
            trials=tuple(TrialPlan.from_dict(t) for t in d["trials"]),
        )


@dataclass(frozen=True)
class CheckpointSpec:
    position: str  # session_start | before_block_k | after_block_k | session_end
    instruments: tuple[Instrument, ...]

    def to_dict(self) -> dict:
        return {"position": self.position, "instruments": [i.value for i in self.instruments]}

    @classmethod
    def from_dict(cls, d: dict) -> "CheckpointSpec":
        return cls(
            position=d["position"],
            instruments=tuple(Instrument(i) for i in d["instruments"]),
        )


@dataclass(frozen=True)
class SessionPlan:
    dyad_id: str
    master_seed: int
    device_order: tuple[Device, Device]
    blocks: tuple[BlockPlan, ...]
    checkpoints: tuple[CheckpointSpec, ...]

    def trial(self, block: int, index: int) -> TrialPlan:
        return self.blocks[block - 1].trials[index - 1]

    def all_trials(self) -> list[TrialPlan]:
        return [t for b in self.blocks for t in b.trials]

    def to_dict(self) -> dict:
        return {
            "dyad_id": self.dyad_id,
            "master_seed": self.master_seed,
            "device_order": [d.value for d in self.device_order],
            "blocks": [b.to_dict() for b in self.blocks],
            "checkpoints": [c.to_dict() for c in self.checkpoints],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SessionPlan":
        return cls(
            dyad_id=d["dyad_id"],
            master_seed=d["master_seed"],
            device_order=tuple(Device(x) for x in d["device_order"]),
            blocks=tuple(BlockPlan.from_dict(b) for b in d["blocks"]),
            checkpoints=tuple(CheckpointSpec.from_dict(c) for c in d["checkpoints"]),
        )

    @classmethod
    def load(cls, path: str | Path) -> "SessionPlan":
        with open(path, encoding="utf-8") as fh:
            plan = cls.from_dict(json.load(fh))
        validate_plan(plan)
        return plan


def build_checkpoints() -> tuple[CheckpointSpec, ...]:
    checkpoints = [CheckpointSpec("session_start", (Instrument.IOS,))]
    for k in range(1, len(BLOCK_MODES) + 1):
        checkpoints.append(
            CheckpointSpec(f"before_block_{k}", (Instrument.IMI, Instrument.PANAS))
        )
        checkpoints.append(
            CheckpointSpec(f"after_block_{k}", (Instrument.IMI, Instrument.PANAS))
        )
    checkpoints.append(
        CheckpointSpec("session_end", (Instrument.IOS, Instrument.PREFERENCE))
    )
    return tuple(checkpoints)


def build_plan(
    dyad_id: str,
    first_device: Device | None = None,
    master_seed: int = 0,
) -> SessionPlan:
    """Deterministically expand a dyad id + seed into the full protocol.

    The PCG's first device can be pinned by the study operator (to
    counterbalance across dyads) or is drawn from the seed.
    """
    if first_device is None:
        first_device = rng_for(master_seed, dyad_id, "device").choice(
            [Device.PEDAL, Device.KEYBOARD]
        )
    if first_device is Device.JOYSTICK:
        raise PlanError("the PCG device order is between pedal and keyboard")
    second_device = Device.KEYBOARD if first_device is Device.PEDAL else Device.PEDAL

    blocks = []
    for k, mode in enumerate(BLOCK_MODES, start=1):
        device = first_device if k <= 2 else second_device
        orders: dict[Role, list[float]] = {}
        for role in (Role.PPS, Role.PCG):
            per_half = []
            for half in ("practice", "performance"):
                amps = list(AMPLITUDE_SETS[role])
                rng_for(master_seed, dyad_id, "amplitudes", k, half, role.value).shuffle(amps)
                per_half.extend(amps)
            orders[role] = per_half
        trials = []
        for j in range(1, TRIALS_PER_BLOCK + 1):
            trials.append(
                TrialPlan(
                    block=k,
                    index=j,
                    mode=mode,
                    practice=j <= PRACTICE_PER_BLOCK,
                    pcg_device=device,
                    pps_amplitude=orders[Role.PPS][j - 1],
                    pcg_amplitude=orders[Role.PCG][j - 1],
                    trial_seed=derive_seed(master_seed, dyad_id, "trial", k, j),
                )
            )
        blocks.append(BlockPlan(index=k, mode=mode, pcg_device=device, trials=tuple(trials)))

    plan = SessionPlan(
        dyad_id=dyad_id,
        master_seed=master_seed,
        device_order=(first_device, second_device),
        blocks=tuple(blocks),
        checkpoints=build_checkpoints(),
    )
    validate_plan(plan)
    return plan


def validate_plan(plan: SessionPlan) -> None:
    """Check every protocol-structure invariant; raises PlanError."""
    if len(plan.blocks) != len(BLOCK_MODES):
        raise PlanError(f"expected {len(BLOCK_MODES)} blocks")
    modes = tuple(b.mode for b in plan.blocks)
    if modes != BLOCK_MODES:
        raise PlanError(f"block modes must be {[m.value for m in BLOCK_MODES]}")

    first, second = plan.device_order
    if {first, second} != {Device.PEDAL, Device.KEYBOARD}:
        raise PlanError("device order must cover pedal and keyboard")
    for block in plan.blocks:
        expected = first if block.index <= 2 else second
        if block.pcg_device is not expected:
            raise PlanError(f"block {block.index} device should be {expected.value}")
        if len(block.trials) != TRIALS_PER_BLOCK:
            raise PlanError(f"block {block.index} must hold {TRIALS_PER_BLOCK} trials")
        for j, trial in enumerate(block.trials, start=1):
            if trial.practice != (j <= PRACTICE_PER_BLOCK):
                raise PlanError("first half practice, second half performance")
            if trial.mode is not block.mode or trial.pcg_device is not block.pcg_device:
                raise PlanError("trial metadata must match its block")
        for role, getter in (
            (Role.PPS, lambda t: t.pps_amplitude),
            (Role.PCG, lambda t: t.pcg_amplitude),
        ):
            for half in (block.trials[:4], block.trials[4:]):
                if sorted(getter(t) for t in half) != sorted(AMPLITUDE_SETS[role]):
                    raise PlanError(
                        f"block {block.index}: each {role.value} amplitude once per half"
                    )

    _validate_checkpoints(plan.checkpoints)


def _validate_checkpoints(checkpoints: tuple[CheckpointSpec, ...]) -> None:
    by_position = {c.position: set(c.instruments) for c in checkpoints}
    if len(by_position) != len(checkpoints):
        raise PlanError("duplicate checkpoint positions")
    for k in range(1, len(BLOCK_MODES) + 1):
        for pos in (f"before_block_{k}", f"after_block_{k}"):
            if not {Instrument.IMI, Instrument.PANAS} <= by_position.get(pos, set()):
                raise PlanError(f"IMI and PANAS required at {pos}")
    if Instrument.IOS not in by_position.get("session_start", set()):
        raise PlanError("IOS required at session start")
    if Instrument.IOS not in by_position.get("session_end", set()):
        raise PlanError("IOS required at session end")
    if Instrument.PREFERENCE not in by_position.get("session_end", set()):
        raise PlanError("preference question required at session end")
    for pos, instruments in by_position.items():
        if Instrument.PREFERENCE in instruments and pos != "session_end":
            raise PlanError("preference is asked at session end only")
    imi_count = sum(1 for c in checkpoints if Instrument.IMI in c.instruments)
    panas_count = sum(1 for c in checkpoints if Instrument.PANAS in c.instruments)
    if imi_count != 8 or panas_count != 8:
        raise PlanError("IMI and PANAS must each be administered 8 times")
