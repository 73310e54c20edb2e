"""Wire protocol for the live two-player session service.

JSON text frames over a WebSocket, one message per frame, discriminated
by a `type` field and carrying a per-sender monotone sequence number.
Clients send hello, inputs (a pre-mapped direction or a raw device
payload), and survey answers; the authoritative server streams state
updates, trial control, survey prompts, and errors.
"""

from __future__ import annotations

from typing import Annotated, Literal, Union

from pydantic import BaseModel, Field, TypeAdapter

from ..config import Device, Mode, Role

PROTOCOL_VERSION = 1


class Hello(BaseModel):
    type: Literal["hello"] = "hello"
    seq: int = 0
    protocol_version: int = PROTOCOL_VERSION
    dyad_id: str
    role: Role
    device: Device


class DirectionPayload(BaseModel):
    kind: Literal["direction"] = "direction"
    direction: int = Field(ge=-1, le=1)


class KeysPayload(BaseModel):
    kind: Literal["keys"] = "keys"
    keys: list[str]


class PedalPayload(BaseModel):
    kind: Literal["pedal"] = "pedal"
    left: bool
    right: bool


class RollPayload(BaseModel):
    kind: Literal["roll"] = "roll"
    roll_deg: float


class ImuPayload(BaseModel):
    kind: Literal["imu"] = "imu"
    t: float
    ax: float
    ay: float
    az: float
    gx: float
    gy: float
    gz: float
    mx: float | None = None
    my: float | None = None
    mz: float | None = None


InputPayload = Annotated[
    Union[DirectionPayload, KeysPayload, PedalPayload, RollPayload, ImuPayload],
    Field(discriminator="kind"),
]


class InputMsg(BaseModel):
    type: Literal["input"] = "input"
    seq: int = 0
    client_tick: int = 0  # server tick the sender believes is current
    trial_token: int = 0  # echoed from TrialControl start; stale tokens are dropped
    payload: InputPayload


class SurveyAnswer(BaseModel):
    type: Literal["survey_answer"] = "survey_answer"
    seq: int = 0
    position: str
    instrument: str
    item_scores: list[int]


ClientMessage = Annotated[Union[Hello, InputMsg, SurveyAnswer], Field(discriminator="type")]
_client_adapter: TypeAdapter = TypeAdapter(ClientMessage)


class HelloAck(BaseModel):
    type: Literal["hello_ack"] = "hello_ack"
    seq: int
    protocol_version: int = PROTOCOL_VERSION
    config: dict
    plan_summary: dict


class AvatarView(BaseModel):
    role: Role
    x: float
    z: float


class BallView(BaseModel):
    x: float
    radius: float
    active: bool


class BalloonView(BaseModel):
    x: float
    z: float
    collected: bool


class StateUpdate(BaseModel):
    type: Literal["state"] = "state"
    seq: int
    server_tick: int
    block: int
    trial: int
    mode: Mode
    avatars: list[AvatarView]
    ball: BallView | None = None
    balloons: list[BalloonView]  # visible window of the recipient's track
    score: int  # recipient's scoring unit
    scores: list[int]
    time_remaining: float


class UnitSummary(BaseModel):
    label: str
    amplitude: float
    phase: float


class TrialControl(BaseModel):
    type: Literal["trial"] = "trial"
    seq: int
    action: Literal["start", "end"]
    block: int
    index: int
    mode: Mode
    pcg_device: Device
    practice: bool
    duration: float
    trial_token: int = 0  # identifies this execution; inputs must echo it
    unit: UnitSummary | None = None  # the recipient's track (start only)
    final_scores: list[int] | None = None  # end only
    complete: bool | None = None  # end only


class SurveyPrompt(BaseModel):
    type: Literal["survey_prompt"] = "survey_prompt"
    seq: int
    position: str
    instrument: str
    items: int
    scale_min: int
    scale_max: int


class SessionControl(BaseModel):
    type: Literal["session"] = "session"
    seq: int
    status: Literal["waiting", "running", "complete", "aborted"]
    detail: str = ""


class ErrorMsg(BaseModel):
    type: Literal["error"] = "error"
    seq: int
    code: str
    message: str


ServerMessage = Union[
    HelloAck, StateUpdate, TrialControl, SurveyPrompt, SessionControl, ErrorMsg
]


class ProtocolViolation(ValueError):
    pass


def parse_client_message(text: str) -> Hello | InputMsg | SurveyAnswer:
    try:
        return _client_adapter.validate_json(text)
    except Exception as exc:  # pydantic.ValidationError and json errors
        raise ProtocolViolation(str(exc)) from exc


def encode(message: BaseModel) -> str:
    return message.model_dump_json()
