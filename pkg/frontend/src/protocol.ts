/**
 * Wire protocol types mirrored from the game server: JSON text frames
 * over a WebSocket, discriminated by `type`, each carrying a per-sender
 * monotone sequence number.
 */

export const PROTOCOL_VERSION = 1;

export type Role = "PPS" | "PCG";
export type DeviceName = "joystick" | "pedal" | "keyboard";
export type ModeName = "solo" | "collaborative";

export interface HelloMsg {
  type: "hello";
  seq: number;
  protocol_version: number;
  dyad_id: string;
  role: Role;
  device: DeviceName;
}

export type InputPayload =
  | { kind: "direction"; direction: -1 | 0 | 1 }
  | { kind: "keys"; keys: string[] }
  | { kind: "pedal"; left: boolean; right: boolean }
  | { kind: "roll"; roll_deg: number };

export interface InputMsg {
  type: "input";
  seq: number;
  client_tick: number;
  /** Echo of the trial_token from TrialControl start; stale tokens are dropped. */
  trial_token: number;
  payload: InputPayload;
}

export interface SurveyAnswerMsg {
  type: "survey_answer";
  seq: number;
  position: string;
  instrument: string;
  item_scores: number[];
}

export interface HelloAckMsg {
  type: "hello_ack";
  seq: number;
  protocol_version: number;
  config: Record<string, number>;
  plan_summary: {
    dyad_id: string;
    blocks: { index: number; mode: ModeName; pcg_device: DeviceName; trials: number }[];
    checkpoints: string[];
  };
}

export interface AvatarView {
  role: Role;
  x: number;
  z: number;
}

export interface BallWire {
  x: number;
  radius: number;
  active: boolean;
}

export interface BalloonWire {
  x: number;
  z: number;
  collected: boolean;
}

export interface StateUpdateMsg {
  type: "state";
  seq: number;
  server_tick: number;
  block: number;
  trial: number;
  mode: ModeName;
  avatars: AvatarView[];
  ball: BallWire | null;
  balloons: BalloonWire[];
  score: number;
  scores: number[];
  time_remaining: number;
}

export interface TrialControlMsg {
  type: "trial";
  seq: number;
  action: "start" | "end";
  block: number;
  index: number;
  mode: ModeName;
  pcg_device: DeviceName;
  practice: boolean;
  duration: number;
  trial_token: number;
  unit: { label: string; amplitude: number; phase: number } | null;
  final_scores: number[] | null;
  complete: boolean | null;
}

export interface SurveyPromptMsg {
  type: "survey_prompt";
  seq: number;
  position: string;
  instrument: string;
  items: number;
  scale_min: number;
  scale_max: number;
}

export interface SessionControlMsg {
  type: "session";
  seq: number;
  status: "waiting" | "running" | "complete" | "aborted";
  detail: string;
}

export interface ErrorMsg {
  type: "error";
  seq: number;
  code: string;
  message: string;
}

export type ServerMessage =
  | HelloAckMsg
  | StateUpdateMsg
  | TrialControlMsg
  | SurveyPromptMsg
  | SessionControlMsg
  | ErrorMsg;

const SERVER_TYPES = new Set([
  "hello_ack",
  "state",
  "trial",
  "survey_prompt",
  "session",
  "error",
]);

/** Parse one frame; null for frames the client does not understand. */
export function parseServerMessage(text: string): ServerMessage | null {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    return null;
  }
  if (typeof raw !== "object" || raw === null) return null;
  const type = (raw as { type?: unknown }).type;
  if (typeof type !== "string" || !SERVER_TYPES.has(type)) return null;
  return raw as ServerMessage;
}
