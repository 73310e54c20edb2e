/**
 * Session client state machine, independent of DOM and transport.
 *
 * Game rules live on the server; this class tracks connection state,
 * the current trial, the pending survey form, and the interpolation
 * buffer, and it enforces the client-side protocol invariants: inputs
 * carry monotone sequence numbers and are never sent outside a trial.
 * On an unexpected close it reconnects with a fresh hello; the view is
 * rebuilt purely from subsequent server messages.
 */

import type {
  DeviceName,
  InputPayload,
  Role,
  ServerMessage,
  SurveyPromptMsg,
  TrialControlMsg,
} from "./protocol.js";
import { PROTOCOL_VERSION, parseServerMessage } from "./protocol.js";
import { SurveyForm } from "./survey.js";
import { ViewBuffer } from "./view.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: (() => void) | null;
  onmessage: ((data: string) => void) | null;
  onclose: (() => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export type ClientPhase =
  | "connecting"
  | "waiting"
  | "between"
  | "trial"
  | "survey"
  | "complete"
  | "aborted"
  | "disconnected";

export interface TrialInfo {
  block: number;
  index: number;
  mode: "solo" | "collaborative";
  pcgDevice: DeviceName;
  practice: boolean;
  duration: number;
  token: number;
  unit: { label: string; amplitude: number; phase: number } | null;
}

export interface ClientOptions {
  url: string;
  dyadId: string;
  role: Role;
  device: DeviceName;
  socketFactory: SocketFactory;
  now?: () => number;
  reconnectDelayMs?: number;
  setTimer?: (fn: () => void, ms: number) => unknown;
  onChange?: (client: SessionClient) => void;
}

export class SessionClient {
  phase: ClientPhase = "connecting";
  trial: TrialInfo | null = null;
  survey: SurveyForm | null = null;
  lastTrialEnd: TrialControlMsg | null = null;
  lastError: { code: string; message: string } | null = null;
  sessionDetail = "";
  helloConfig: Record<string, number> | null = null;
  planSummary: unknown = null;
  readonly views = new ViewBuffer();

  private socket: SocketLike | null = null;
  private seq = 0;
  private latestServerTick = 0;
  private closedByUs = false;
  private readonly now: () => number;
  private readonly setTimer: (fn: () => void, ms: number) => unknown;

  constructor(private readonly opts: ClientOptions) {
    this.now = opts.now ?? (() => Date.now());
    this.setTimer =
      opts.setTimer ?? ((fn, ms) => setTimeout(fn, ms) as unknown);
  }

  /** The device currently in play: the PCG's follows the block plan. */
  activeDevice(): DeviceName {
    if (this.opts.role === "PPS") return "joystick";
    return this.trial?.pcgDevice ?? this.opts.device;
  }

  get role(): Role {
    return this.opts.role;
  }

  trialActive(): boolean {
    return this.phase === "trial";
  }

  connect(): void {
    this.closedByUs = false;
    this.phase = "connecting";
    this.seq = 0; // sequence numbers are per connection
    const socket = this.opts.socketFactory(this.opts.url);
    this.socket = socket;
    socket.onopen = () => {
      this.sendRaw({
        type: "hello",
        protocol_version: PROTOCOL_VERSION,
        dyad_id: this.opts.dyadId,
        role: this.opts.role,
        device: this.opts.device,
      });
      this.phase = "waiting";
      this.changed();
    };
    socket.onmessage = (data) => this.handleFrame(data);
    socket.onclose = () => this.handleClose();
  }

  close(): void {
    this.closedByUs = true;
    this.socket?.close();
    this.socket = null;
  }

  private handleClose(): void {
    this.socket = null;
    if (this.closedByUs || this.phase === "complete" || this.phase === "aborted") {
      return;
    }
    this.phase = "disconnected";
    this.trial = null;
    this.survey = null;
    this.views.reset();
    this.changed();
    const delay = this.opts.reconnectDelayMs ?? 1000;
    this.setTimer(() => {
      if (!this.closedByUs && this.phase === "disconnected") {
        this.connect();
      }
    }, delay);
  }

  private sendRaw(message: Record<string, unknown>): void {
    if (this.socket === null) return;
    this.seq += 1;
    this.socket.send(JSON.stringify({ ...message, seq: this.seq }));
  }

  /** Send a device payload; dropped silently outside an active trial. */
  sendInput(payload: InputPayload): boolean {
    if (!this.trialActive() || this.trial === null) return false;
    this.sendRaw({
      type: "input",
      client_tick: this.latestServerTick,
      trial_token: this.trial.token,
      payload,
    });
    return true;
  }

  /** Validate and send the current survey form; false when incomplete. */
  submitSurvey(): boolean {
    if (this.survey === null) return false;
    const message = this.survey.toMessage();
    if (message === null) return false;
    this.sendRaw(message as unknown as Record<string, unknown>);
    this.survey = null;
    if (this.phase === "survey") this.phase = "between";
    this.changed();
    return true;
  }

  handleFrame(text: string): void {
    const message = parseServerMessage(text);
    if (message === null) return;
    this.handleMessage(message);
  }

  handleMessage(message: ServerMessage): void {
    switch (message.type) {
      case "hello_ack":
        this.helloConfig = message.config;
        this.planSummary = message.plan_summary;
        break;
      case "session":
        if (message.status === "complete") this.phase = "complete";
        else if (message.status === "aborted") this.phase = "aborted";
        else if (this.phase === "waiting" && message.status === "running") {
          this.phase = "between";
        }
        this.sessionDetail = message.detail;
        break;
      case "trial":
        if (message.action === "start") {
          this.trial = {
            block: message.block,
            index: message.index,
            mode: message.mode,
            pcgDevice: message.pcg_device,
            practice: message.practice,
            duration: message.duration,
            token: message.trial_token,
            unit: message.unit,
          };
          this.views.reset();
          this.phase = "trial";
        } else {
          this.lastTrialEnd = message;
          this.trial = null;
          this.phase = "between";
        }
        break;
      case "survey_prompt":
        this.survey = new SurveyForm(message as SurveyPromptMsg);
        this.phase = "survey";
        break;
      case "state":
        this.latestServerTick = message.server_tick;
        this.views.push(message, this.now());
        break;
      case "error":
        this.lastError = { code: message.code, message: message.message };
        break;
    }
    this.changed();
  }

  private changed(): void {
    this.opts.onChange?.(this);
  }
}
