/**
 * Render-side view of the authoritative server state.
 *
 * The client never simulates game rules; it only interpolates between
 * the two most recent state updates (the server broadcasts at a
 * decimated rate) and flags the connection as lost once no update has
 * arrived for half a second.
 */

import type { BalloonWire, ModeName, Role, StateUpdateMsg } from "./protocol.js";

export const STALE_AFTER_MS = 500;

export interface BallView {
  x: number;
  radius: number;
  visible: boolean;
}

export interface ClientView {
  mode: ModeName;
  block: number;
  trial: number;
  avatars: { role: Role; x: number; z: number }[];
  ball: BallView | null;
  balloons: BalloonWire[];
  score: number;
  scores: number[];
  timeRemaining: number;
  serverTick: number;
  connectionLost: boolean;
}

interface Snapshot {
  atMs: number;
  state: StateUpdateMsg;
}

function lerp(a: number, b: number, alpha: number): number {
  return a + (b - a) * alpha;
}

export class ViewBuffer {
  private prev: Snapshot | null = null;
  private last: Snapshot | null = null;

  push(state: StateUpdateMsg, atMs: number): void {
    if (this.last !== null && state.server_tick <= this.last.state.server_tick) {
      return; // out-of-order or duplicate update
    }
    this.prev = this.last;
    this.last = { atMs, state };
  }

  reset(): void {
    this.prev = null;
    this.last = null;
  }

  hasState(): boolean {
    return this.last !== null;
  }

  /** Interpolated view at wall time `atMs`; null before the first update. */
  view(atMs: number): ClientView | null {
    if (this.last === null) return null;
    const cur = this.last.state;
    const stale = atMs - this.last.atMs > STALE_AFTER_MS;

    let alpha = 1.0;
    let base = cur;
    if (this.prev !== null && this.prev.state.trial === cur.trial
        && this.prev.state.block === cur.block) {
      const span = this.last.atMs - this.prev.atMs;
      if (span > 0) {
        alpha = Math.min(1.0, Math.max(0.0, (atMs - this.last.atMs) / span + 1.0));
      }
      base = this.prev.state;
    }

    const avatars = cur.avatars.map((a, i) => {
      const from = base.avatars[i] ?? a;
      return {
        role: a.role,
        x: lerp(from.x, a.x, alpha),
        z: lerp(from.z, a.z, alpha),
      };
    });

    let ball: BallView | null = null;
    if (cur.ball !== null) {
      const from = base.ball ?? cur.ball;
      ball = {
        x: lerp(from.x, cur.ball.x, alpha),
        radius: cur.ball.radius,
        visible: cur.ball.radius > 0,
      };
    }

    return {
      mode: cur.mode,
      block: cur.block,
      trial: cur.trial,
      avatars,
      ball,
      balloons: cur.balloons,
      score: cur.score,
      scores: cur.scores,
      timeRemaining: cur.time_remaining,
      serverTick: cur.server_tick,
      connectionLost: stale,
    };
  }
}
