import { describe, expect, it } from "vitest";

import type { StateUpdateMsg } from "../src/protocol.js";
import { STALE_AFTER_MS, ViewBuffer } from "../src/view.js";

function update(partial: Partial<StateUpdateMsg>): StateUpdateMsg {
  return {
    type: "state",
    seq: 1,
    server_tick: 3,
    block: 1,
    trial: 1,
    mode: "collaborative",
    avatars: [
      { role: "PPS", x: 0, z: 1 },
      { role: "PCG", x: 0, z: 1 },
    ],
    ball: { x: 0, radius: 0.1, active: true },
    balloons: [],
    score: 0,
    scores: [0],
    time_remaining: 10,
    ...partial,
  };
}

describe("interpolation", () => {
  it("returns null before any update", () => {
    expect(new ViewBuffer().view(0)).toBeNull();
  });

  it("interpolates avatar positions between the last two updates", () => {
    const buffer = new ViewBuffer();
    buffer.push(update({ server_tick: 3, avatars: [{ role: "PPS", x: 0, z: 1 }, { role: "PCG", x: 0, z: 1 }] }), 1000);
    buffer.push(update({ server_tick: 6, avatars: [{ role: "PPS", x: 1, z: 2 }, { role: "PCG", x: -1, z: 2 }] }), 1050);
    // halfway between the two arrival times renders halfway back
    const mid = buffer.view(1025)!;
    expect(mid.avatars[0].x).toBeCloseTo(0.5, 6);
    expect(mid.avatars[1].x).toBeCloseTo(-0.5, 6);
    const at = buffer.view(1050)!;
    expect(at.avatars[0].x).toBeCloseTo(1.0, 6);
    const later = buffer.view(1080)!; // no extrapolation past the latest
    expect(later.avatars[0].x).toBeCloseTo(1.0, 6);
  });

  it("ignores out-of-order updates", () => {
    const buffer = new ViewBuffer();
    buffer.push(update({ server_tick: 6, score: 2 }), 1000);
    buffer.push(update({ server_tick: 3, score: 1 }), 1010);
    expect(buffer.view(1010)!.score).toBe(2);
  });

  it("does not interpolate across trial boundaries", () => {
    const buffer = new ViewBuffer();
    buffer.push(update({ server_tick: 100, trial: 1, avatars: [{ role: "PPS", x: 2, z: 90 }, { role: "PCG", x: 2, z: 90 }] }), 1000);
    buffer.push(update({ server_tick: 103, trial: 2, avatars: [{ role: "PPS", x: 0, z: 0.1 }, { role: "PCG", x: 0, z: 0.1 }] }), 1050);
    const v = buffer.view(1051)!;
    expect(v.avatars[0].z).toBeCloseTo(0.1, 6);
  });
});

describe("staleness", () => {
  it("flags connection lost after half a second without updates", () => {
    const buffer = new ViewBuffer();
    buffer.push(update({}), 1000);
    expect(buffer.view(1000 + STALE_AFTER_MS)!.connectionLost).toBe(false);
    expect(buffer.view(1000 + STALE_AFTER_MS + 1)!.connectionLost).toBe(true);
  });
});

describe("ball visibility", () => {
  it("solo updates carry no ball", () => {
    const buffer = new ViewBuffer();
    buffer.push(update({ mode: "solo", ball: null, avatars: [{ role: "PPS", x: 0, z: 1 }] }), 1000);
    expect(buffer.view(1000)!.ball).toBeNull();
  });

  it("hides the ball exactly when the server reports radius zero", () => {
    const buffer = new ViewBuffer();
    buffer.push(update({ ball: { x: 0.5, radius: 0.08, active: true } }), 1000);
    expect(buffer.view(1000)!.ball).toMatchObject({ visible: true });
    buffer.push(update({ server_tick: 6, ball: { x: 0.5, radius: 0.0, active: false } }), 1050);
    const v = buffer.view(1050)!;
    expect(v.ball).toMatchObject({ visible: false, radius: 0 });
  });

  it("score passes through untouched", () => {
    const buffer = new ViewBuffer();
    buffer.push(update({ score: 17, scores: [17] }), 1000);
    const v = buffer.view(1000)!;
    expect(v.score).toBe(17);
    expect(v.scores).toEqual([17]);
  });
});
