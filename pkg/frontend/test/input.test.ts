import { describe, expect, it } from "vitest";

import { DEFAULT_BINDINGS, InputMapper } from "../src/input.js";

describe("keyboard device mapping", () => {
  it("maps arrows to key names", () => {
    const m = new InputMapper();
    m.keyDown("ArrowLeft");
    expect(m.payload("keyboard")).toEqual({ kind: "keys", keys: ["left"] });
    m.keyDown("ArrowRight");
    expect(m.payload("keyboard")).toEqual({ kind: "keys", keys: ["left", "right"] });
    m.keyUp("ArrowLeft");
    expect(m.payload("keyboard")).toEqual({ kind: "keys", keys: ["right"] });
  });

  it("sends an empty key list when nothing is held", () => {
    expect(new InputMapper().payload("keyboard")).toEqual({ kind: "keys", keys: [] });
  });
});

describe("pedal emulation", () => {
  it("maps the two pedal keys to switch states", () => {
    const m = new InputMapper();
    m.keyDown(DEFAULT_BINDINGS.pedalLeft);
    expect(m.payload("pedal")).toEqual({ kind: "pedal", left: true, right: false });
    m.keyDown(DEFAULT_BINDINGS.pedalRight);
    expect(m.payload("pedal")).toEqual({ kind: "pedal", left: true, right: true });
    m.keyUp(DEFAULT_BINDINGS.pedalLeft);
    expect(m.payload("pedal")).toEqual({ kind: "pedal", left: false, right: true });
  });
});

describe("joystick emulation", () => {
  it("maps keys to synthetic roll angles past the deadzone", () => {
    const m = new InputMapper();
    expect(m.payload("joystick")).toEqual({ kind: "roll", roll_deg: 0 });
    m.keyDown(DEFAULT_BINDINGS.rollLeft);
    expect(m.payload("joystick")).toEqual({ kind: "roll", roll_deg: -45 });
    m.keyUp(DEFAULT_BINDINGS.rollLeft);
    m.keyDown(DEFAULT_BINDINGS.rollRight);
    expect(m.payload("joystick")).toEqual({ kind: "roll", roll_deg: 45 });
  });

  it("cancels when both roll keys are held", () => {
    const m = new InputMapper();
    m.keyDown(DEFAULT_BINDINGS.rollLeft);
    m.keyDown(DEFAULT_BINDINGS.rollRight);
    expect(m.payload("joystick")).toEqual({ kind: "roll", roll_deg: 0 });
  });

  it("honors custom bindings and magnitude", () => {
    const m = new InputMapper({ ...DEFAULT_BINDINGS, rollRight: "KeyX", rollMagnitudeDeg: 60 });
    m.keyDown("KeyX");
    expect(m.payload("joystick")).toEqual({ kind: "roll", roll_deg: 60 });
  });
});

describe("releaseAll", () => {
  it("clears everything (window blur safety)", () => {
    const m = new InputMapper();
    m.keyDown("ArrowLeft");
    m.keyDown(DEFAULT_BINDINGS.pedalRight);
    m.releaseAll();
    expect(m.anyHeld()).toBe(false);
    expect(m.payload("keyboard")).toEqual({ kind: "keys", keys: [] });
  });
});
