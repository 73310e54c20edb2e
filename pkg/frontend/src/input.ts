/**
 * Keyboard capture and device emulation.
 *
 * All three study devices are playable from the keyboard: the keyboard
 * device maps the arrow keys directly, pedal emulation maps two keys to
 * the left/right pedal switches, and joystick emulation maps two keys
 * to synthetic roll angles past the deadzone. The mapper is pure with
 * respect to the currently held keys, so the input pump can sample it
 * at a fixed rate while a trial is active.
 */

import type { DeviceName, InputPayload } from "./protocol.js";

export interface KeyBindings {
  arrowLeft: string;
  arrowRight: string;
  pedalLeft: string;
  pedalRight: string;
  rollLeft: string;
  rollRight: string;
  rollMagnitudeDeg: number;
}

export const DEFAULT_BINDINGS: KeyBindings = {
  arrowLeft: "ArrowLeft",
  arrowRight: "ArrowRight",
  pedalLeft: "KeyA",
  pedalRight: "KeyD",
  rollLeft: "KeyA",
  rollRight: "KeyD",
  rollMagnitudeDeg: 45,
};

export class InputMapper {
  private held = new Set<string>();

  constructor(readonly bindings: KeyBindings = DEFAULT_BINDINGS) {}

  keyDown(code: string): void {
    this.held.add(code);
  }

  keyUp(code: string): void {
    this.held.delete(code);
  }

  releaseAll(): void {
    this.held.clear();
  }

  isHeld(code: string): boolean {
    return this.held.has(code);
  }

  anyHeld(): boolean {
    return this.held.size > 0;
  }

  /** The wire payload for the given device under the held keys. */
  payload(device: DeviceName): InputPayload {
    const b = this.bindings;
    if (device === "keyboard") {
      const keys: string[] = [];
      if (this.held.has(b.arrowLeft)) keys.push("left");
      if (this.held.has(b.arrowRight)) keys.push("right");
      return { kind: "keys", keys };
    }
    if (device === "pedal") {
      return {
        kind: "pedal",
        left: this.held.has(b.pedalLeft),
        right: this.held.has(b.pedalRight),
      };
    }
    const left = this.held.has(b.rollLeft);
    const right = this.held.has(b.rollRight);
    let roll = 0;
    if (left && !right) roll = -b.rollMagnitudeDeg;
    else if (right && !left) roll = b.rollMagnitudeDeg;
    return { kind: "roll", roll_deg: roll };
  }
}
