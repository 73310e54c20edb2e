/**
 * Top-down 2D canvas renderer. The track scrolls toward the player:
 * depth (z) maps to the vertical axis with the avatar row anchored near
 * the bottom, lateral position (x) maps to the horizontal axis.
 */

import type { ClientView } from "./view.js";

export interface RenderConfig {
  trackWidth: number;
  lookAhead: number; // meters of track drawn ahead of the avatars
}

export const DEFAULT_RENDER: RenderConfig = { trackWidth: 4.0, lookAhead: 30.0 };

const AVATAR_COLORS: Record<string, string> = { PPS: "#e4572e", PCG: "#17bebb" };

export function drawFrame(
  ctx: CanvasRenderingContext2D,
  width: number,
  height: number,
  view: ClientView | null,
  cfg: RenderConfig = DEFAULT_RENDER,
): void {
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#10141a";
  ctx.fillRect(0, 0, width, height);
  if (view === null) return;

  const margin = 40;
  const laneWidth = width - 2 * margin;
  const anchorY = height - 80;
  const xScale = laneWidth / cfg.trackWidth;
  const zScale = (anchorY - 20) / cfg.lookAhead;
  const baseZ = view.avatars.length > 0 ? view.avatars[0].z : 0;
  const toScreenX = (x: number) => margin + (x + cfg.trackWidth / 2) * xScale;
  const toScreenY = (z: number) => anchorY - (z - baseZ) * zScale;

  // track edges
  ctx.strokeStyle = "#3a4356";
  ctx.lineWidth = 2;
  for (const edge of [-cfg.trackWidth / 2, cfg.trackWidth / 2]) {
    ctx.beginPath();
    ctx.moveTo(toScreenX(edge), 0);
    ctx.lineTo(toScreenX(edge), height);
    ctx.stroke();
  }

  // balloons
  for (const balloon of view.balloons) {
    const y = toScreenY(balloon.z);
    if (y < -10 || y > height + 10) continue;
    ctx.beginPath();
    ctx.arc(toScreenX(balloon.x), y, 8, 0, Math.PI * 2);
    ctx.fillStyle = balloon.collected ? "#2c3240" : "#f7b32b";
    ctx.fill();
  }

  // connecting line and blue ball (collaborative only)
  if (view.avatars.length === 2) {
    const [a, b] = view.avatars;
    ctx.beginPath();
    ctx.moveTo(toScreenX(a.x), anchorY);
    ctx.lineTo(toScreenX(b.x), anchorY);
    ctx.strokeStyle = "#8899aa";
    ctx.lineWidth = 1.5;
    ctx.setLineDash(view.ball !== null && view.ball.visible ? [] : [6, 6]);
    ctx.stroke();
    ctx.setLineDash([]);
  }
  if (view.ball !== null && view.ball.visible) {
    ctx.beginPath();
    ctx.arc(toScreenX(view.ball.x), anchorY, Math.max(4, view.ball.radius * xScale), 0, Math.PI * 2);
    ctx.fillStyle = "#2e86e4";
    ctx.fill();
  }

  // avatars: triangle for the joystick player, square for the partner
  for (const avatar of view.avatars) {
    const x = toScreenX(avatar.x);
    ctx.fillStyle = AVATAR_COLORS[avatar.role] ?? "#ffffff";
    if (avatar.role === "PPS") {
      ctx.beginPath();
      ctx.moveTo(x, anchorY - 10);
      ctx.lineTo(x - 9, anchorY + 8);
      ctx.lineTo(x + 9, anchorY + 8);
      ctx.closePath();
      ctx.fill();
    } else {
      ctx.fillRect(x - 8, anchorY - 8, 16, 16);
    }
  }

  // overlays
  ctx.fillStyle = "#e8edf5";
  ctx.font = "16px system-ui, sans-serif";
  ctx.textAlign = "left";
  ctx.fillText(`score ${view.score}`, 12, 24);
  ctx.textAlign = "right";
  ctx.fillText(`${view.timeRemaining.toFixed(1)} s`, width - 12, 24);
  ctx.textAlign = "center";
  ctx.fillText(
    `${view.mode === "solo" ? "SOLO" : "COLLABORATIVE"}  block ${view.block} / trial ${view.trial}`,
    width / 2,
    24,
  );
  if (view.connectionLost) {
    ctx.fillStyle = "rgba(16, 20, 26, 0.8)";
    ctx.fillRect(0, 0, width, height);
    ctx.fillStyle = "#f25f5c";
    ctx.font = "24px system-ui, sans-serif";
    ctx.fillText("connection lost", width / 2, height / 2);
  }
}
