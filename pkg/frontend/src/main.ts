/**
 * Browser bootstrap: URL query parameters pick the server address, dyad,
 * role, and starting device; the canvas renders the interpolated view;
 * surveys render as a blocking form between trials.
 *
 *   index.html?server=127.0.0.1:8765&dyad=D0&role=PPS&device=joystick
 */

import { SessionClient, type SocketLike } from "./client.js";
import { DEFAULT_BINDINGS, InputMapper } from "./input.js";
import type { DeviceName, Role } from "./protocol.js";
import { DEFAULT_RENDER, drawFrame } from "./render.js";

const INPUT_RATE_HZ = 30;

function browserSocket(url: string): SocketLike {
  const ws = new WebSocket(url);
  const wrapper: SocketLike = {
    send: (data) => ws.send(data),
    close: () => ws.close(),
    onopen: null,
    onmessage: null,
    onclose: null,
  };
  ws.onopen = () => wrapper.onopen?.();
  ws.onmessage = (event) => wrapper.onmessage?.(String(event.data));
  ws.onclose = () => wrapper.onclose?.();
  return wrapper;
}

function param(name: string, fallback: string): string {
  return new URLSearchParams(window.location.search).get(name) ?? fallback;
}

function statusLine(client: SessionClient): string {
  switch (client.phase) {
    case "connecting":
      return "connecting…";
    case "waiting":
      return "waiting for the session to start…";
    case "between":
      return "waiting for the next trial…";
    case "survey":
      return "questionnaire";
    case "trial":
      return "";
    case "complete":
      return "session complete — thank you!";
    case "aborted":
      return `session ended: ${client.sessionDetail || "aborted"}`;
    case "disconnected":
      return "connection lost — reconnecting…";
  }
}

function renderSurvey(client: SessionClient, host: HTMLElement): void {
  const form = client.survey;
  host.innerHTML = "";
  if (form === null) {
    host.style.display = "none";
    return;
  }
  host.style.display = "block";
  const title = document.createElement("h2");
  title.textContent = `${form.instrument} — ${form.position.replaceAll("_", " ")}`;
  host.appendChild(title);
  for (let i = 0; i < form.items; i++) {
    const row = document.createElement("div");
    row.className = "survey-row";
    const label = document.createElement("span");
    label.textContent = `item ${i + 1}`;
    row.appendChild(label);
    for (let v = form.scaleMin; v <= form.scaleMax; v++) {
      const button = document.createElement("button");
      button.textContent = String(v);
      button.dataset.item = String(i);
      if (form.answer(i) === v) button.classList.add("selected");
      button.onclick = () => {
        form.setAnswer(i, v);
        renderSurvey(client, host);
      };
      row.appendChild(button);
    }
    host.appendChild(row);
  }
  const submit = document.createElement("button");
  submit.className = "submit";
  submit.textContent = "submit";
  submit.disabled = !form.isComplete();
  submit.onclick = () => {
    if (!client.submitSurvey()) renderSurvey(client, host);
    else host.style.display = "none";
  };
  host.appendChild(submit);
}

export function start(): void {
  const canvas = document.getElementById("game") as HTMLCanvasElement;
  const ctx = canvas.getContext("2d")!;
  const overlay = document.getElementById("status")!;
  const surveyHost = document.getElementById("survey")!;

  const server = param("server", window.location.host || "127.0.0.1:8765");
  const client = new SessionClient({
    url: `ws://${server}/ws`,
    dyadId: param("dyad", "D0"),
    role: param("role", "PPS") as Role,
    device: param("device", "joystick") as DeviceName,
    socketFactory: browserSocket,
    onChange: (c) => {
      overlay.textContent = statusLine(c);
      renderSurvey(c, surveyHost as HTMLElement);
    },
  });

  const mapper = new InputMapper(DEFAULT_BINDINGS);
  window.addEventListener("keydown", (e) => {
    if (!e.repeat) mapper.keyDown(e.code);
  });
  window.addEventListener("keyup", (e) => mapper.keyUp(e.code));
  window.addEventListener("blur", () => mapper.releaseAll());

  // fixed-rate input pump, active only during trials
  setInterval(() => {
    if (client.trialActive()) {
      client.sendInput(mapper.payload(client.activeDevice()));
    }
  }, 1000 / INPUT_RATE_HZ);

  const renderCfg = { ...DEFAULT_RENDER };
  const frame = () => {
    const width = (canvas.width = canvas.clientWidth);
    const height = (canvas.height = canvas.clientHeight);
    if (client.helloConfig && typeof client.helloConfig.track_width === "number") {
      renderCfg.trackWidth = client.helloConfig.track_width;
    }
    drawFrame(ctx, width, height, client.views.view(Date.now()), renderCfg);
    requestAnimationFrame(frame);
  };
  requestAnimationFrame(frame);

  client.connect();
}

start();
