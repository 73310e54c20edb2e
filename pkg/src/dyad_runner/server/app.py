"""FastAPI application wrapping the session service.

HTTP endpoints expose health, config, and plan progress; the WebSocket
endpoint speaks the wire protocol; the built browser client, when
present, is served from the root path.
"""

from __future__ import annotations

import asyncio
from pathlib import Path

import uvicorn
from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.staticfiles import StaticFiles

from ..config import GameConfig
from ..session.plan import SessionPlan
from ..session.storage import completed_trials
from . import protocol as wire
from .service import DuplicateRole, SessionService


def create_app(service: SessionService, frontend_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="dyad-runner", version="0.1.0")

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": service.status, "protocol_version": wire.PROTOCOL_VERSION}

    @app.get("/config")
    def config() -> dict:
        return service.config.to_dict()

    @app.get("/plan")
    def plan() -> dict:
        summary = service._plan_summary()
        summary["completed_trials"] = sorted(
            completed_trials(service.out_dir, service.plan)
        )
        return summary

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket) -> None:
        await ws.accept()
        try:
            hello = wire.parse_client_message(await ws.receive_text())
        except wire.ProtocolViolation as exc:
            await ws.send_text(
                wire.encode(wire.ErrorMsg(seq=1, code="bad_hello", message=str(exc)))
            )
            await ws.close()
            return
        except WebSocketDisconnect:
            return
        if not isinstance(hello, wire.Hello):
            await ws.send_text(
                wire.encode(
                    wire.ErrorMsg(seq=1, code="bad_hello", message="expected hello first")
                )
            )
            await ws.close()
            return
        try:
            slot = service.join(hello)
        except (DuplicateRole, ValueError) as exc:
            code = "duplicate_role" if isinstance(exc, DuplicateRole) else "rejected"
            await ws.send_text(
                wire.encode(wire.ErrorMsg(seq=1, code=code, message=str(exc)))
            )
            await ws.close()
            return

        async def reader() -> None:
            while True:
                text = await ws.receive_text()
                try:
                    msg = wire.parse_client_message(text)
                except wire.ProtocolViolation as exc:
                    # malformed frames earn an error, not a disconnect
                    slot.queue(
                        wire.ErrorMsg(seq=0, code="malformed", message=str(exc))
                    )
                    continue
                if isinstance(msg, wire.Hello):
                    slot.queue(
                        wire.ErrorMsg(
                            seq=0, code="already_joined", message="hello already sent"
                        )
                    )
                    continue
                slot.inbox.put_nowait(msg)

        async def writer() -> None:
            while True:
                msg = await slot.outbox.get()
                await ws.send_text(wire.encode(msg))

        tasks = {asyncio.create_task(reader()), asyncio.create_task(writer())}
        try:
            done, pending = await asyncio.wait(tasks, return_when=asyncio.FIRST_EXCEPTION)
            for task in pending:
                task.cancel()
        finally:
            service.leave(slot)

    if frontend_dir is not None and Path(frontend_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(frontend_dir), html=True), name="client")

    return app


async def _serve(
    service: SessionService,
    host: str,
    port: int,
    frontend_dir: str | Path | None,
) -> str:
    app = create_app(service, frontend_dir)
    server = uvicorn.Server(
        uvicorn.Config(app, host=host, port=port, log_level="warning", lifespan="off")
    )
    server_task = asyncio.create_task(server.serve())
    status = await service.run()
    await asyncio.sleep(0.3)  # let final frames flush
    server.should_exit = True
    try:
        await asyncio.wait_for(server_task, timeout=5.0)
    except asyncio.TimeoutError:
        server_task.cancel()
    return status


def serve_session(
    plan: SessionPlan,
    config: GameConfig,
    bind: str = "127.0.0.1:8765",
    out_dir: str | Path = "sessions",
    realtime: bool = True,
    frontend_dir: str | Path | None = None,
) -> int:
    """Run a full session service; 0 when the session completed."""
    host, _, port_text = bind.rpartition(":")
    host = host or "127.0.0.1"
    port = int(port_text)
    service = SessionService(plan, config, out_dir, realtime=realtime)
    status = asyncio.run(_serve(service, host, port, frontend_dir))
    return 0 if status == "complete" else 1
