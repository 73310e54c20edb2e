"""Live two-player session service over WebSocket + HTTP."""

from .app import create_app, serve_session
from .service import DuplicateRole, PlayerDropped, SessionAborted, SessionService

__all__ = [
    "create_app",
    "serve_session",
    "DuplicateRole",
    "PlayerDropped",
    "SessionAborted",
    "SessionService",
]
