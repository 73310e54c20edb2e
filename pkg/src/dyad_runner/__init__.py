"""Collaborative rehabilitation exergame: simulation, protocol, and analysis."""

from .config import AMPLITUDE_SETS, Device, GameConfig, Mode, Role

__version__ = "0.1.0"

__all__ = ["AMPLITUDE_SETS", "Device", "GameConfig", "Mode", "Role", "__version__"]
