"""Study protocol: plans, trial execution, and persistence."""

from .plan import (
    BLOCK_MODES,
    BlockPlan,
    CheckpointSpec,
    Instrument,
    PlanError,
    SessionPlan,
    TrialPlan,
    build_plan,
    validate_plan,
)
from .runner import (
    ProtocolError,
    TickRow,
    TrialRecord,
    UnitInfo,
    build_trial_state,
    performance_window,
    replay_sources,
    run_trial,
    trial_plan_of,
    view_for,
)

__all__ = [
    "BLOCK_MODES",
    "BlockPlan",
    "CheckpointSpec",
    "Instrument",
    "PlanError",
    "SessionPlan",
    "TrialPlan",
    "build_plan",
    "validate_plan",
    "ProtocolError",
    "TickRow",
    "TrialRecord",
    "UnitInfo",
    "build_trial_state",
    "performance_window",
    "replay_sources",
    "run_trial",
    "trial_plan_of",
    "view_for",
]
