"""Statistical analysis: gated paired tests, survey scoring, report tables."""

from .surveys import (
    ImiScores,
    InstrumentDefs,
    PREFERENCE_CONDITIONS,
    SurveyInputError,
    SurveyResponse,
    default_instruments,
    ios_change,
    load_instruments,
    score_imi,
    score_panas,
    synthetic_response,
)
from .tests import (
    DegenerateSampleError,
    PairedSample,
    StatsInputError,
    TestKind,
    TestResult,
    gated_compare,
    paired_t,
    shapiro_wilk,
    wilcoxon_signed_rank,
)

__all__ = [
    "ImiScores",
    "InstrumentDefs",
    "PREFERENCE_CONDITIONS",
    "SurveyInputError",
    "SurveyResponse",
    "default_instruments",
    "ios_change",
    "load_instruments",
    "score_imi",
    "score_panas",
    "synthetic_response",
    "DegenerateSampleError",
    "PairedSample",
    "StatsInputError",
    "TestKind",
    "TestResult",
    "gated_compare",
    "paired_t",
    "shapiro_wilk",
    "wilcoxon_signed_rank",
]
