"""Questionnaire scoring: IMI subscales, PANAS affect sums, IOS change.

Instrument shapes (item counts, scales, reverse-keyed items, which PANAS
items are positive affect) come from a JSON definition file so a study
can swap in a different form without code changes. The bundled default
follows the standardized instruments: IMI interest/competence/tension on
1-7 with reverse scoring 8 - score, PANAS 20 items on 1-5 summing to two
10-50 scales, IOS a single 1-7 item.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import NamedTuple

from ..session.plan import Instrument


class SurveyInputError(ValueError):
    pass


# the five play conditions offered by the end-of-session preference question
PREFERENCE_CONDITIONS = (
    "collaborative-joystick-pedal",
    "collaborative-joystick-keyboard",
    "solo-pedal",
    "solo-keyboard",
    "solo-joystick",
)


@dataclass(frozen=True)
class SubscaleDef:
    name: str
    items: int
    reverse: tuple[int, ...]  # 1-based indices within the subscale


@dataclass(frozen=True)
class InstrumentDefs:
    imi_subscales: tuple[SubscaleDef, ...]
    imi_scale: tuple[int, int]
    panas_items: int
    panas_scale: tuple[int, int]
    panas_positive: tuple[int, ...]  # 1-based item indices
    ios_scale: tuple[int, int]

    @property
    def imi_items(self) -> int:
        return sum(s.items for s in self.imi_subscales)

    def item_count(self, instrument: Instrument) -> int:
        if instrument is Instrument.IMI:
            return self.imi_items
        if instrument is Instrument.PANAS:
            return self.panas_items
        if instrument is Instrument.IOS:
            return 1
        if instrument is Instrument.PREFERENCE:
            return 2  # own choice + guessed partner choice
        raise SurveyInputError(f"no item count for {instrument}")

    def scale(self, instrument: Instrument) -> tuple[int, int]:
        if instrument is Instrument.IMI:
            return self.imi_scale
        if instrument is Instrument.PANAS:
            return self.panas_scale
        if instrument is Instrument.IOS:
            return self.ios_scale
        if instrument is Instrument.PREFERENCE:
            return (1, len(PREFERENCE_CONDITIONS))
        raise SurveyInputError(f"no scale for {instrument}")


def load_instruments(path: str | Path | None = None) -> InstrumentDefs:
    if path is None:
        text = resources.files("dyad_runner").joinpath("data/instruments.json").read_text()
    else:
        text = Path(path).read_text(encoding="utf-8")
    raw = json.loads(text)
    imi = raw["IMI"]
    subscales = tuple(
        SubscaleDef(
            name=name,
            items=imi["subscales"][name]["items"],
            reverse=tuple(imi["subscales"][name]["reverse"]),
        )
        for name in imi["order"]
    )
    return InstrumentDefs(
        imi_subscales=subscales,
        imi_scale=tuple(imi["scale"]),
        panas_items=raw["PANAS"]["items"],
        panas_scale=tuple(raw["PANAS"]["scale"]),
        panas_positive=tuple(raw["PANAS"]["positive_items"]),
        ios_scale=tuple(raw["IOS"]["scale"]),
    )


_DEFAULTS: InstrumentDefs | None = None


def default_instruments() -> InstrumentDefs:
    global _DEFAULTS
    if _DEFAULTS is None:
        _DEFAULTS = load_instruments()
    return _DEFAULTS


@dataclass(frozen=True)
class SurveyResponse:
    instrument: Instrument
    item_scores: tuple[int, ...]

    @classmethod
    def of(cls, instrument: Instrument, scores) -> "SurveyResponse":
        return cls(instrument, tuple(int(s) for s in scores))


class ImiScores(NamedTuple):
    interest: float
    competence: float
    tension: float


def _check_range(scores, lo: int, hi: int) -> None:
    for s in scores:
        if not lo <= s <= hi:
            raise SurveyInputError(f"item score {s} outside [{lo}, {hi}]")


def score_imi(response: SurveyResponse, defs: InstrumentDefs | None = None) -> ImiScores:
    """Per-subscale means after reverse-scoring flagged items (8 - score)."""
    defs = defs or default_instruments()
    if response.instrument is not Instrument.IMI:
        raise SurveyInputError("expected an IMI response")
    if len(response.item_scores) != defs.imi_items:
        raise SurveyInputError(
            f"IMI form has {defs.imi_items} items, got {len(response.item_scores)}"
        )
    lo, hi = defs.imi_scale
    _check_range(response.item_scores, lo, hi)
    flip = lo + hi  # reverse-scored item contributes flip - score
    out = {}
    cursor = 0
    for sub in defs.imi_subscales:
        items = response.item_scores[cursor : cursor + sub.items]
        cursor += sub.items
        total = 0.0
        for i, score in enumerate(items, start=1):
            total += (flip - score) if i in sub.reverse else score
        out[sub.name] = total / sub.items
    return ImiScores(out["interest"], out["competence"], out["tension"])


def score_panas(
    response: SurveyResponse, defs: InstrumentDefs | None = None
) -> tuple[int, int]:
    """(positive, negative) affect sums over the two 10-item groups."""
    defs = defs or default_instruments()
    if response.instrument is not Instrument.PANAS:
        raise SurveyInputError("expected a PANAS response")
    if len(response.item_scores) != defs.panas_items:
        raise SurveyInputError(
            f"PANAS form has {defs.panas_items} items, got {len(response.item_scores)}"
        )
    lo, hi = defs.panas_scale
    _check_range(response.item_scores, lo, hi)
    positive_idx = set(defs.panas_positive)
    positive = sum(
        s for i, s in enumerate(response.item_scores, start=1) if i in positive_idx
    )
    negative = sum(
        s for i, s in enumerate(response.item_scores, start=1) if i not in positive_idx
    )
    return positive, negative


def ios_change(pre: int, post: int, defs: InstrumentDefs | None = None) -> int:
    defs = defs or default_instruments()
    lo, hi = defs.ios_scale
    for v in (pre, post):
        if not lo <= v <= hi:
            raise SurveyInputError(f"IOS score {v} outside [{lo}, {hi}]")
    return post - pre


def synthetic_response(
    instrument: Instrument, rng, defs: InstrumentDefs | None = None
) -> list[int]:
    """Valid random item scores, used by headless simulation checkpoints."""
    defs = defs or default_instruments()
    lo, hi = defs.scale(instrument)
    count = defs.item_count(instrument)
    return [rng.randint(lo, hi) for _ in range(count)]
