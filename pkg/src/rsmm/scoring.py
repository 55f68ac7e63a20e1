"""Capability achieved levels, maturity profiles, gaps, and what-if runs.

Scoring rule, per capability: walk its practice levels upward and stop at the
first practice that is not implemented; the achieved level is one below that
practice's level. Levels with no practice pass vacuously, and a capability
with every practice implemented achieves the model's max level. A focus
area's maturity is the minimum of its capabilities' achieved levels, and the
profile is the per-focus-area vector rendered "4-3-6-7".

Unknown counts as not implemented. Everything here is a pure function of
(model, states); nothing mutates an assessment.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Mapping

from .assessment import Assessment, ModelRef, PracticeState
from .errors import UnknownPracticeError
from .model import Capability, MaturityModel, PracticeCode

StateMap = Mapping[PracticeCode, PracticeState]


@dataclass(frozen=True)
class CapabilityScore:
    focus_area: int
    capability: int
    achieved_level: int
    blocking_code: PracticeCode | None

    @property
    def key(self) -> str:
        return f"{self.focus_area}.{self.capability}"


@dataclass(frozen=True)
class MaturityProfile:
    model_ref: ModelRef
    assessment_id: str
    focus_area_levels: tuple[int, ...]
    capability_scores: tuple[CapabilityScore, ...]

    @property
    def vector_text(self) -> str:
        return "-".join(str(level) for level in self.focus_area_levels)

    def capability_score(self, focus_area: int, capability: int) -> CapabilityScore:
        for score in self.capability_scores:
            if score.focus_area == focus_area and score.capability == capability:
                return score
        raise KeyError(f"no capability {focus_area}.{capability} in profile")


@dataclass(frozen=True)
class GapItem:
    focus_area: int
    code: PracticeCode
    current_level: int
    unlocked_level: int

    @property
    def lift(self) -> int:
        return self.unlocked_level - self.current_level


@dataclass(frozen=True)
class WhatIfResult:
    flipped: frozenset[PracticeCode]
    before: MaturityProfile
    after: MaturityProfile


def achieved_level(capability: Capability, states: StateMap, max_level: int) -> tuple[int, PracticeCode | None]:
    """First-gap score for one capability: (achieved level, blocking code)."""
    for practice in sorted(capability.practices, key=lambda p: p.code.level):
        if states.get(practice.code, PracticeState.UNKNOWN) is not PracticeState.IMPLEMENTED:
            return practice.code.level - 1, practice.code
    return max_level, None


def profile(model: MaturityModel, assessment: Assessment) -> MaturityProfile:
    return profile_from_states(model, assessment.states(), assessment_id=assessment.id)


def profile_from_states(
    model: MaturityModel,
    states: StateMap,
    *,
    assessment_id: str = "",
) -> MaturityProfile:
    capability_scores: list[CapabilityScore] = []
    focus_area_levels: list[int] = []
    for fa in model.focus_areas:
        cap_levels: list[int] = []
        for cap in fa.capabilities:
            level, blocking = achieved_level(cap, states, model.max_level)
            capability_scores.append(
                CapabilityScore(
                    focus_area=fa.index,
                    capability=cap.index,
                    achieved_level=level,
                    blocking_code=blocking,
                )
            )
            cap_levels.append(level)
        focus_area_levels.append(min(cap_levels))
    return MaturityProfile(
        model_ref=ModelRef.of(model),
        assessment_id=assessment_id,
        focus_area_levels=tuple(focus_area_levels),
        capability_scores=tuple(capability_scores),
    )


def gap_analysis(model: MaturityModel, assessment: Assessment) -> list[GapItem]:
    """One item per blocking practice, with the focus-area level a single
    flip of that practice would unlock.

    Sorted by lift descending, ties broken by practice code.
    """
    states = assessment.states()
    base = profile_from_states(model, states, assessment_id=assessment.id)
    items: list[GapItem] = []
    for score in base.capability_scores:
        if score.blocking_code is None:
            continue
        flipped = dict(states)
        flipped[score.blocking_code] = PracticeState.IMPLEMENTED
        after = profile_from_states(model, flipped, assessment_id=assessment.id)
        fa_index = score.focus_area
        items.append(
            GapItem(
                focus_area=fa_index,
                code=score.blocking_code,
                current_level=base.focus_area_levels[fa_index - 1],
                unlocked_level=after.focus_area_levels[fa_index - 1],
            )
        )
    items.sort(key=lambda item: (-item.lift, item.code))
    return items


def what_if(
    model: MaturityModel,
    assessment: Assessment,
    flips: Mapping[PracticeCode, PracticeState],
) -> WhatIfResult:
    """Simulate status flips without touching the assessment."""
    for code in flips:
        if not model.has_code(code):
            raise UnknownPracticeError(str(code))
    states = assessment.states()
    before = profile_from_states(model, states, assessment_id=assessment.id)
    overlay = dict(states)
    overlay.update(flips)
    after = profile_from_states(model, overlay, assessment_id=assessment.id)
    return WhatIfResult(flipped=frozenset(flips), before=before, after=after)


def profile_to_dict(p: MaturityProfile) -> dict[str, Any]:
    return {
        "model_ref": {"name": p.model_ref.name, "version": p.model_ref.version},
        "assessment_id": p.assessment_id,
        "vector": list(p.focus_area_levels),
        "vector_text": p.vector_text,
        "capabilities": [
            {
                "code": score.key,
                "achieved": score.achieved_level,
                "blocking_code": str(score.blocking_code) if score.blocking_code else None,
            }
            for score in p.capability_scores
        ],
    }


def gap_items_to_dicts(items: Iterable[GapItem]) -> list[dict[str, Any]]:
    return [
        {
            "focus_area": item.focus_area,
            "code": str(item.code),
            "current_level": item.current_level,
            "unlocked_level": item.unlocked_level,
        }
        for item in items
    ]
