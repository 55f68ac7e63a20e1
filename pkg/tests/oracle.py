"""Brute-force scoring oracle, independent of the engine's implementation.

For every candidate level L from max_level down to 0, checks directly that
all practices at levels <= L are implemented, and returns the largest such L.
Deliberately shares no code path with rsmm.scoring.
"""

from __future__ import annotations

from rsmm.assessment import PracticeState
from rsmm.model import Capability, MaturityModel, PracticeCode


def oracle_achieved_level(
    capability: Capability,
    states: dict[PracticeCode, PracticeState],
    max_level: int,
) -> int:
    for candidate in range(max_level, -1, -1):
        if all(
            states.get(p.code) is PracticeState.IMPLEMENTED
            for p in capability.practices
            if p.code.level <= candidate
        ):
            return candidate
    return 0


def oracle_vector(model: MaturityModel, states: dict[PracticeCode, PracticeState]) -> list[int]:
    vector = []
    for fa in model.focus_areas:
        vector.append(
            min(oracle_achieved_level(cap, states, model.max_level) for cap in fa.capabilities)
        )
    return vector
