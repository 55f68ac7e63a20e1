"""Non-interactive answers files.

An answers file is a flat JSON object keyed by practice code. Each value is
either a bare state string ("implemented" / "not_implemented" / "unknown") or
an object {"state": ..., "note": ...}. The shape mirrors the statuses map of
an assessment document, so published evaluation grids double as CLI inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime
from importlib import resources
from typing import Iterator

from .assessment import (
    Assessment,
    EvidenceConfidence,
    EvidenceRecord,
    EvidenceSource,
    PracticeState,
    set_status,
)
from .errors import AssessmentFormatError, UnknownPracticeError
from .model import MaturityModel, PracticeCode
from .timestamps import now_utc

BUNDLED_ANSWER_FIXTURES = {
    "ggir": "fixtures/ggir_answers.json",
    "esmvaltool": "fixtures/esmvaltool_answers.json",
}


@dataclass(frozen=True)
class Answer:
    code: PracticeCode
    state: PracticeState
    note: str


def parse_answers(text: str) -> list[Answer]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AssessmentFormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise AssessmentFormatError("answers file root must be an object keyed by practice code")
    return sorted(_iter_answers(data), key=lambda a: a.code)


def _iter_answers(data: dict) -> Iterator[Answer]:
    for code_text, value in data.items():
        try:
            code = PracticeCode.parse(code_text)
        except ValueError:
            raise UnknownPracticeError(code_text) from None
        if isinstance(value, str):
            state_text, note = value, ""
        elif isinstance(value, dict) and "state" in value:
            state_text, note = value["state"], str(value.get("note", ""))
        else:
            raise AssessmentFormatError(
                f"answer for {code_text} must be a state string or an object with a state"
            )
        try:
            state = PracticeState(state_text)
        except ValueError:
            raise AssessmentFormatError(
                f"answer for {code_text} has invalid state {state_text!r}"
            ) from None
        yield Answer(code=code, state=state, note=note)


def apply_answers(
    model: MaturityModel,
    assessment: Assessment,
    answers: list[Answer],
    *,
    now: datetime | None = None,
) -> Assessment:
    """Record each answer as a manual judgment on the assessment."""
    ts = now or now_utc()
    result = assessment
    for answer in answers:
        if not model.has_code(answer.code):
            raise UnknownPracticeError(str(answer.code))
        evidence = None
        if answer.state is not PracticeState.UNKNOWN:
            evidence = EvidenceRecord(
                source=EvidenceSource.MANUAL,
                confidence=EvidenceConfidence.CERTAIN,
                note=answer.note or "answers file entry",
                observed_at=ts,
            )
        result = set_status(result, answer.code, answer.state, evidence, now=ts)
    return result


def bundled_answers_text(name: str) -> str:
    """Answers fixture shipped with the package ("ggir" or "esmvaltool")."""
    try:
        resource = BUNDLED_ANSWER_FIXTURES[name]
    except KeyError:
        raise KeyError(f"no bundled answers fixture named {name!r}") from None
    return resources.files("rsmm.data").joinpath(resource).read_text("utf-8")
