"""One project's assessment against a model.

An assessment maps every practice code to a status (implemented /
not-implemented / unknown) plus the evidence behind it. Values are immutable
snapshots: every operation returns a new assessment, evidence lists only ever
grow, and the update timestamp never moves backwards.

Evidence provenance rules:
  * manual judgments are always recorded as certain;
  * probe evidence always carries a locator (the matched path or URL);
  * a probe may flip a status only while no manual evidence backs it
    (manual answers always win).
"""

from __future__ import annotations

import json
import uuid
from dataclasses import dataclass, field, replace
from datetime import datetime
from enum import Enum
from typing import Any, Iterable, Mapping

from .errors import (
    AssessmentFormatError,
    EvidenceError,
    UnknownPracticeError,
)
from .jsonio import canonical_dumps
from .model import DependencyEdge, MaturityModel, PracticeCode
from .timestamps import format_rfc3339, now_utc, parse_rfc3339


class PracticeState(str, Enum):
    IMPLEMENTED = "implemented"
    NOT_IMPLEMENTED = "not_implemented"
    UNKNOWN = "unknown"


class EvidenceSource(str, Enum):
    MANUAL = "manual"
    PROBE = "probe"


class EvidenceConfidence(str, Enum):
    CERTAIN = "certain"
    HEURISTIC = "heuristic"


@dataclass(frozen=True)
class EvidenceRecord:
    source: EvidenceSource
    confidence: EvidenceConfidence
    note: str
    observed_at: datetime
    locator: str | None = None

    def __post_init__(self) -> None:
        if self.source is EvidenceSource.MANUAL and self.confidence is not EvidenceConfidence.CERTAIN:
            raise EvidenceError("manual evidence is always certain")
        if self.source is EvidenceSource.PROBE and not self.locator:
            raise EvidenceError("probe evidence must carry a locator")


@dataclass(frozen=True)
class PracticeStatus:
    state: PracticeState = PracticeState.UNKNOWN
    evidence: tuple[EvidenceRecord, ...] = ()
    criterion_checks: Mapping[int, bool] | None = None
    review_flag: bool = False

    def __post_init__(self) -> None:
        if self.state is not PracticeState.UNKNOWN and not self.evidence:
            raise EvidenceError(f"state {self.state.value} requires at least one evidence record")

    @property
    def has_manual_evidence(self) -> bool:
        return any(e.source is EvidenceSource.MANUAL for e in self.evidence)


@dataclass(frozen=True)
class ProjectInfo:
    name: str
    repository_url: str | None = None
    description: str | None = None

    def __post_init__(self) -> None:
        if not self.name.strip():
            raise ValueError("project name must be non-empty")


@dataclass(frozen=True)
class ModelRef:
    name: str
    version: str

    @classmethod
    def of(cls, model: MaturityModel) -> "ModelRef":
        return cls(model.metadata.model_name, model.metadata.version)


@dataclass(frozen=True)
class Assessment:
    id: str
    model_ref: ModelRef
    project: ProjectInfo
    statuses: Mapping[PracticeCode, PracticeStatus]
    created_at: datetime
    updated_at: datetime

    def status(self, code: PracticeCode) -> PracticeStatus:
        try:
            return self.statuses[code]
        except KeyError:
            raise UnknownPracticeError(str(code)) from None

    def states(self) -> dict[PracticeCode, PracticeState]:
        return {code: status.state for code, status in self.statuses.items()}


class FindingKind(str, Enum):
    DEPENDENCY_VIOLATION = "dependency_violation"
    UNKNOWN_BLOCKING = "unknown_blocking"


@dataclass(frozen=True)
class ConsistencyFinding:
    kind: FindingKind
    codes: tuple[PracticeCode, ...]
    message: str


@dataclass(frozen=True)
class ProbeProposal:
    """One probe outcome offered to an assessment.

    proposed_state None means the probe only contributes an informational
    evidence record (e.g. a not-detected note) without touching the state.
    """

    code: PracticeCode
    proposed_state: PracticeState | None
    record: EvidenceRecord


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def new_assessment(
    model: MaturityModel,
    project: ProjectInfo,
    *,
    assessment_id: str | None = None,
    now: datetime | None = None,
) -> Assessment:
    """Fresh assessment with every practice unknown and no evidence."""
    ts = now or now_utc()
    statuses = {code: PracticeStatus() for code in model.codes()}
    return Assessment(
        id=assessment_id or uuid.uuid4().hex,
        model_ref=ModelRef.of(model),
        project=project,
        statuses=statuses,
        created_at=ts,
        updated_at=ts,
    )


def set_status(
    assessment: Assessment,
    code: PracticeCode,
    state: PracticeState,
    evidence: EvidenceRecord | None = None,
    *,
    criterion_checks: Mapping[int, bool] | None = None,
    now: datetime | None = None,
) -> Assessment:
    """Replace one practice status, appending (never discarding) evidence."""
    current = assessment.status(code)
    if state is not PracticeState.UNKNOWN and evidence is None and not current.evidence:
        raise EvidenceError(f"setting {code} to {state.value} requires an evidence record")
    new_evidence = current.evidence + ((evidence,) if evidence is not None else ())
    new_status = PracticeStatus(
        state=state,
        evidence=new_evidence,
        criterion_checks=criterion_checks if criterion_checks is not None else current.criterion_checks,
        review_flag=current.review_flag,
    )
    return _with_status(assessment, code, new_status, now=now)


def merge_probe_results(
    assessment: Assessment,
    proposals: Iterable[ProbeProposal],
    *,
    now: datetime | None = None,
) -> Assessment:
    """Fold probe outcomes into an assessment.

    Every record is appended. A proposal changes the state only when the
    current state is unknown or all existing evidence is probe-sourced;
    manual evidence always wins. When a probe contradicts an earlier
    probe-backed determinate state, the status is flagged for review.
    """
    result = assessment
    for proposal in proposals:
        current = result.status(proposal.code)
        evidence = current.evidence + (proposal.record,)
        state = current.state
        review_flag = current.review_flag
        if proposal.proposed_state is not None:
            if current.state is PracticeState.UNKNOWN or not current.has_manual_evidence:
                if (
                    current.state is not PracticeState.UNKNOWN
                    and current.state is not proposal.proposed_state
                ):
                    review_flag = True
                state = proposal.proposed_state
        new_status = PracticeStatus(
            state=state,
            evidence=evidence,
            criterion_checks=current.criterion_checks,
            review_flag=review_flag,
        )
        result = _with_status(result, proposal.code, new_status, now=now)
    return result


def _with_status(
    assessment: Assessment,
    code: PracticeCode,
    status: PracticeStatus,
    *,
    now: datetime | None = None,
) -> Assessment:
    if code not in assessment.statuses:
        raise UnknownPracticeError(str(code))
    ts = now or now_utc()
    statuses = dict(assessment.statuses)
    statuses[code] = status
    return replace(
        assessment,
        statuses=statuses,
        updated_at=max(ts, assessment.updated_at),
    )


def check_consistency(model: MaturityModel, assessment: Assessment) -> list[ConsistencyFinding]:
    """Report dependency edges whose dependent is implemented while the
    prerequisite is not.

    Findings are warnings only; scoring never consults dependency edges.
    A not-implemented prerequisite is a violation, an unanswered one is
    reported separately as unknown-blocking.
    """
    findings: list[ConsistencyFinding] = []
    for edge in model.dependencies:
        dependent = assessment.statuses.get(edge.dependent, PracticeStatus())
        if dependent.state is not PracticeState.IMPLEMENTED:
            continue
        prerequisite = assessment.statuses.get(edge.prerequisite, PracticeStatus())
        if prerequisite.state is PracticeState.NOT_IMPLEMENTED:
            findings.append(_finding(FindingKind.DEPENDENCY_VIOLATION, edge, "is not implemented"))
        elif prerequisite.state is PracticeState.UNKNOWN:
            findings.append(_finding(FindingKind.UNKNOWN_BLOCKING, edge, "has not been answered"))
    return findings


def _finding(kind: FindingKind, edge: DependencyEdge, why: str) -> ConsistencyFinding:
    return ConsistencyFinding(
        kind=kind,
        codes=(edge.prerequisite, edge.dependent),
        message=f"{edge.dependent} is implemented but its prerequisite {edge.prerequisite} {why}",
    )


def completeness(assessment: Assessment) -> float:
    """Fraction of practices answered (anything but unknown)."""
    total = len(assessment.statuses)
    if total == 0:
        return 0.0
    answered = sum(1 for s in assessment.statuses.values() if s.state is not PracticeState.UNKNOWN)
    return answered / total


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def assessment_to_dict(assessment: Assessment) -> dict[str, Any]:
    statuses: dict[str, Any] = {}
    for code in sorted(assessment.statuses):
        statuses[str(code)] = _status_to_dict(assessment.statuses[code])
    return {
        "id": assessment.id,
        "model_ref": {"name": assessment.model_ref.name, "version": assessment.model_ref.version},
        "project": _project_to_dict(assessment.project),
        "created_at": format_rfc3339(assessment.created_at),
        "updated_at": format_rfc3339(assessment.updated_at),
        "statuses": statuses,
    }


def _project_to_dict(project: ProjectInfo) -> dict[str, Any]:
    doc: dict[str, Any] = {"name": project.name}
    if project.repository_url is not None:
        doc["repository_url"] = project.repository_url
    if project.description is not None:
        doc["description"] = project.description
    return doc


def _status_to_dict(status: PracticeStatus) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "state": status.state.value,
        "evidence": [_evidence_to_dict(e) for e in status.evidence],
    }
    if status.criterion_checks is not None:
        doc["criterion_checks"] = {str(k): v for k, v in sorted(status.criterion_checks.items())}
    if status.review_flag:
        doc["review_flag"] = True
    return doc


def _evidence_to_dict(record: EvidenceRecord) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "source": record.source.value,
        "confidence": record.confidence.value,
        "note": record.note,
        "observed_at": format_rfc3339(record.observed_at),
    }
    if record.locator is not None:
        doc["locator"] = record.locator
    return doc


def serialize_assessment(assessment: Assessment) -> str:
    return canonical_dumps(assessment_to_dict(assessment))


def parse_assessment(text: str, model: MaturityModel) -> Assessment:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AssessmentFormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return assessment_from_dict(data, model)


def assessment_from_dict(data: Any, model: MaturityModel) -> Assessment:
    """Build an assessment from a document, validating codes against the model.

    Practices the document does not mention are filled in as unknown, so
    sparse documents normalize to the canonical full form.
    """
    if not isinstance(data, dict):
        raise AssessmentFormatError("assessment document root must be an object")
    for key in ("id", "model_ref", "project", "statuses"):
        if key not in data:
            raise AssessmentFormatError(f"missing required field: {key}")

    ref_raw = data["model_ref"]
    if not isinstance(ref_raw, dict) or "name" not in ref_raw or "version" not in ref_raw:
        raise AssessmentFormatError("model_ref must be an object with name and version")
    model_ref = ModelRef(str(ref_raw["name"]), str(ref_raw["version"]))

    project_raw = data["project"]
    if not isinstance(project_raw, dict) or not str(project_raw.get("name", "")).strip():
        raise AssessmentFormatError("project must be an object with a non-empty name")
    project = ProjectInfo(
        name=str(project_raw["name"]),
        repository_url=project_raw.get("repository_url"),
        description=project_raw.get("description"),
    )

    statuses_raw = data["statuses"]
    if not isinstance(statuses_raw, dict):
        raise AssessmentFormatError("statuses must be an object keyed by practice code")

    statuses: dict[PracticeCode, PracticeStatus] = {code: PracticeStatus() for code in model.codes()}
    for code_text, status_raw in statuses_raw.items():
        try:
            code = PracticeCode.parse(code_text)
        except ValueError:
            raise UnknownPracticeError(code_text) from None
        if not model.has_code(code):
            raise UnknownPracticeError(code_text)
        statuses[code] = _status_from_dict(status_raw, code_text)

    created_at = parse_rfc3339(str(data.get("created_at", "1970-01-01T00:00:00Z")))
    updated_at = parse_rfc3339(str(data.get("updated_at", "1970-01-01T00:00:00Z")))

    return Assessment(
        id=str(data["id"]),
        model_ref=model_ref,
        project=project,
        statuses=statuses,
        created_at=created_at,
        updated_at=updated_at,
    )


def _status_from_dict(data: Any, code_text: str) -> PracticeStatus:
    if not isinstance(data, dict):
        raise AssessmentFormatError(f"status of {code_text} must be an object")
    try:
        state = PracticeState(data.get("state", "unknown"))
    except ValueError:
        raise AssessmentFormatError(
            f"status of {code_text} has invalid state {data.get('state')!r}"
        ) from None
    evidence_raw = data.get("evidence", [])
    if not isinstance(evidence_raw, list):
        raise AssessmentFormatError(f"evidence of {code_text} must be a list")
    evidence = tuple(_evidence_from_dict(e, code_text) for e in evidence_raw)
    checks_raw = data.get("criterion_checks")
    criterion_checks: dict[int, bool] | None = None
    if checks_raw is not None:
        if not isinstance(checks_raw, dict):
            raise AssessmentFormatError(f"criterion_checks of {code_text} must be an object")
        try:
            criterion_checks = {int(k): bool(v) for k, v in checks_raw.items()}
        except ValueError:
            raise AssessmentFormatError(
                f"criterion_checks of {code_text} must be keyed by criterion index"
            ) from None
    try:
        return PracticeStatus(
            state=state,
            evidence=evidence,
            criterion_checks=criterion_checks,
            review_flag=bool(data.get("review_flag", False)),
        )
    except EvidenceError as exc:
        raise AssessmentFormatError(f"status of {code_text}: {exc}") from None


def _evidence_from_dict(data: Any, code_text: str) -> EvidenceRecord:
    if not isinstance(data, dict):
        raise AssessmentFormatError(f"evidence entry of {code_text} must be an object")
    try:
        return EvidenceRecord(
            source=EvidenceSource(data.get("source")),
            confidence=EvidenceConfidence(data.get("confidence")),
            note=str(data.get("note", "")),
            observed_at=parse_rfc3339(str(data.get("observed_at", "1970-01-01T00:00:00Z"))),
            locator=data.get("locator"),
        )
    except (ValueError, EvidenceError) as exc:
        raise AssessmentFormatError(f"evidence entry of {code_text}: {exc}") from None
