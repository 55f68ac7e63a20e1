"""Probe execution: match rules against a snapshot, translate to evidence.

Probing is a pure function of (snapshot, rules): the same snapshot always
yields the same results. A detection proposes an implemented state at the
rule's confidence; a non-detection never proposes a state (absence of
evidence is not evidence of absence) and is kept as an informational record
only.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from typing import Iterable, Sequence

from ..assessment import (
    EvidenceConfidence,
    EvidenceRecord,
    EvidenceSource,
    PracticeState,
    ProbeProposal,
)
from ..model import PracticeCode
from ..timestamps import now_utc
from .rules import ProbeRule
from .snapshot import RepoSnapshot


class ProbeOutcome(str, Enum):
    DETECTED = "detected"
    NOT_DETECTED = "not_detected"
    INAPPLICABLE = "inapplicable"


@dataclass(frozen=True)
class ProbeResult:
    rule_id: str
    target: PracticeCode
    outcome: ProbeOutcome
    confidence_certain: bool
    locator: str | None = None
    detail: str = ""

    def __post_init__(self) -> None:
        if self.outcome is ProbeOutcome.DETECTED and not self.locator:
            raise ValueError("detected results must carry a locator")


def run_probes(snapshot: RepoSnapshot, rules: Sequence[ProbeRule]) -> tuple[ProbeResult, ...]:
    return tuple(_run_rule(snapshot, rule) for rule in rules)


def _run_rule(snapshot: RepoSnapshot, rule: ProbeRule) -> ProbeResult:
    locator: str | None = None
    details: list[str] = []

    if rule.platform is not None:
        if snapshot.platform is None:
            return _result(rule, ProbeOutcome.INAPPLICABLE, detail="no platform metadata in snapshot")
        for field_name, wanted in rule.platform.items():
            present = snapshot.platform.field_present(field_name)
            if present is None:
                return _result(
                    rule, ProbeOutcome.INAPPLICABLE, detail=f"platform field {field_name} unavailable"
                )
            if present is not wanted:
                return _result(
                    rule,
                    ProbeOutcome.NOT_DETECTED,
                    detail=f"platform field {field_name} is {'present' if present else 'absent'}",
                )
        locator = f"{snapshot.origin}#platform"
        details.append("platform metadata matched")

    if rule.paths:
        matched = snapshot.paths_matching(rule.paths)
        if not matched:
            return _result(rule, ProbeOutcome.NOT_DETECTED, detail="no path matched")
        if rule.content_pattern is not None:
            try:
                pattern = re.compile(rule.content_pattern, re.MULTILINE)
            except re.error as exc:
                return _result(rule, ProbeOutcome.INAPPLICABLE, detail=f"bad pattern: {exc}")
            hit = None
            missing_content = 0
            for path in matched:
                text = snapshot.contents.get(path)
                if text is None:
                    missing_content += 1
                    continue
                if pattern.search(text):
                    hit = path
                    break
            if hit is None:
                detail = "content pattern not found"
                if missing_content:
                    detail += f" ({missing_content} matched file(s) had no content loaded)"
                return _result(rule, ProbeOutcome.NOT_DETECTED, detail=detail)
            locator = hit
            details.append(f"content matched in {hit}")
        else:
            locator = matched[0]
            details.append(f"path matched: {matched[0]}")

    return _result(rule, ProbeOutcome.DETECTED, locator=locator, detail="; ".join(details))


def _result(
    rule: ProbeRule,
    outcome: ProbeOutcome,
    *,
    locator: str | None = None,
    detail: str = "",
) -> ProbeResult:
    return ProbeResult(
        rule_id=rule.id,
        target=rule.target,
        outcome=outcome,
        confidence_certain=rule.confidence is EvidenceConfidence.CERTAIN,
        locator=locator,
        detail=detail,
    )


def to_probe_evidence(
    results: Iterable[ProbeResult],
    *,
    origin: str,
    now: datetime | None = None,
) -> tuple[ProbeProposal, ...]:
    """Translate probe results into assessment proposals.

    Detections propose implemented; non-detections are informational records
    with no proposed state; inapplicable results are dropped.
    """
    ts = now or now_utc()
    proposals: list[ProbeProposal] = []
    for result in results:
        if result.outcome is ProbeOutcome.INAPPLICABLE:
            continue
        if result.outcome is ProbeOutcome.DETECTED:
            proposals.append(
                ProbeProposal(
                    code=result.target,
                    proposed_state=PracticeState.IMPLEMENTED,
                    record=EvidenceRecord(
                        source=EvidenceSource.PROBE,
                        confidence=(
                            EvidenceConfidence.CERTAIN
                            if result.confidence_certain
                            else EvidenceConfidence.HEURISTIC
                        ),
                        note=f"{result.rule_id}: {result.detail}" if result.detail else result.rule_id,
                        observed_at=ts,
                        locator=result.locator,
                    ),
                )
            )
        else:
            proposals.append(
                ProbeProposal(
                    code=result.target,
                    proposed_state=None,
                    record=EvidenceRecord(
                        source=EvidenceSource.PROBE,
                        confidence=EvidenceConfidence.HEURISTIC,
                        note=f"{result.rule_id}: not detected"
                        + (f" ({result.detail})" if result.detail else ""),
                        observed_at=ts,
                        locator=result.locator or origin,
                    ),
                )
            )
    return tuple(proposals)
