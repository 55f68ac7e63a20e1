"""Probe rules: declarative matchers mapping repository signals to practices.

Rules are data, not code. Each rule needs at least one matcher:
  * paths: glob patterns over the repo-relative file index (case-insensitive,
    Python fnmatch semantics applied to the full relative path);
  * content_pattern: Python re syntax, searched with re.MULTILINE over the
    content of path-matched files;
  * platform: predicate over hosting-platform metadata, an object mapping
    field name (license / tags / topics / ci_config / default_branch) to the
    required presence boolean.

A rule may claim certain confidence only when its detector is purely a
platform-metadata fact; everything inferred from file presence or content
stays heuristic.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Any, Iterable, Mapping

from ..assessment import EvidenceConfidence
from ..errors import ProbeRuleError, UnknownPracticeError
from ..model import MaturityModel, PracticeCode

DEFAULT_RULES_RESOURCE = "default_probe_rules.json"

PLATFORM_FIELDS = {"license", "tags", "topics", "ci_config", "default_branch"}


@dataclass(frozen=True)
class ProbeRule:
    id: str
    description: str
    target: PracticeCode
    confidence: EvidenceConfidence
    paths: tuple[str, ...] = ()
    content_pattern: str | None = None
    platform: Mapping[str, bool] | None = None

    @property
    def has_matcher(self) -> bool:
        return bool(self.paths) or self.content_pattern is not None or self.platform is not None


def parse_rules(text: str, model: MaturityModel) -> tuple[ProbeRule, ...]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProbeRuleError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if isinstance(data, dict) and "rules" in data:
        data = data["rules"]
    if not isinstance(data, list):
        raise ProbeRuleError("rule file must be a list of rules (or an object with a 'rules' list)")
    rules = tuple(_parse_rule(entry, model) for entry in data)
    seen: set[str] = set()
    for rule in rules:
        if rule.id in seen:
            raise ProbeRuleError(f"duplicate rule id: {rule.id}")
        seen.add(rule.id)
    return rules


def _parse_rule(data: Any, model: MaturityModel) -> ProbeRule:
    if not isinstance(data, dict):
        raise ProbeRuleError("each rule must be an object")
    rule_id = data.get("id")
    if not isinstance(rule_id, str) or not rule_id:
        raise ProbeRuleError("rule id must be a non-empty string")

    target_text = data.get("target")
    if not isinstance(target_text, str):
        raise ProbeRuleError(f"rule {rule_id}: target must be a practice code string")
    try:
        target = PracticeCode.parse(target_text)
    except ValueError as exc:
        raise ProbeRuleError(f"rule {rule_id}: {exc}") from None
    if not model.has_code(target):
        raise UnknownPracticeError(target_text)

    try:
        confidence = EvidenceConfidence(data.get("confidence", "heuristic"))
    except ValueError:
        raise ProbeRuleError(f"rule {rule_id}: confidence must be certain or heuristic") from None

    paths_raw = data.get("paths", [])
    if not isinstance(paths_raw, list) or not all(isinstance(p, str) for p in paths_raw):
        raise ProbeRuleError(f"rule {rule_id}: paths must be a list of glob strings")
    paths = tuple(paths_raw)

    content_pattern = data.get("content_pattern")
    if content_pattern is not None:
        if not isinstance(content_pattern, str):
            raise ProbeRuleError(f"rule {rule_id}: content_pattern must be a string")
        try:
            re.compile(content_pattern)
        except re.error as exc:
            raise ProbeRuleError(f"rule {rule_id}: invalid content_pattern: {exc}") from None
        if not paths:
            raise ProbeRuleError(f"rule {rule_id}: content_pattern requires paths to scope it")

    platform_raw = data.get("platform")
    platform: dict[str, bool] | None = None
    if platform_raw is not None:
        if not isinstance(platform_raw, dict) or not platform_raw:
            raise ProbeRuleError(f"rule {rule_id}: platform predicate must be a non-empty object")
        for key, value in platform_raw.items():
            if key not in PLATFORM_FIELDS:
                raise ProbeRuleError(
                    f"rule {rule_id}: unknown platform field {key!r} "
                    f"(known: {', '.join(sorted(PLATFORM_FIELDS))})"
                )
            if not isinstance(value, bool):
                raise ProbeRuleError(f"rule {rule_id}: platform field {key!r} must map to a boolean")
        platform = dict(platform_raw)

    rule = ProbeRule(
        id=rule_id,
        description=str(data.get("description", "")),
        target=target,
        confidence=confidence,
        paths=paths,
        content_pattern=content_pattern,
        platform=platform,
    )
    if not rule.has_matcher:
        raise ProbeRuleError(f"rule {rule_id}: at least one matcher is required")
    if confidence is EvidenceConfidence.CERTAIN and (paths or content_pattern):
        raise ProbeRuleError(
            f"rule {rule_id}: certain confidence is reserved for platform-metadata detectors"
        )
    return rule


def content_globs(rules: Iterable[ProbeRule]) -> tuple[str, ...]:
    """Path globs whose file content the rules actually inspect."""
    globs: set[str] = set()
    for rule in rules:
        if rule.content_pattern is not None:
            globs.update(rule.paths)
    return tuple(sorted(globs))


def default_rules_text() -> str:
    return resources.files("rsmm.data").joinpath(DEFAULT_RULES_RESOURCE).read_text("utf-8")


@lru_cache(maxsize=1)
def _default_rules_cached(model_key: int) -> tuple[ProbeRule, ...]:
    from ..model import bundled_rsmm

    return parse_rules(default_rules_text(), bundled_rsmm())


def default_rules(model: MaturityModel | None = None) -> tuple[ProbeRule, ...]:
    """The bundled rule set, validated against the given model (default: bundled)."""
    if model is None:
        return _default_rules_cached(0)
    return parse_rules(default_rules_text(), model)
