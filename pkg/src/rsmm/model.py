"""Focus-area maturity model: domain types, JSON parsing, validation.

A model is a tree of focus areas > capabilities > practices. Each practice
sits at exactly one maturity level inside its capability and is addressed by
the dotted code "focus_area.capability.level" (e.g. "2.3.5"). Models are
data, not code: the engine assumes nothing beyond this schema, so grids of
any shape (different level counts, area counts) load the same way.

Model values are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from importlib import resources
from typing import Any, Iterator, Mapping

from .errors import ModelSyntaxError, ModelValidationError, UnknownPracticeError
from .jsonio import canonical_dumps

BUNDLED_MODEL_RESOURCE = "rsmm_v1.json"


class CriterionPriority(str, Enum):
    """MoSCoW priority of one implementation criterion (W is never used)."""

    MUST = "M"
    SHOULD = "S"
    COULD = "C"


@dataclass(frozen=True, order=True)
class PracticeCode:
    """Dotted practice address: focus area index, capability index, level."""

    focus_area: int
    capability: int
    level: int

    def __post_init__(self) -> None:
        if self.focus_area < 1 or self.capability < 1 or self.level < 1:
            raise ValueError(f"practice code components must be positive: {self!r}")

    @classmethod
    def parse(cls, text: str) -> "PracticeCode":
        parts = text.split(".")
        if len(parts) != 3:
            raise ValueError(f"not a practice code (expected 'f.c.l'): {text!r}")
        try:
            f, c, l = (int(p, 10) for p in parts)
        except ValueError:
            raise ValueError(f"not a practice code (expected 'f.c.l'): {text!r}") from None
        for part, value in zip(parts, (f, c, l)):
            if str(value) != part:
                raise ValueError(f"not a canonical practice code: {text!r}")
        return cls(f, c, l)

    def __str__(self) -> str:
        return f"{self.focus_area}.{self.capability}.{self.level}"

    @property
    def capability_key(self) -> str:
        return f"{self.focus_area}.{self.capability}"


@dataclass(frozen=True)
class CriterionItem:
    priority: CriterionPriority
    text: str


@dataclass(frozen=True)
class Practice:
    code: PracticeCode
    name: str
    description: str = ""
    criteria: tuple[CriterionItem, ...] = ()
    resources: tuple[str, ...] = ()
    references: tuple[str, ...] = ()
    extra: Mapping[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Capability:
    index: int
    name: str
    practices: tuple[Practice, ...]
    extra: Mapping[str, Any] = field(default_factory=dict)

    @property
    def levels(self) -> tuple[int, ...]:
        return tuple(p.code.level for p in self.practices)

    def practice_at(self, level: int) -> Practice | None:
        for practice in self.practices:
            if practice.code.level == level:
                return practice
        return None


@dataclass(frozen=True)
class FocusArea:
    index: int
    name: str
    capabilities: tuple[Capability, ...]
    extra: Mapping[str, Any] = field(default_factory=dict)

    @property
    def practice_count(self) -> int:
        return sum(len(c.practices) for c in self.capabilities)


@dataclass(frozen=True)
class ModelMetadata:
    model_name: str
    version: str
    source: str = ""
    extra: Mapping[str, Any] = field(default_factory=dict)

    @property
    def ref(self) -> dict[str, str]:
        return {"name": self.model_name, "version": self.version}


@dataclass(frozen=True)
class DependencyEdge:
    """Ordering constraint: prerequisite must be implemented before dependent."""

    prerequisite: PracticeCode
    dependent: PracticeCode


@dataclass(frozen=True)
class MaturityModel:
    metadata: ModelMetadata
    max_level: int
    focus_areas: tuple[FocusArea, ...]
    dependencies: tuple[DependencyEdge, ...] = ()
    extra: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        index: dict[PracticeCode, Practice] = {}
        for fa in self.focus_areas:
            for cap in fa.capabilities:
                for practice in cap.practices:
                    index[practice.code] = practice
        object.__setattr__(self, "_by_code", index)

    def practices(self) -> Iterator[Practice]:
        for fa in self.focus_areas:
            for cap in fa.capabilities:
                yield from cap.practices

    def codes(self) -> Iterator[PracticeCode]:
        for practice in self.practices():
            yield practice.code

    def capability_pairs(self) -> Iterator[tuple[FocusArea, Capability]]:
        for fa in self.focus_areas:
            for cap in fa.capabilities:
                yield fa, cap

    def lookup(self, code: PracticeCode) -> Practice:
        try:
            return self._by_code[code]  # type: ignore[attr-defined]
        except KeyError:
            raise UnknownPracticeError(str(code)) from None

    def has_code(self, code: PracticeCode) -> bool:
        return code in self._by_code  # type: ignore[attr-defined]

    @property
    def practice_count(self) -> int:
        return len(self._by_code)  # type: ignore[attr-defined]

    @property
    def capability_count(self) -> int:
        return sum(len(fa.capabilities) for fa in self.focus_areas)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def parse_model(text: str) -> MaturityModel:
    """Parse and fully validate a model document.

    Raises ModelSyntaxError with the source position for malformed JSON and
    ModelValidationError naming the offending practice code for semantic
    violations (duplicate codes, levels out of range, cyclic or
    level-inverted dependencies).
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelSyntaxError(exc.msg, line=exc.lineno, column=exc.colno) from exc
    return model_from_dict(data)


def model_from_dict(data: Any) -> MaturityModel:
    if not isinstance(data, dict):
        raise ModelValidationError("model document root must be an object")

    metadata = _parse_metadata(_require(data, "metadata", dict))
    max_level = _require(data, "max_level", int)
    if max_level < 1:
        raise ModelValidationError(f"max_level must be positive, got {max_level}")

    focus_areas = tuple(
        _parse_focus_area(entry, position=i + 1, max_level=max_level)
        for i, entry in enumerate(_require(data, "focus_areas", list))
    )
    if not focus_areas:
        raise ModelValidationError("model must contain at least one focus area")

    dependencies_raw = data.get("dependencies", [])
    if not isinstance(dependencies_raw, list):
        raise ModelValidationError("dependencies must be a list")
    dependencies = tuple(_parse_dependency(entry) for entry in dependencies_raw)

    extra = {k: v for k, v in data.items() if k not in {"metadata", "max_level", "focus_areas", "dependencies"}}
    model = MaturityModel(
        metadata=metadata,
        max_level=max_level,
        focus_areas=focus_areas,
        dependencies=dependencies,
        extra=extra,
    )
    _validate_model(model)
    return model


def _require(data: dict, key: str, expected: type) -> Any:
    if key not in data:
        raise ModelValidationError(f"missing required field: {key}")
    value = data[key]
    if expected is int and isinstance(value, bool):
        raise ModelValidationError(f"field {key} must be an integer")
    if not isinstance(value, expected):
        raise ModelValidationError(f"field {key} has wrong type (expected {expected.__name__})")
    return value


def _parse_metadata(data: dict) -> ModelMetadata:
    name = _require(data, "model_name", str)
    version = _require(data, "version", str)
    if not name.strip() or not version.strip():
        raise ModelValidationError("metadata model_name and version must be non-empty")
    source = data.get("source", "")
    if not isinstance(source, str):
        raise ModelValidationError("metadata source must be a string")
    extra = {k: v for k, v in data.items() if k not in {"model_name", "version", "source"}}
    return ModelMetadata(model_name=name, version=version, source=source, extra=extra)


def _parse_focus_area(data: Any, *, position: int, max_level: int) -> FocusArea:
    if not isinstance(data, dict):
        raise ModelValidationError(f"focus area #{position} must be an object")
    index = _require(data, "index", int)
    if index != position:
        raise ModelValidationError(
            f"focus area indices must be consecutive from 1: found {index} at position {position}"
        )
    name = _require(data, "name", str)
    if not name.strip():
        raise ModelValidationError(f"focus area {index} has an empty name")
    capabilities = tuple(
        _parse_capability(entry, fa_index=index, position=i + 1, max_level=max_level)
        for i, entry in enumerate(_require(data, "capabilities", list))
    )
    if not capabilities:
        raise ModelValidationError(f"focus area {index} has no capabilities")
    extra = {k: v for k, v in data.items() if k not in {"index", "name", "capabilities"}}
    return FocusArea(index=index, name=name, capabilities=capabilities, extra=extra)


def _parse_capability(data: Any, *, fa_index: int, position: int, max_level: int) -> Capability:
    if not isinstance(data, dict):
        raise ModelValidationError(f"capability #{position} in focus area {fa_index} must be an object")
    index = _require(data, "index", int)
    if index != position:
        raise ModelValidationError(
            f"capability indices must be consecutive from 1 within focus area {fa_index}: "
            f"found {index} at position {position}"
        )
    name = _require(data, "name", str)
    practices = tuple(
        _parse_practice(entry, fa_index=fa_index, cap_index=index, max_level=max_level)
        for entry in _require(data, "practices", list)
    )
    if not practices:
        raise ModelValidationError(f"capability {fa_index}.{index} has no practices")
    extra = {k: v for k, v in data.items() if k not in {"index", "name", "practices"}}
    return Capability(index=index, name=name, practices=practices, extra=extra)


def _parse_practice(data: Any, *, fa_index: int, cap_index: int, max_level: int) -> Practice:
    if not isinstance(data, dict):
        raise ModelValidationError(f"practice in capability {fa_index}.{cap_index} must be an object")
    code_text = _require(data, "code", str)
    try:
        code = PracticeCode.parse(code_text)
    except ValueError as exc:
        raise ModelValidationError(str(exc), codes=(code_text,)) from None
    if code.focus_area != fa_index or code.capability != cap_index:
        raise ModelValidationError(
            f"practice code {code} does not match its position in capability {fa_index}.{cap_index}",
            codes=(str(code),),
        )
    if not 1 <= code.level <= max_level:
        raise ModelValidationError(
            f"practice {code} level out of range 1..{max_level}", codes=(str(code),)
        )
    name = _require(data, "name", str)
    description = data.get("description", "")
    criteria = tuple(_parse_criterion(item, code=code) for item in data.get("criteria", []))
    resources = _string_list(data.get("resources", []), f"practice {code} resources")
    references = _string_list(data.get("references", []), f"practice {code} references")
    extra = {
        k: v
        for k, v in data.items()
        if k not in {"code", "name", "description", "criteria", "resources", "references"}
    }
    return Practice(
        code=code,
        name=name,
        description=description,
        criteria=criteria,
        resources=resources,
        references=references,
        extra=extra,
    )


def _parse_criterion(data: Any, *, code: PracticeCode) -> CriterionItem:
    if not isinstance(data, dict):
        raise ModelValidationError(f"criterion of practice {code} must be an object", codes=(str(code),))
    priority_text = data.get("priority")
    try:
        priority = CriterionPriority(priority_text)
    except ValueError:
        raise ModelValidationError(
            f"criterion priority of practice {code} must be one of M/S/C, got {priority_text!r}",
            codes=(str(code),),
        ) from None
    text = data.get("text", "")
    if not isinstance(text, str):
        raise ModelValidationError(f"criterion text of practice {code} must be a string", codes=(str(code),))
    return CriterionItem(priority=priority, text=text)


def _string_list(value: Any, label: str) -> tuple[str, ...]:
    if not isinstance(value, list) or not all(isinstance(item, str) for item in value):
        raise ModelValidationError(f"{label} must be a list of strings")
    return tuple(value)


def _parse_dependency(data: Any) -> DependencyEdge:
    if not isinstance(data, dict):
        raise ModelValidationError("dependency entries must be objects")
    try:
        prerequisite = PracticeCode.parse(_require(data, "prerequisite", str))
        dependent = PracticeCode.parse(_require(data, "dependent", str))
    except ValueError as exc:
        raise ModelValidationError(str(exc)) from None
    return DependencyEdge(prerequisite=prerequisite, dependent=dependent)


def _validate_model(model: MaturityModel) -> None:
    seen: set[PracticeCode] = set()
    for fa in model.focus_areas:
        for cap in fa.capabilities:
            levels_seen: set[int] = set()
            for practice in cap.practices:
                if practice.code in seen:
                    raise ModelValidationError(
                        f"duplicate practice code: {practice.code}", codes=(str(practice.code),)
                    )
                seen.add(practice.code)
                if practice.code.level in levels_seen:
                    raise ModelValidationError(
                        f"capability {fa.index}.{cap.index} has more than one practice at level "
                        f"{practice.code.level}",
                        codes=(str(practice.code),),
                    )
                levels_seen.add(practice.code.level)

    for edge in model.dependencies:
        for endpoint in (edge.prerequisite, edge.dependent):
            if endpoint not in seen:
                raise ModelValidationError(
                    f"dependency endpoint does not resolve: {endpoint}", codes=(str(endpoint),)
                )
        if edge.prerequisite == edge.dependent:
            raise ModelValidationError(
                f"dependency may not point at itself: {edge.prerequisite}",
                codes=(str(edge.prerequisite),),
            )
        if edge.prerequisite.level > edge.dependent.level:
            raise ModelValidationError(
                f"dependency prerequisite {edge.prerequisite} sits above its dependent "
                f"{edge.dependent} (levels {edge.prerequisite.level} > {edge.dependent.level})",
                codes=(str(edge.prerequisite), str(edge.dependent)),
            )
    _reject_cycles(model.dependencies)


def _reject_cycles(edges: tuple[DependencyEdge, ...]) -> None:
    adjacency: dict[PracticeCode, list[PracticeCode]] = {}
    for edge in edges:
        adjacency.setdefault(edge.prerequisite, []).append(edge.dependent)

    WHITE, GREY, BLACK = 0, 1, 2
    colors: dict[PracticeCode, int] = {}

    def visit(node: PracticeCode, trail: list[PracticeCode]) -> None:
        colors[node] = GREY
        trail.append(node)
        for succ in adjacency.get(node, ()):
            state = colors.get(succ, WHITE)
            if state == GREY:
                cycle = trail[trail.index(succ):] + [succ]
                raise ModelValidationError(
                    "dependency cycle: " + " -> ".join(str(c) for c in cycle),
                    codes=tuple(str(c) for c in cycle),
                )
            if state == WHITE:
                visit(succ, trail)
        trail.pop()
        colors[node] = BLACK

    for node in adjacency:
        if colors.get(node, WHITE) == WHITE:
            visit(node, [])


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def model_to_dict(model: MaturityModel) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "metadata": {
            "model_name": model.metadata.model_name,
            "version": model.metadata.version,
            "source": model.metadata.source,
            **model.metadata.extra,
        },
        "max_level": model.max_level,
        "focus_areas": [_focus_area_to_dict(fa) for fa in model.focus_areas],
        "dependencies": [
            {"prerequisite": str(e.prerequisite), "dependent": str(e.dependent)}
            for e in model.dependencies
        ],
    }
    doc.update(model.extra)
    return doc


def _focus_area_to_dict(fa: FocusArea) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "index": fa.index,
        "name": fa.name,
        "capabilities": [_capability_to_dict(cap) for cap in fa.capabilities],
    }
    doc.update(fa.extra)
    return doc


def _capability_to_dict(cap: Capability) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "index": cap.index,
        "name": cap.name,
        "practices": [_practice_to_dict(p) for p in cap.practices],
    }
    doc.update(cap.extra)
    return doc


def _practice_to_dict(practice: Practice) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "code": str(practice.code),
        "name": practice.name,
        "description": practice.description,
        "criteria": [{"priority": c.priority.value, "text": c.text} for c in practice.criteria],
        "resources": list(practice.resources),
        "references": list(practice.references),
    }
    doc.update(practice.extra)
    return doc


def serialize_model(model: MaturityModel) -> str:
    return canonical_dumps(model_to_dict(model))


# ---------------------------------------------------------------------------
# Bundled model
# ---------------------------------------------------------------------------


@lru_cache(maxsize=1)
def bundled_rsmm() -> MaturityModel:
    """The RSMM v1.0 grid shipped with the package.

    Practice cells whose full text is only available in the external RSMM
    dataset carry stable placeholder names; the file format accepts the real
    dataset as a drop-in replacement.
    """
    return parse_model(bundled_rsmm_text())


def bundled_rsmm_text() -> str:
    return resources.files("rsmm.data").joinpath(BUNDLED_MODEL_RESOURCE).read_text("utf-8")
