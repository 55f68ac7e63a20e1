"""Render assessments and profiles as reports.

The matrix view mirrors the published evaluation grids: one row per
capability, one column per maturity level, with the achieved path marked up
to each capability's achieved level. Unknown practice cells and cells with no
practice are visually distinct ("·" vs blank in text; distinct styles in
HTML). The plain-text layout is ASCII-compatible apart from the ✓/✗ glyphs,
which an option can switch to Y/N.
"""

from __future__ import annotations

import html as html_escape
import json
from dataclasses import dataclass
from enum import Enum
from typing import Any

from .assessment import Assessment, PracticeState, assessment_to_dict
from .jsonio import canonical_dumps
from .model import Capability, FocusArea, MaturityModel
from .scoring import (
    GapItem,
    MaturityProfile,
    gap_analysis,
    gap_items_to_dicts,
    profile as compute_profile,
    profile_to_dict,
)


class ReportFormat(str, Enum):
    TEXT = "text"
    MARKDOWN = "markdown"
    HTML = "html"
    STRUCTURED = "structured"


@dataclass(frozen=True)
class ReportOptions:
    format: ReportFormat = ReportFormat.TEXT
    include_evidence: bool = False
    include_gaps: bool = False
    shade_achieved_path: bool = True
    ascii_glyphs: bool = False


def _glyphs(options: ReportOptions) -> dict[PracticeState, str]:
    if options.ascii_glyphs:
        return {
            PracticeState.IMPLEMENTED: "Y",
            PracticeState.NOT_IMPLEMENTED: "N",
            PracticeState.UNKNOWN: ".",
        }
    return {
        PracticeState.IMPLEMENTED: "✓",
        PracticeState.NOT_IMPLEMENTED: "✗",
        PracticeState.UNKNOWN: "·",
    }


def render_matrix(
    model: MaturityModel,
    assessment: Assessment,
    profile: MaturityProfile,
    options: ReportOptions = ReportOptions(),
) -> str:
    """Render the capability/level matrix plus the profile vector.

    The profile must have been computed from exactly this (model, assessment)
    pair; a mismatch is an error rather than a silently wrong report.
    """
    _check_profile(model, assessment, profile)
    if options.format is ReportFormat.STRUCTURED:
        return canonical_dumps(_matrix_document(model, assessment, profile))
    if options.format is ReportFormat.MARKDOWN:
        return _matrix_markdown(model, assessment, profile, options)
    if options.format is ReportFormat.HTML:
        return _matrix_html(model, assessment, profile, options)
    return _matrix_text(model, assessment, profile, options)


def _check_profile(model: MaturityModel, assessment: Assessment, profile: MaturityProfile) -> None:
    if profile.assessment_id != assessment.id or profile != compute_profile(model, assessment):
        raise ValueError("profile was not computed from this model and assessment")


def _matrix_text(
    model: MaturityModel,
    assessment: Assessment,
    profile: MaturityProfile,
    options: ReportOptions,
) -> str:
    glyphs = _glyphs(options)
    lines: list[str] = []
    lines.append(f"Project: {assessment.project.name}")
    lines.append(f"Model: {model.metadata.model_name} {model.metadata.version}")
    lines.append(f"Assessment: {assessment.id}")
    lines.append(f"Profile: {profile.vector_text}")
    lines.append("")

    name_width = max(
        (len(f"{fa.index}.{cap.index}  {cap.name}") for fa, cap in model.capability_pairs()),
        default=20,
    )
    header_cells = "".join(f"{level:^3}" for level in range(1, model.max_level + 1))
    for fa in model.focus_areas:
        maturity = profile.focus_area_levels[fa.index - 1]
        lines.append(f"Focus area {fa.index}: {fa.name} (maturity {maturity})")
        lines.append(f"  {'':<{name_width}} {header_cells} Achieved")
        for cap in fa.capabilities:
            score = profile.capability_score(fa.index, cap.index)
            label = f"{fa.index}.{cap.index}  {cap.name}"
            cells = "".join(
                _text_cell(cap, level, assessment, score.achieved_level, options, glyphs)
                for level in range(1, model.max_level + 1)
            )
            lines.append(f"  {label:<{name_width}} {cells}   {score.achieved_level}")
        lines.append("")

    lines.append(
        "cells: implemented / not implemented / unanswered (middle dot) ; "
        "blank = no practice at this level"
    )
    if options.shade_achieved_path:
        lines.append("[..] marks the achieved path of each capability")

    body = "\n".join(lines) + "\n"
    if options.include_gaps:
        body += "\n" + render_gap_report(model, gap_analysis(model, assessment), options)
    if options.include_evidence:
        body += "\n" + _evidence_text(assessment)
    return body


def _text_cell(
    cap: Capability,
    level: int,
    assessment: Assessment,
    achieved: int,
    options: ReportOptions,
    glyphs: dict[PracticeState, str],
) -> str:
    practice = cap.practice_at(level)
    glyph = " "
    if practice is not None:
        glyph = glyphs[assessment.statuses[practice.code].state]
    if options.shade_achieved_path and level <= achieved:
        return f"[{glyph}]"
    return f" {glyph} "


def _evidence_text(assessment: Assessment) -> str:
    lines = ["Evidence:"]
    for code in sorted(assessment.statuses):
        status = assessment.statuses[code]
        for record in status.evidence:
            locator = f" ({record.locator})" if record.locator else ""
            flag = " [review]" if status.review_flag else ""
            lines.append(
                f"  {code}: {record.source.value}/{record.confidence.value} - "
                f"{record.note}{locator}{flag}"
            )
    if len(lines) == 1:
        lines.append("  none recorded")
    return "\n".join(lines) + "\n"


def _matrix_markdown(
    model: MaturityModel,
    assessment: Assessment,
    profile: MaturityProfile,
    options: ReportOptions,
) -> str:
    glyphs = _glyphs(options)
    lines = [
        f"# Maturity assessment: {assessment.project.name}",
        "",
        f"Model: {model.metadata.model_name} {model.metadata.version}, "
        f"assessment `{assessment.id}`",
        "",
        f"**Profile: {profile.vector_text}**",
        "",
    ]
    header = "| Capability | " + " | ".join(str(l) for l in range(1, model.max_level + 1)) + " | Achieved |"
    rule = "|---" * (model.max_level + 2) + "|"
    lines.append(header)
    lines.append(rule)
    for fa in model.focus_areas:
        for cap in fa.capabilities:
            score = profile.capability_score(fa.index, cap.index)
            cells = []
            for level in range(1, model.max_level + 1):
                practice = cap.practice_at(level)
                if practice is None:
                    cells.append("")
                    continue
                glyph = glyphs[assessment.statuses[practice.code].state]
                if options.shade_achieved_path and level <= score.achieved_level:
                    glyph = f"**{glyph}**"
                cells.append(glyph)
            label = f"{fa.index}.{cap.index} {cap.name}"
            lines.append("| " + " | ".join([label, *cells, str(score.achieved_level)]) + " |")
    lines.append("")
    for fa in model.focus_areas:
        lines.append(f"- Focus area {fa.index} ({fa.name}): **{profile.focus_area_levels[fa.index - 1]}**")
    body = "\n".join(lines) + "\n"
    if options.include_gaps:
        body += "\n" + render_gap_report(model, gap_analysis(model, assessment), options)
    return body


_HTML_STYLE = """
body { font-family: system-ui, sans-serif; margin: 2rem; color: #1a202c; }
table { border-collapse: collapse; margin-top: 1rem; }
th, td { border: 1px solid #cbd5e0; padding: 0.3rem 0.6rem; text-align: center; }
td.name { text-align: left; white-space: nowrap; }
td.path { background: #e2e8f0; }
td.impl { color: #276749; font-weight: bold; }
td.notimpl { color: #c53030; font-weight: bold; }
td.unknown { color: #718096; }
.vector { font-size: 1.4rem; font-weight: bold; }
"""


def _matrix_html(
    model: MaturityModel,
    assessment: Assessment,
    profile: MaturityProfile,
    options: ReportOptions,
) -> str:
    glyphs = _glyphs(options)
    esc = html_escape.escape
    rows: list[str] = []
    for fa in model.focus_areas:
        maturity = profile.focus_area_levels[fa.index - 1]
        rows.append(
            f'<tr><th colspan="{model.max_level + 2}" style="text-align:left">'
            f"Focus area {fa.index}: {esc(fa.name)} (maturity {maturity})</th></tr>"
        )
        for cap in fa.capabilities:
            score = profile.capability_score(fa.index, cap.index)
            cells = [f'<td class="name">{fa.index}.{cap.index} {esc(cap.name)}</td>']
            for level in range(1, model.max_level + 1):
                practice = cap.practice_at(level)
                classes = []
                text = ""
                if options.shade_achieved_path and level <= score.achieved_level:
                    classes.append("path")
                if practice is not None:
                    state = assessment.statuses[practice.code].state
                    classes.append(
                        {
                            PracticeState.IMPLEMENTED: "impl",
                            PracticeState.NOT_IMPLEMENTED: "notimpl",
                            PracticeState.UNKNOWN: "unknown",
                        }[state]
                    )
                    text = glyphs[state]
                cells.append(f'<td class="{" ".join(classes)}">{text}</td>')
            cells.append(f"<td>{score.achieved_level}</td>")
            rows.append("<tr>" + "".join(cells) + "</tr>")

    header_cells = "".join(f"<th>{level}</th>" for level in range(1, model.max_level + 1))
    gaps_section = ""
    if options.include_gaps:
        gaps_section = _gap_fragment_html(model, gap_analysis(model, assessment))
    return (
        "<!doctype html>\n<html><head><meta charset=\"utf-8\">"
        f"<title>Maturity assessment: {esc(assessment.project.name)}</title>"
        f"<style>{_HTML_STYLE}</style></head><body>"
        f"<h1>Maturity assessment: {esc(assessment.project.name)}</h1>"
        f"<p>Model: {esc(model.metadata.model_name)} {esc(model.metadata.version)}, "
        f"assessment {esc(assessment.id)}</p>"
        f'<p class="vector">Profile: {profile.vector_text}</p>'
        f"<table><tr><th>Capability</th>{header_cells}<th>Achieved</th></tr>"
        + "".join(rows)
        + "</table>"
        + gaps_section
        + "</body></html>\n"
    )


def _matrix_document(
    model: MaturityModel,
    assessment: Assessment,
    profile: MaturityProfile,
) -> dict[str, Any]:
    capabilities = []
    for fa in model.focus_areas:
        for cap in fa.capabilities:
            score = profile.capability_score(fa.index, cap.index)
            cells = []
            for level in range(1, model.max_level + 1):
                practice = cap.practice_at(level)
                cells.append(
                    {
                        "level": level,
                        "practice": str(practice.code) if practice else None,
                        "state": (
                            assessment.statuses[practice.code].state.value if practice else None
                        ),
                    }
                )
            capabilities.append(
                {
                    "code": score.key,
                    "name": cap.name,
                    "achieved": score.achieved_level,
                    "blocking_code": str(score.blocking_code) if score.blocking_code else None,
                    "cells": cells,
                }
            )
    return {
        "project": assessment.project.name,
        "model_ref": {"name": model.metadata.model_name, "version": model.metadata.version},
        "assessment_id": assessment.id,
        "vector": list(profile.focus_area_levels),
        "vector_text": profile.vector_text,
        "capabilities": capabilities,
    }


# ---------------------------------------------------------------------------
# Gap report
# ---------------------------------------------------------------------------


def render_gap_report(
    model: MaturityModel,
    gaps: list[GapItem],
    options: ReportOptions = ReportOptions(),
) -> str:
    if options.format is ReportFormat.STRUCTURED:
        return canonical_dumps({"gaps": gap_items_to_dicts(gaps)})
    if options.format is ReportFormat.HTML:
        return (
            "<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>Gap report</title>"
            f"<style>{_HTML_STYLE}</style></head><body>"
            + _gap_fragment_html(model, gaps)
            + "</body></html>\n"
        )
    if options.format is ReportFormat.MARKDOWN:
        if not gaps:
            return "## Gaps\n\nNo gaps: every practice is implemented.\n"
        lines = ["## Gaps", "", "| # | Practice | Code | Focus area | Unlocks |", "|---|---|---|---|---|"]
        for i, item in enumerate(gaps, start=1):
            practice = model.lookup(item.code)
            lines.append(
                f"| {i} | {practice.name} | {item.code} | {item.focus_area} | "
                f"{item.current_level} → {item.unlocked_level} |"
            )
        return "\n".join(lines) + "\n"

    if not gaps:
        return "Gaps: none. Every practice is implemented.\n"
    lines = ["Gaps (highest lift first):"]
    for i, item in enumerate(gaps, start=1):
        practice = model.lookup(item.code)
        lines.append(
            f"  {i}. {item.code}  {practice.name}  "
            f"(focus area {item.focus_area}: {item.current_level} -> {item.unlocked_level})"
        )
    return "\n".join(lines) + "\n"


def _gap_fragment_html(model: MaturityModel, gaps: list[GapItem]) -> str:
    esc = html_escape.escape
    if not gaps:
        return "<h2>Gaps</h2><p>No gaps: every practice is implemented.</p>"
    items = "".join(
        f"<li><code>{item.code}</code> {esc(model.lookup(item.code).name)}: "
        f"focus area {item.focus_area}: {item.current_level} → {item.unlocked_level}</li>"
        for item in gaps
    )
    return f"<h2>Gaps</h2><ol>{items}</ol>"


# ---------------------------------------------------------------------------
# Structured export
# ---------------------------------------------------------------------------


def export_structured(
    model: MaturityModel,
    assessment: Assessment,
    profile: MaturityProfile,
) -> str:
    """Machine-readable bundle that re-parses and re-scores to the same profile."""
    _check_profile(model, assessment, profile)
    return canonical_dumps(
        {
            "model_ref": {"name": model.metadata.model_name, "version": model.metadata.version},
            "assessment": assessment_to_dict(assessment),
            "profile": profile_to_dict(profile),
        }
    )
