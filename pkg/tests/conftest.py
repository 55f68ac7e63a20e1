from __future__ import annotations

import json
from pathlib import Path

import pytest

from rsmm.answers import apply_answers, bundled_answers_text, parse_answers
from rsmm.assessment import Assessment, ProjectInfo, new_assessment
from rsmm.model import MaturityModel, bundled_rsmm, parse_model
from rsmm.timestamps import parse_rfc3339

FIXED_NOW = parse_rfc3339("2025-06-15T12:00:00Z")
REPLAY_DIR = Path(__file__).parent / "data" / "replay"


@pytest.fixture(scope="session")
def model() -> MaturityModel:
    return bundled_rsmm()


def assessment_from_bundled_answers(
    model: MaturityModel, fixture_name: str, assessment_id: str, project_name: str
) -> Assessment:
    assessment = new_assessment(
        model,
        ProjectInfo(name=project_name),
        assessment_id=assessment_id,
        now=FIXED_NOW,
    )
    answers = parse_answers(bundled_answers_text(fixture_name))
    return apply_answers(model, assessment, answers, now=FIXED_NOW)


@pytest.fixture(scope="session")
def ggir(model: MaturityModel) -> Assessment:
    return assessment_from_bundled_answers(model, "ggir", "ggir", "GGIR")


@pytest.fixture(scope="session")
def esmvaltool(model: MaturityModel) -> Assessment:
    return assessment_from_bundled_answers(model, "esmvaltool", "esmvaltool", "ESMValTool")


@pytest.fixture(scope="session")
def fully_implemented(model: MaturityModel) -> Assessment:
    from rsmm.assessment import (
        EvidenceConfidence,
        EvidenceRecord,
        EvidenceSource,
        PracticeState,
        set_status,
    )

    assessment = new_assessment(
        model, ProjectInfo(name="complete"), assessment_id="complete", now=FIXED_NOW
    )
    record = EvidenceRecord(
        source=EvidenceSource.MANUAL,
        confidence=EvidenceConfidence.CERTAIN,
        note="fixture",
        observed_at=FIXED_NOW,
    )
    for code in model.codes():
        assessment = set_status(assessment, code, PracticeState.IMPLEMENTED, record, now=FIXED_NOW)
    return assessment


README_FULL = """# Rocket

[![DOI](https://zenodo.org/badge/12345.svg)](https://doi.org/10.5281/zenodo.12345)

A toy research code used as a probe fixture.

## Usage

Run `rocket simulate` on your input files.

Listed in the Research Software Directory.
"""

README_BARE = """# Rocket

A toy research code without badges or usage docs.
"""

FIXTURE_FILES = {
    "license": ("LICENSE", "Apache License 2.0\n"),
    "citation": ("CITATION.cff", "cff-version: 1.2.0\ntitle: Rocket\n"),
    "codemeta": ("codemeta.json", '{"name": "rocket"}\n'),
    "coc": ("CODE_OF_CONDUCT.md", "# Code of Conduct\nBe kind.\n"),
    "contributing": ("CONTRIBUTING.md", "# Contributing\nSend patches.\n"),
    "ci": (".github/workflows/ci.yml", "on: push\njobs: {}\n"),
    "tests": ("tests/test_core.py", "def test_truth():\n    assert True\n"),
    "changelog": ("CHANGELOG.md", "# 1.0.0\nInitial release.\n"),
    "readme_full": ("README.md", README_FULL),
    "readme_bare": ("README.md", README_BARE),
}

ALL_LOCAL_FEATURES = (
    "license",
    "citation",
    "codemeta",
    "coc",
    "contributing",
    "ci",
    "tests",
    "changelog",
    "readme_full",
)


def make_repo(root: Path, features: tuple[str, ...]) -> Path:
    repo = root / "repo"
    repo.mkdir(parents=True, exist_ok=True)
    (repo / "src").mkdir(exist_ok=True)
    (repo / "src" / "core.py").write_text("VERSION = '1.0'\n", encoding="utf-8")
    for feature in features:
        rel, content = FIXTURE_FILES[feature]
        target = repo / rel
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(content, encoding="utf-8")
    return repo


def replay_fixture_path(name: str) -> Path:
    return REPLAY_DIR / f"{name}.json"


MINIMAL_MODEL = {
    "metadata": {"model_name": "mini", "version": "1"},
    "max_level": 10,
    "focus_areas": [
        {
            "index": 1,
            "name": "Only area",
            "capabilities": [
                {
                    "index": 1,
                    "name": "Only capability",
                    "practices": [
                        {"code": "1.1.1", "name": "First practice"},
                    ],
                }
            ],
        }
    ],
    "dependencies": [],
}


def minimal_model_text(**overrides) -> str:
    doc = json.loads(json.dumps(MINIMAL_MODEL))
    doc.update(overrides)
    return json.dumps(doc)


DEPENDENCY_MODEL = {
    "metadata": {"model_name": "dep", "version": "1"},
    "max_level": 10,
    "focus_areas": [
        {
            "index": 1,
            "name": "Area",
            "capabilities": [
                {
                    "index": 1,
                    "name": "Cap",
                    "practices": [
                        {"code": "1.1.2", "name": "A"},
                        {"code": "1.1.5", "name": "B"},
                    ],
                }
            ],
        }
    ],
    "dependencies": [{"prerequisite": "1.1.2", "dependent": "1.1.5"}],
}


@pytest.fixture()
def dependency_model() -> MaturityModel:
    return parse_model(json.dumps(DEPENDENCY_MODEL))
