from __future__ import annotations

import json

import pytest
from hypothesis import given, strategies as st

from rsmm.errors import ModelSyntaxError, ModelValidationError, UnknownPracticeError
from rsmm.model import (
    MaturityModel,
    PracticeCode,
    bundled_rsmm,
    model_to_dict,
    parse_model,
    serialize_model,
)

from conftest import DEPENDENCY_MODEL, MINIMAL_MODEL, minimal_model_text

RSMM_GRID = {
    "1.1": [2, 3, 7, 8, 10],
    "1.2": [1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
    "1.3": [3, 7, 8, 10],
    "2.1": [3, 4, 7, 9, 10],
    "2.2": [2, 4, 7, 8, 9, 10],
    "2.3": [1, 3, 4, 5, 6, 7, 10],
    "2.4": [4, 5, 6, 7],
    "3.1": [4, 7],
    "3.2": [3, 4, 5, 6, 7, 9, 10],
    "3.3": [2, 6, 8, 9],
    "3.4": [1, 3, 8],
    "4.1": [2, 3, 6],
    "4.2": [2, 3, 4, 6, 8],
    "4.3": [2, 4, 9],
    "4.4": [2, 4, 5, 7],
    "4.5": [5, 9, 10],
    "4.6": [6, 8, 9, 10],
}


class TestPracticeCode:
    def test_parse_and_render(self):
        code = PracticeCode.parse("2.3.5")
        assert (code.focus_area, code.capability, code.level) == (2, 3, 5)
        assert str(code) == "2.3.5"

    @given(st.integers(1, 40), st.integers(1, 40), st.integers(1, 40))
    def test_round_trip(self, f, c, l):
        code = PracticeCode(f, c, l)
        assert PracticeCode.parse(str(code)) == code

    @pytest.mark.parametrize("text", ["", "1.2", "1.2.3.4", "a.b.c", "0.1.1", "1.02.3", "-1.2.3"])
    def test_rejects_malformed(self, text):
        with pytest.raises(ValueError):
            PracticeCode.parse(text)

    def test_ordering_is_grid_order(self):
        codes = [PracticeCode.parse(t) for t in ("2.1.1", "1.2.9", "1.2.10", "1.10.1")]
        assert [str(c) for c in sorted(codes)] == ["1.2.9", "1.2.10", "1.10.1", "2.1.1"]


class TestParseModel:
    def test_minimal_model(self):
        model = parse_model(minimal_model_text())
        assert model.practice_count == 1
        assert model.capability_count == 1
        assert str(next(model.codes())) == "1.1.1"

    def test_syntax_error_reports_position(self):
        with pytest.raises(ModelSyntaxError) as excinfo:
            parse_model("{\n  broken")
        assert "line" in str(excinfo.value)
        assert excinfo.value.line == 2

    def test_duplicate_code_rejected(self):
        doc = json.loads(minimal_model_text())
        practices = doc["focus_areas"][0]["capabilities"][0]["practices"]
        practices.append(dict(practices[0]))
        with pytest.raises(ModelValidationError) as excinfo:
            parse_model(json.dumps(doc))
        assert "1.1.1" in str(excinfo.value)

    def test_level_out_of_range_rejected(self):
        doc = json.loads(minimal_model_text(max_level=3))
        doc["focus_areas"][0]["capabilities"][0]["practices"][0]["code"] = "1.1.4"
        doc["focus_areas"][0]["capabilities"][0]["practices"][0]["name"] = "too high"
        with pytest.raises(ModelValidationError) as excinfo:
            parse_model(json.dumps(doc))
        assert "1.1.4" in str(excinfo.value)

    def test_level_inverted_dependency_names_both_codes(self):
        doc = json.loads(json.dumps(DEPENDENCY_MODEL))
        doc["focus_areas"][0]["capabilities"][0]["practices"] = [
            {"code": "1.1.4", "name": "low"},
            {"code": "1.1.6", "name": "high"},
        ]
        doc["dependencies"] = [{"prerequisite": "1.1.6", "dependent": "1.1.4"}]
        with pytest.raises(ModelValidationError) as excinfo:
            parse_model(json.dumps(doc))
        message = str(excinfo.value)
        assert "1.1.6" in message and "1.1.4" in message

    def test_self_dependency_rejected(self):
        doc = json.loads(json.dumps(DEPENDENCY_MODEL))
        doc["dependencies"] = [{"prerequisite": "1.1.2", "dependent": "1.1.2"}]
        with pytest.raises(ModelValidationError):
            parse_model(json.dumps(doc))

    def test_dependency_cycle_rejected(self):
        # a cycle needs same-level practices in different capabilities, since
        # edges may never descend a level
        doc = json.loads(json.dumps(DEPENDENCY_MODEL))
        doc["focus_areas"][0]["capabilities"] = [
            {"index": 1, "name": "a", "practices": [{"code": "1.1.4", "name": "a4"}]},
            {"index": 2, "name": "b", "practices": [{"code": "1.2.4", "name": "b4"}]},
        ]
        doc["dependencies"] = [
            {"prerequisite": "1.1.4", "dependent": "1.2.4"},
            {"prerequisite": "1.2.4", "dependent": "1.1.4"},
        ]
        with pytest.raises(ModelValidationError) as excinfo:
            parse_model(json.dumps(doc))
        assert "cycle" in str(excinfo.value)

    def test_mispositioned_code_rejected(self):
        doc = json.loads(minimal_model_text())
        doc["focus_areas"][0]["capabilities"][0]["practices"][0]["code"] = "2.1.1"
        with pytest.raises(ModelValidationError) as excinfo:
            parse_model(json.dumps(doc))
        assert "2.1.1" in str(excinfo.value)

    def test_nonconsecutive_focus_area_indices_rejected(self):
        doc = json.loads(minimal_model_text())
        doc["focus_areas"][0]["index"] = 2
        with pytest.raises(ModelValidationError):
            parse_model(json.dumps(doc))

    def test_wont_priority_rejected(self):
        doc = json.loads(minimal_model_text())
        doc["focus_areas"][0]["capabilities"][0]["practices"][0]["criteria"] = [
            {"priority": "W", "text": "never"}
        ]
        with pytest.raises(ModelValidationError):
            parse_model(json.dumps(doc))


class TestLookup:
    def test_known_code(self, model: MaturityModel):
        practice = model.lookup(PracticeCode.parse("2.3.5"))
        assert practice.name == "Publish in a research software directory"
        assert [c.priority.value for c in practice.criteria] == ["M", "M", "S", "C"]

    @pytest.mark.parametrize("code", ["1.1.1", "9.9.9"])
    def test_unknown_code_carries_code(self, model: MaturityModel, code):
        with pytest.raises(UnknownPracticeError) as excinfo:
            model.lookup(PracticeCode.parse(code))
        assert excinfo.value.code == code


class TestBundledModel:
    def test_shape(self, model: MaturityModel):
        assert len(model.focus_areas) == 4
        assert model.capability_count == 17
        assert model.practice_count == 79
        assert [fa.practice_count for fa in model.focus_areas] == [19, 22, 16, 22]
        assert [len(fa.capabilities) for fa in model.focus_areas] == [3, 4, 4, 6]

    def test_level_grid(self, model: MaturityModel):
        for fa in model.focus_areas:
            for cap in fa.capabilities:
                assert sorted(cap.levels) == RSMM_GRID[f"{fa.index}.{cap.index}"]

    def test_visibility_capability_levels(self, model: MaturityModel):
        cap = model.focus_areas[1].capabilities[2]
        assert cap.name == "Visibility"
        assert sorted(cap.levels) == [1, 3, 4, 5, 6, 7, 10]

    def test_capability_3_1_has_two_practices(self, model: MaturityModel):
        cap = model.focus_areas[2].capabilities[0]
        assert sorted(cap.levels) == [4, 7]

    def test_all_levels_in_range(self, model: MaturityModel):
        assert all(1 <= code.level <= 10 for code in model.codes())

    def test_practice_count_sums_match(self, model: MaturityModel):
        total = sum(len(cap.practices) for _, cap in model.capability_pairs())
        assert total == model.practice_count

    def test_dependency_endpoints_resolve(self, model: MaturityModel):
        for edge in model.dependencies:
            model.lookup(edge.prerequisite)
            model.lookup(edge.dependent)

    def test_named_practice_has_criteria_placeholders_may_not(self, model: MaturityModel):
        for practice in model.practices():
            if not practice.extra.get("placeholder"):
                assert practice.criteria, f"{practice.code} is named but has no criteria"


class TestRoundTrip:
    def test_bundled_round_trip_identity(self, model: MaturityModel):
        text = serialize_model(model)
        reparsed = parse_model(text)
        assert reparsed == model
        assert serialize_model(reparsed) == text

    def test_unknown_fields_preserved(self):
        doc = json.loads(minimal_model_text())
        doc["x_vendor"] = {"anything": [1, 2, 3]}
        doc["focus_areas"][0]["capabilities"][0]["practices"][0]["x_note"] = "kept"
        model = parse_model(json.dumps(doc))
        out = model_to_dict(model)
        assert out["x_vendor"] == {"anything": [1, 2, 3]}
        assert out["focus_areas"][0]["capabilities"][0]["practices"][0]["x_note"] == "kept"

    def test_minimal_round_trip(self):
        model = parse_model(minimal_model_text())
        assert parse_model(serialize_model(model)) == model
