from __future__ import annotations

import json

import pytest

from rsmm.assessment import PracticeState, ProjectInfo, new_assessment
from rsmm.errors import UnknownPracticeError
from rsmm.model import PracticeCode, parse_model
from rsmm.scoring import (
    achieved_level,
    gap_analysis,
    profile,
    profile_from_states,
    profile_to_dict,
    what_if,
)

from conftest import FIXED_NOW, minimal_model_text
from oracle import oracle_achieved_level, oracle_vector

C = PracticeCode.parse


def states_of(assessment):
    return assessment.states()


class TestAchievedLevel:
    def test_ggir_capability_1_2_blocks_at_5(self, model, ggir):
        cap = model.focus_areas[0].capabilities[1]
        level, blocking = achieved_level(cap, states_of(ggir), model.max_level)
        assert level == 4
        assert str(blocking) == "1.2.5"

    def test_ggir_capability_3_1_vacuous_levels(self, model, ggir):
        cap = model.focus_areas[2].capabilities[0]  # practices at 4 and 7
        level, blocking = achieved_level(cap, states_of(ggir), model.max_level)
        assert level == 6
        assert str(blocking) == "3.1.7"

    def test_all_implemented_reaches_max(self, model, ggir):
        cap = model.focus_areas[1].capabilities[2]  # GGIR Visibility: all ticked
        level, blocking = achieved_level(cap, states_of(ggir), model.max_level)
        assert level == model.max_level
        assert blocking is None

    def test_matches_oracle_on_both_fixtures(self, model, ggir, esmvaltool):
        for assessment in (ggir, esmvaltool):
            states = states_of(assessment)
            for _, cap in model.capability_pairs():
                level, _ = achieved_level(cap, states, model.max_level)
                assert level == oracle_achieved_level(cap, states, model.max_level)


class TestProfile:
    def test_ggir_vector(self, model, ggir):
        assert profile(model, ggir).vector_text == "4-3-6-7"

    def test_esmvaltool_vector(self, model, esmvaltool):
        assert profile(model, esmvaltool).vector_text == "5-4-8-8"

    def test_fresh_assessment_vector(self, model):
        a = new_assessment(model, ProjectInfo(name="fresh"), now=FIXED_NOW)
        result = profile(model, a)
        assert result.vector_text == "0-0-0-1"
        assert oracle_vector(model, a.states()) == [0, 0, 0, 1]

    def test_min_rule_exact(self, model, ggir):
        result = profile(model, ggir)
        for fa in model.focus_areas:
            caps = [s.achieved_level for s in result.capability_scores if s.focus_area == fa.index]
            assert result.focus_area_levels[fa.index - 1] == min(caps)

    def test_deterministic(self, model, ggir):
        assert profile(model, ggir) == profile(model, ggir)

    def test_blocking_code_is_minimum_gap(self, model, ggir):
        result = profile(model, ggir)
        states = states_of(ggir)
        for score in result.capability_scores:
            if score.blocking_code is None:
                assert score.achieved_level == model.max_level
            else:
                assert score.achieved_level == score.blocking_code.level - 1
                assert states[score.blocking_code] is not PracticeState.IMPLEMENTED


class TestGapAnalysis:
    def test_ggir_top_gaps(self, model, ggir):
        gaps = gap_analysis(model, ggir)
        top = [(str(g.code), g.current_level, g.unlocked_level) for g in gaps[:3]]
        assert top == [("1.2.5", 4, 5), ("2.2.4", 3, 4), ("4.2.8", 7, 8)]

    def test_flipping_2_2_4_unlocks_fa2_to_4(self, model, ggir):
        gaps = {str(g.code): g for g in gap_analysis(model, ggir)}
        item = gaps["2.2.4"]
        assert item.focus_area == 2
        assert item.current_level == 3
        assert item.unlocked_level == 4

    def test_every_blocking_practice_listed_once(self, model, ggir):
        gaps = gap_analysis(model, ggir)
        expected = {
            str(s.blocking_code)
            for s in profile(model, ggir).capability_scores
            if s.blocking_code is not None
        }
        assert {str(g.code) for g in gaps} == expected
        assert len(gaps) == len(expected)

    def test_all_implemented_has_no_gaps(self, model, fully_implemented):
        assert gap_analysis(model, fully_implemented) == []
        result = profile(model, fully_implemented)
        assert all(s.blocking_code is None for s in result.capability_scores)
        assert result.vector_text == "10-10-10-10"

    def test_ties_break_by_code(self, model, ggir):
        gaps = gap_analysis(model, ggir)
        for earlier, later in zip(gaps, gaps[1:]):
            assert (-earlier.lift, earlier.code) <= (-later.lift, later.code)

    def test_unlocked_never_below_current(self, model, ggir, esmvaltool):
        for assessment in (ggir, esmvaltool):
            for item in gap_analysis(model, assessment):
                assert item.unlocked_level >= item.current_level


class TestWhatIf:
    def test_two_flips_raise_fa1_to_7(self, model, ggir):
        result = what_if(
            model,
            ggir,
            {C("1.2.5"): PracticeState.IMPLEMENTED, C("1.2.6"): PracticeState.IMPLEMENTED},
        )
        assert result.before.vector_text == "4-3-6-7"
        assert result.after.vector_text == "7-3-6-7"

    def test_empty_flips_identity(self, model, ggir):
        result = what_if(model, ggir, {})
        assert result.before == result.after

    def test_downgrade_flip_drops_fa2_to_zero(self, model, ggir):
        result = what_if(model, ggir, {C("2.3.1"): PracticeState.NOT_IMPLEMENTED})
        assert result.after.vector_text == "4-0-6-7"

    def test_assessment_untouched(self, model, ggir):
        before = ggir.statuses[C("1.2.5")].state
        what_if(model, ggir, {C("1.2.5"): PracticeState.IMPLEMENTED})
        assert ggir.statuses[C("1.2.5")].state is before

    def test_unknown_code_rejected(self, model, ggir):
        with pytest.raises(UnknownPracticeError):
            what_if(model, ggir, {C("9.9.9"): PracticeState.IMPLEMENTED})


class TestSmallModels:
    def test_single_practice_model_scores(self):
        model = parse_model(minimal_model_text())
        a = new_assessment(model, ProjectInfo(name="tiny"), now=FIXED_NOW)
        assert profile(model, a).vector_text == "0"
        states = {C("1.1.1"): PracticeState.IMPLEMENTED}
        assert profile_from_states(model, states).vector_text == str(model.max_level)

    def test_profile_export_shape(self, model, ggir):
        doc = profile_to_dict(profile(model, ggir))
        assert doc["vector"] == [4, 3, 6, 7]
        assert doc["vector_text"] == "4-3-6-7"
        assert len(doc["capabilities"]) == 17
        assert doc["model_ref"] == {"name": "RSMM", "version": "1.0"}
        json.dumps(doc)  # JSON-serializable
