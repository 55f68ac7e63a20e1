from __future__ import annotations

import json
from datetime import timedelta

import pytest

from rsmm.assessment import (
    Assessment,
    ConsistencyFinding,
    EvidenceConfidence,
    EvidenceRecord,
    EvidenceSource,
    FindingKind,
    PracticeState,
    PracticeStatus,
    ProbeProposal,
    ProjectInfo,
    assessment_from_dict,
    assessment_to_dict,
    check_consistency,
    completeness,
    merge_probe_results,
    new_assessment,
    parse_assessment,
    serialize_assessment,
    set_status,
)
from rsmm.errors import AssessmentFormatError, EvidenceError, UnknownPracticeError
from rsmm.model import MaturityModel, PracticeCode

from conftest import FIXED_NOW

CODE_235 = PracticeCode.parse("2.3.5")


def manual(note: str = "seen it") -> EvidenceRecord:
    return EvidenceRecord(
        source=EvidenceSource.MANUAL,
        confidence=EvidenceConfidence.CERTAIN,
        note=note,
        observed_at=FIXED_NOW,
    )


def probe(note: str = "probe hit", locator: str = "README.md") -> EvidenceRecord:
    return EvidenceRecord(
        source=EvidenceSource.PROBE,
        confidence=EvidenceConfidence.HEURISTIC,
        note=note,
        observed_at=FIXED_NOW,
        locator=locator,
    )


class TestEvidenceInvariants:
    def test_manual_must_be_certain(self):
        with pytest.raises(EvidenceError):
            EvidenceRecord(
                source=EvidenceSource.MANUAL,
                confidence=EvidenceConfidence.HEURISTIC,
                note="",
                observed_at=FIXED_NOW,
            )

    def test_probe_needs_locator(self):
        with pytest.raises(EvidenceError):
            EvidenceRecord(
                source=EvidenceSource.PROBE,
                confidence=EvidenceConfidence.HEURISTIC,
                note="",
                observed_at=FIXED_NOW,
            )

    def test_determinate_status_needs_evidence(self):
        with pytest.raises(EvidenceError):
            PracticeStatus(state=PracticeState.IMPLEMENTED)

    def test_project_name_required(self):
        with pytest.raises(ValueError):
            ProjectInfo(name="   ")


class TestNewAssessment:
    def test_bundled_model_all_unknown(self, model: MaturityModel):
        a = new_assessment(model, ProjectInfo(name="GGIR"), now=FIXED_NOW)
        assert len(a.statuses) == 79
        assert all(s.state is PracticeState.UNKNOWN for s in a.statuses.values())
        assert all(not s.evidence for s in a.statuses.values())

    def test_completeness_starts_at_zero(self, model: MaturityModel):
        a = new_assessment(model, ProjectInfo(name="p"), now=FIXED_NOW)
        assert completeness(a) == 0.0


class TestSetStatus:
    def test_set_records_state_and_evidence(self, model: MaturityModel):
        a = new_assessment(model, ProjectInfo(name="p"), now=FIXED_NOW)
        a = set_status(a, CODE_235, PracticeState.IMPLEMENTED, manual(), now=FIXED_NOW)
        status = a.status(CODE_235)
        assert status.state is PracticeState.IMPLEMENTED
        assert len(status.evidence) == 1

    def test_second_set_appends_evidence(self, model: MaturityModel):
        a = new_assessment(model, ProjectInfo(name="p"), now=FIXED_NOW)
        a = set_status(a, CODE_235, PracticeState.NOT_IMPLEMENTED, manual("first"), now=FIXED_NOW)
        a = set_status(a, CODE_235, PracticeState.IMPLEMENTED, manual("second"), now=FIXED_NOW)
        status = a.status(CODE_235)
        assert status.state is PracticeState.IMPLEMENTED
        assert [e.note for e in status.evidence] == ["first", "second"]

    def test_unknown_code_rejected(self, model: MaturityModel):
        a = new_assessment(model, ProjectInfo(name="p"), now=FIXED_NOW)
        with pytest.raises(UnknownPracticeError) as excinfo:
            set_status(a, PracticeCode.parse("1.1.1"), PracticeState.IMPLEMENTED, manual())
        assert excinfo.value.code == "1.1.1"

    def test_determinate_without_evidence_rejected(self, model: MaturityModel):
        a = new_assessment(model, ProjectInfo(name="p"), now=FIXED_NOW)
        with pytest.raises(EvidenceError):
            set_status(a, CODE_235, PracticeState.IMPLEMENTED, None)

    def test_updated_at_monotonic(self, model: MaturityModel):
        a = new_assessment(model, ProjectInfo(name="p"), now=FIXED_NOW)
        later = FIXED_NOW + timedelta(hours=1)
        a = set_status(a, CODE_235, PracticeState.IMPLEMENTED, manual(), now=later)
        assert a.updated_at == later
        # an earlier clock never rewinds the timestamp
        earlier = FIXED_NOW - timedelta(hours=1)
        a = set_status(a, CODE_235, PracticeState.UNKNOWN, manual(), now=earlier)
        assert a.updated_at == later

    def test_completeness_non_decreasing_on_answering(self, model: MaturityModel):
        a = new_assessment(model, ProjectInfo(name="p"), now=FIXED_NOW)
        before = completeness(a)
        a = set_status(a, CODE_235, PracticeState.NOT_IMPLEMENTED, manual(), now=FIXED_NOW)
        assert completeness(a) >= before


class TestMergeProbes:
    def test_probe_fills_unknown(self, model: MaturityModel):
        a = new_assessment(model, ProjectInfo(name="p"), now=FIXED_NOW)
        a = merge_probe_results(
            a, [ProbeProposal(CODE_235, PracticeState.IMPLEMENTED, probe())], now=FIXED_NOW
        )
        status = a.status(CODE_235)
        assert status.state is PracticeState.IMPLEMENTED
        assert status.evidence[-1].confidence is EvidenceConfidence.HEURISTIC

    def test_manual_override_wins(self, model: MaturityModel):
        a = new_assessment(model, ProjectInfo(name="p"), now=FIXED_NOW)
        a = set_status(a, CODE_235, PracticeState.NOT_IMPLEMENTED, manual(), now=FIXED_NOW)
        a = merge_probe_results(
            a, [ProbeProposal(CODE_235, PracticeState.IMPLEMENTED, probe())], now=FIXED_NOW
        )
        status = a.status(CODE_235)
        assert status.state is PracticeState.NOT_IMPLEMENTED
        assert len(status.evidence) == 2  # probe recorded even though overridden

    def test_disagreeing_probes_flagged(self, model: MaturityModel):
        a = new_assessment(model, ProjectInfo(name="p"), now=FIXED_NOW)
        a = merge_probe_results(
            a,
            [
                ProbeProposal(CODE_235, PracticeState.IMPLEMENTED, probe("first")),
                ProbeProposal(CODE_235, PracticeState.NOT_IMPLEMENTED, probe("second")),
            ],
            now=FIXED_NOW,
        )
        status = a.status(CODE_235)
        assert status.state is PracticeState.NOT_IMPLEMENTED  # later probe stands
        assert [e.note for e in status.evidence] == ["first", "second"]
        assert status.review_flag

    def test_informational_proposal_keeps_state(self, model: MaturityModel):
        a = new_assessment(model, ProjectInfo(name="p"), now=FIXED_NOW)
        a = merge_probe_results(a, [ProbeProposal(CODE_235, None, probe("fyi"))], now=FIXED_NOW)
        status = a.status(CODE_235)
        assert status.state is PracticeState.UNKNOWN
        assert len(status.evidence) == 1


class TestConsistency:
    CODE_A = PracticeCode.parse("1.1.2")
    CODE_B = PracticeCode.parse("1.1.5")

    def _assessment(self, dependency_model, a_state, b_state) -> Assessment:
        a = new_assessment(dependency_model, ProjectInfo(name="p"), now=FIXED_NOW)
        if a_state is not PracticeState.UNKNOWN:
            a = set_status(a, self.CODE_A, a_state, manual(), now=FIXED_NOW)
        if b_state is not PracticeState.UNKNOWN:
            a = set_status(a, self.CODE_B, b_state, manual(), now=FIXED_NOW)
        return a

    def test_violation_when_prerequisite_missing(self, dependency_model):
        a = self._assessment(dependency_model, PracticeState.NOT_IMPLEMENTED, PracticeState.IMPLEMENTED)
        findings = check_consistency(dependency_model, a)
        assert len(findings) == 1
        finding = findings[0]
        assert finding.kind is FindingKind.DEPENDENCY_VIOLATION
        assert finding.codes == (self.CODE_A, self.CODE_B)

    def test_unknown_prerequisite_reported_separately(self, dependency_model):
        a = self._assessment(dependency_model, PracticeState.UNKNOWN, PracticeState.IMPLEMENTED)
        findings = check_consistency(dependency_model, a)
        assert [f.kind for f in findings] == [FindingKind.UNKNOWN_BLOCKING]

    def test_no_findings_when_both_implemented(self, dependency_model):
        a = self._assessment(dependency_model, PracticeState.IMPLEMENTED, PracticeState.IMPLEMENTED)
        assert check_consistency(dependency_model, a) == []

    def test_pure_function_of_inputs(self, dependency_model):
        a = self._assessment(dependency_model, PracticeState.NOT_IMPLEMENTED, PracticeState.IMPLEMENTED)
        assert check_consistency(dependency_model, a) == check_consistency(dependency_model, a)

    def test_ggir_fixture_has_no_findings(self, model, ggir):
        assert check_consistency(model, ggir) == []


class TestCompleteness:
    def test_ggir_fully_answered(self, ggir):
        answered = sum(
            1 for s in ggir.statuses.values() if s.state is not PracticeState.UNKNOWN
        )
        assert answered == 79
        assert completeness(ggir) == 1.0

    def test_all_answered_is_one(self, model):
        a = new_assessment(model, ProjectInfo(name="p"), now=FIXED_NOW)
        for code in model.codes():
            a = set_status(a, code, PracticeState.IMPLEMENTED, manual(), now=FIXED_NOW)
        assert completeness(a) == 1.0


class TestSerialization:
    def test_round_trip_identity(self, model, ggir):
        text = serialize_assessment(ggir)
        reparsed = parse_assessment(text, model)
        assert reparsed == ggir
        assert serialize_assessment(reparsed) == text

    def test_sparse_document_normalizes_to_unknown(self, model):
        doc = {
            "id": "sparse",
            "model_ref": {"name": "RSMM", "version": "1.0"},
            "project": {"name": "p"},
            "statuses": {},
        }
        a = assessment_from_dict(doc, model)
        assert len(a.statuses) == 79
        assert completeness(a) == 0.0

    def test_unknown_code_in_document_rejected(self, model):
        doc = {
            "id": "bad",
            "model_ref": {"name": "RSMM", "version": "1.0"},
            "project": {"name": "p"},
            "statuses": {"9.9.9": {"state": "implemented", "evidence": []}},
        }
        with pytest.raises(UnknownPracticeError) as excinfo:
            assessment_from_dict(doc, model)
        assert excinfo.value.code == "9.9.9"

    def test_malformed_document_rejected(self, model):
        with pytest.raises(AssessmentFormatError):
            parse_assessment("{not json", model)

    def test_statuses_keyed_and_sorted_by_code(self, ggir):
        doc = assessment_to_dict(ggir)
        keys = list(doc["statuses"])
        parsed = [PracticeCode.parse(k) for k in keys]
        assert parsed == sorted(parsed)
        assert len(keys) == 79

    def test_timestamps_rfc3339_utc(self, ggir):
        doc = assessment_to_dict(ggir)
        assert doc["created_at"].endswith("Z")
        assert doc["updated_at"].endswith("Z")
