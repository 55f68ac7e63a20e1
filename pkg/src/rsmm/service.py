"""HTTP API over the assessment engine.

Versioned JSON endpoints under /api/v1: model document, assessment CRUD with
ETag/If-Match optimistic concurrency, pure score and what-if endpoints, and a
repository scan endpoint. Error bodies are {"status", "code", "message"}.

The app is built by create_app so tests can inject a store rooted in a temp
directory and a replay transport instead of the live hosting platform.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable, Sequence

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .assessment import (
    PracticeState,
    assessment_from_dict,
    assessment_to_dict,
    merge_probe_results,
)
from .collectors import (
    ProbeRule,
    Transport,
    content_globs,
    default_rules,
    run_probes,
    snapshot_local,
    snapshot_remote,
    to_probe_evidence,
)
from .collectors.probes import ProbeOutcome
from .errors import (
    AssessmentFormatError,
    AssessmentNotFoundError,
    AuthError,
    NetworkError,
    RateLimitError,
    RemoteError,
    RepositoryNotFoundError,
    StaleVersionError,
    UnknownPracticeError,
    UpstreamError,
)
from .jsonio import canonical_dumps
from .model import MaturityModel, PracticeCode, serialize_model
from .scoring import profile, profile_to_dict, what_if
from .store import AssessmentStore

DEFAULT_CORS_ORIGINS = ("http://localhost:5173", "http://127.0.0.1:5173")
MEDIA_TYPE = "application/json"


def _error(status: int, code: str, message: str) -> JSONResponse:
    assert status in {400, 404, 409, 422, 429, 500, 502}
    return JSONResponse(
        status_code=status,
        content={"status": status, "code": code, "message": message},
    )


def _etag_header(etag: str) -> dict[str, str]:
    return {"ETag": f'"{etag}"'}


def _parse_if_match(value: str | None) -> str | None:
    if value is None:
        return None
    token = value.strip()
    if token.startswith("W/"):
        token = token[2:].strip()
    return token.strip('"')


def create_app(
    model: MaturityModel,
    store: AssessmentStore,
    *,
    rules: Sequence[ProbeRule] | None = None,
    transport: Transport | None = None,
    host_token: str | None = None,
    auth_token: str | None = None,
    cors_origins: Iterable[str] = DEFAULT_CORS_ORIGINS,
) -> FastAPI:
    app = FastAPI(title="rsmm service", docs_url=None, redoc_url=None, openapi_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )
    probe_rules = tuple(rules if rules is not None else default_rules(model))

    @app.middleware("http")
    async def _require_token(request: Request, call_next):  # type: ignore[no-untyped-def]
        # CORS preflights carry no Authorization header and must pass through
        if auth_token and request.method != "OPTIONS" and request.url.path.startswith("/api/"):
            supplied = request.headers.get("Authorization", "")
            if supplied != f"Bearer {auth_token}":
                return _error(400, "auth_failed", "missing or invalid bearer token")
        return await call_next(request)

    @app.api_route("/api/v1/model", methods=["GET", "HEAD"])
    def get_model(request: Request) -> Response:
        content = serialize_model(model)
        if request.method == "HEAD":
            return Response(
                content=b"",
                media_type=MEDIA_TYPE,
                headers={"Content-Length": str(len(content.encode("utf-8")))},
            )
        return Response(content=content, media_type=MEDIA_TYPE)

    @app.get("/api/v1/assessments")
    def list_assessments() -> Response:
        entries = []
        for assessment_id in store.list_ids():
            try:
                assessment, etag = store.load(assessment_id)
            except (AssessmentNotFoundError, AssessmentFormatError, UnknownPracticeError):
                continue
            entries.append(
                {
                    "id": assessment.id,
                    "project": assessment.project.name,
                    "updated_at": assessment_to_dict(assessment)["updated_at"],
                    "etag": etag,
                }
            )
        return Response(content=canonical_dumps({"assessments": entries}), media_type=MEDIA_TYPE)

    @app.get("/api/v1/assessments/{assessment_id}")
    def get_assessment(assessment_id: str) -> Response:
        try:
            content, etag = store.read_bytes(assessment_id)
        except AssessmentNotFoundError:
            return _error(404, "assessment_not_found", f"no assessment {assessment_id}")
        return Response(content=content, media_type=MEDIA_TYPE, headers=_etag_header(etag))

    @app.put("/api/v1/assessments/{assessment_id}")
    async def put_assessment(assessment_id: str, request: Request) -> Response:
        try:
            body = json.loads(await request.body())
        except json.JSONDecodeError as exc:
            return _error(400, "invalid_json", str(exc))
        try:
            assessment = assessment_from_dict(body, model)
        except UnknownPracticeError as exc:
            return _error(422, "unknown_practice", str(exc))
        except AssessmentFormatError as exc:
            return _error(422, "invalid_assessment", str(exc))
        if assessment.id != assessment_id:
            return _error(422, "id_mismatch", "document id does not match the URL")
        active = (model.metadata.model_name, model.metadata.version)
        if (assessment.model_ref.name, assessment.model_ref.version) != active:
            return _error(422, "model_ref_mismatch", "assessment references a different model")

        expected = _parse_if_match(request.headers.get("If-Match"))
        existed = store.exists(assessment_id)
        if existed and expected is None:
            return _error(409, "version_required", "updating an assessment requires If-Match")
        try:
            etag = store.save(assessment, expected_etag=expected, require_match=True)
        except StaleVersionError:
            return _error(409, "version_conflict", "stored assessment changed; reload and retry")
        return JSONResponse(
            status_code=200 if existed else 201,
            content={"id": assessment_id, "etag": etag},
            headers=_etag_header(etag),
        )

    @app.post("/api/v1/assessments/{assessment_id}/score")
    def score_assessment(assessment_id: str) -> Response:
        try:
            assessment, _ = store.load(assessment_id)
        except AssessmentNotFoundError:
            return _error(404, "assessment_not_found", f"no assessment {assessment_id}")
        return Response(
            content=canonical_dumps(profile_to_dict(profile(model, assessment))),
            media_type=MEDIA_TYPE,
        )

    @app.post("/api/v1/assessments/{assessment_id}/whatif")
    async def whatif_assessment(assessment_id: str, request: Request) -> Response:
        try:
            assessment, _ = store.load(assessment_id)
        except AssessmentNotFoundError:
            return _error(404, "assessment_not_found", f"no assessment {assessment_id}")
        try:
            body = json.loads(await request.body())
        except json.JSONDecodeError as exc:
            return _error(400, "invalid_json", str(exc))
        flips_raw = body.get("flips", []) if isinstance(body, dict) else None
        if flips_raw is None or not isinstance(flips_raw, list):
            return _error(422, "invalid_flips", "body must be {\"flips\": [{code, state}...]}")
        flips: dict[PracticeCode, PracticeState] = {}
        for entry in flips_raw:
            if not isinstance(entry, dict) or "code" not in entry:
                return _error(422, "invalid_flips", "each flip needs a code")
            try:
                code = PracticeCode.parse(str(entry["code"]))
                state = PracticeState(entry.get("state", "implemented"))
            except ValueError as exc:
                return _error(422, "invalid_flips", str(exc))
            flips[code] = state
        try:
            result = what_if(model, assessment, flips)
        except UnknownPracticeError as exc:
            return _error(422, "unknown_practice", str(exc))
        return Response(
            content=canonical_dumps(
                {
                    "flipped": sorted(str(code) for code in result.flipped),
                    "before": profile_to_dict(result.before),
                    "after": profile_to_dict(result.after),
                }
            ),
            media_type=MEDIA_TYPE,
        )

    @app.post("/api/v1/assessments/{assessment_id}/scan")
    async def scan_assessment(assessment_id: str, request: Request) -> Response:
        try:
            assessment, etag = store.load(assessment_id)
        except AssessmentNotFoundError:
            return _error(404, "assessment_not_found", f"no assessment {assessment_id}")
        try:
            body = json.loads(await request.body())
        except json.JSONDecodeError as exc:
            return _error(400, "invalid_json", str(exc))
        repo = body.get("repo") if isinstance(body, dict) else None
        if not isinstance(repo, dict) or not ("url" in repo or "path" in repo):
            return _error(422, "invalid_repo", "body must carry repo.url or repo.path")
        apply_changes = bool(body.get("apply", False))

        globs = content_globs(probe_rules)
        try:
            if "url" in repo:
                snapshot = snapshot_remote(
                    str(repo["url"]),
                    token=host_token,
                    transport=transport,
                    content_globs=globs,
                )
            else:
                snapshot = snapshot_local(Path(str(repo["path"])), content_globs=globs)
        except RepositoryNotFoundError as exc:
            return _error(422, "repo_not_found", str(exc))
        except RateLimitError as exc:
            return _error(429, "rate_limited", str(exc))
        except (AuthError, NetworkError, UpstreamError, RemoteError) as exc:
            return _error(502, "upstream_failure", str(exc))
        except NotADirectoryError as exc:
            return _error(422, "invalid_repo", str(exc))

        results = run_probes(snapshot, probe_rules)
        proposals = to_probe_evidence(results, origin=snapshot.origin)
        payload: dict[str, Any] = {
            "proposals": [
                {
                    "code": str(p.code),
                    "state": p.proposed_state.value,
                    "confidence": p.record.confidence.value,
                    "note": p.record.note,
                    "locator": p.record.locator,
                }
                for p in proposals
                if p.proposed_state is not None
            ],
            "informational": [
                {"code": str(p.code), "note": p.record.note}
                for p in proposals
                if p.proposed_state is None
            ],
            "inapplicable": [
                {"rule": r.rule_id, "detail": r.detail}
                for r in results
                if r.outcome is ProbeOutcome.INAPPLICABLE
            ],
            "applied": False,
        }
        if apply_changes:
            merged = merge_probe_results(assessment, proposals)
            new_etag = store.save(merged, expected_etag=etag, require_match=True)
            payload["applied"] = True
            payload["etag"] = new_etag
        return Response(content=canonical_dumps(payload), media_type=MEDIA_TYPE)

    return app
