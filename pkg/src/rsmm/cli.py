"""Command-line interface.

Exit codes: 0 success, 2 usage or data error, 3 network failure,
4 authentication or rate limit, 5 cannot bind the service port.
"""

from __future__ import annotations

import argparse
import os
import socket
import sys
from datetime import datetime
from pathlib import Path

from . import answers as answers_mod
from .assessment import (
    Assessment,
    EvidenceConfidence,
    EvidenceRecord,
    EvidenceSource,
    PracticeState,
    ProjectInfo,
    completeness,
    merge_probe_results,
    new_assessment,
    set_status,
)
from .collectors import (
    content_globs,
    default_rules,
    parse_rules,
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
    ModelSyntaxError,
    ModelValidationError,
    NetworkError,
    ProbeRuleError,
    RateLimitError,
    RemoteError,
    RepositoryNotFoundError,
    RsmmError,
    UnknownPracticeError,
    UpstreamError,
)
from .jsonio import canonical_dumps
from .model import MaturityModel, PracticeCode, bundled_rsmm, parse_model
from .report import ReportFormat, ReportOptions, render_gap_report, render_matrix
from .scoring import gap_analysis, profile, profile_to_dict, what_if
from .store import AssessmentStore
from .timestamps import now_utc, parse_rfc3339

EXIT_OK = 0
EXIT_DATA = 2
EXIT_NETWORK = 3
EXIT_AUTH = 4
EXIT_BIND = 5

ENV_HOST_TOKEN = "RSMM_HOST_TOKEN"
ENV_DATA_DIR = "RSMM_DATA_DIR"
ENV_SERVICE_TOKEN = "RSMM_SERVICE_TOKEN"

DEFAULT_BIND = "127.0.0.1:8421"


def entry() -> None:
    sys.exit(main())


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not getattr(args, "command", None):
        parser.print_help()
        return EXIT_DATA
    try:
        return args.handler(args)
    except (AssessmentNotFoundError, UnknownPracticeError, AssessmentFormatError,
            ModelSyntaxError, ModelValidationError, ProbeRuleError, RepositoryNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (AuthError, RateLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_AUTH
    except (NetworkError, UpstreamError, RemoteError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NETWORK
    except RsmmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", metavar="PATH", help="model file (default: bundled RSMM v1.0)")
    common.add_argument(
        "--data-dir",
        metavar="PATH",
        default=None,
        help=f"assessments directory (default: ${ENV_DATA_DIR} or ./assessments)",
    )
    common.add_argument("--rules", metavar="PATH", help="probe rules file (default: bundled rules)")
    common.add_argument(
        "--format",
        choices=[f.value for f in ReportFormat],
        default=ReportFormat.TEXT.value,
        help="output format",
    )
    common.add_argument("--ascii", action="store_true", help="use Y/N instead of check/cross glyphs")
    common.add_argument(
        "--frozen-time",
        metavar="RFC3339",
        help="fixed timestamp for all recorded evidence (testing/reproducibility)",
    )

    parser = argparse.ArgumentParser(
        prog="rsmm",
        description="Maturity assessment toolkit for research software projects.",
    )
    sub = parser.add_subparsers(dest="command")

    p_model = sub.add_parser("model", help="model inspection", parents=[common])
    model_sub = p_model.add_subparsers(dest="model_command")
    p_show = model_sub.add_parser("show", help="summarize the active model", parents=[common])
    p_show.set_defaults(handler=cmd_model_show)
    p_model.set_defaults(handler=cmd_model_show)

    p_assess = sub.add_parser("assess", help="create an assessment", parents=[common])
    p_assess.add_argument("--project", required=True, help="project name")
    p_assess.add_argument("--repo-url", help="project repository URL (recorded, not fetched)")
    p_assess.add_argument("--id", dest="assessment_id", help="assessment id (default: generated)")
    p_assess.add_argument("--answers", metavar="FILE", help="answers file (non-interactive)")
    p_assess.add_argument(
        "--interactive",
        action="store_true",
        help="walk the questionnaire on the terminal",
    )
    p_assess.set_defaults(handler=cmd_assess)

    p_scan = sub.add_parser("scan", help="probe a repository for evidence", parents=[common])
    p_scan.add_argument("assessment_id", help="assessment to update")
    p_scan.add_argument("--repo", required=True, help="local path or repository URL")
    p_scan.add_argument("--dry-run", action="store_true", help="print proposals without persisting")
    p_scan.set_defaults(handler=cmd_scan)

    p_score = sub.add_parser("score", help="matrix and maturity profile", parents=[common])
    p_score.add_argument("assessment_id")
    p_score.set_defaults(handler=cmd_score)

    p_gaps = sub.add_parser("gaps", help="blocking practices and unlocked levels", parents=[common])
    p_gaps.add_argument("assessment_id")
    p_gaps.set_defaults(handler=cmd_gaps)

    p_whatif = sub.add_parser("whatif", help="simulate practice flips", parents=[common])
    p_whatif.add_argument("assessment_id")
    p_whatif.add_argument(
        "--implement",
        action="append",
        default=[],
        metavar="CODE",
        help="practice to flip to implemented (repeatable)",
    )
    p_whatif.add_argument(
        "--unimplement",
        action="append",
        default=[],
        metavar="CODE",
        help="practice to flip to not implemented (repeatable)",
    )
    p_whatif.set_defaults(handler=cmd_whatif)

    p_serve = sub.add_parser("serve", help="run the HTTP service", parents=[common])
    p_serve.add_argument("--bind", default=DEFAULT_BIND, metavar="HOST:PORT")
    p_serve.add_argument(
        "--cors-origin",
        action="append",
        default=[],
        metavar="ORIGIN",
        help="additional allowed CORS origin (repeatable)",
    )
    p_serve.set_defaults(handler=cmd_serve)

    return parser


# ---------------------------------------------------------------------------
# Shared context helpers
# ---------------------------------------------------------------------------


def _load_model(args: argparse.Namespace) -> MaturityModel:
    if not args.model:
        return bundled_rsmm()
    return parse_model(Path(args.model).read_text("utf-8"))


def _data_dir(args: argparse.Namespace) -> Path:
    raw = args.data_dir or os.environ.get(ENV_DATA_DIR) or "assessments"
    path = Path(raw)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _store(args: argparse.Namespace, model: MaturityModel) -> AssessmentStore:
    return AssessmentStore(_data_dir(args), model)


def _rules(args: argparse.Namespace, model: MaturityModel):
    if args.rules:
        return parse_rules(Path(args.rules).read_text("utf-8"), model)
    return default_rules(model)


def _now(args: argparse.Namespace) -> datetime | None:
    if args.frozen_time:
        try:
            return parse_rfc3339(args.frozen_time)
        except ValueError as exc:
            raise AssessmentFormatError(str(exc)) from None
    return None


def _report_options(args: argparse.Namespace, **overrides) -> ReportOptions:
    return ReportOptions(
        format=ReportFormat(args.format),
        ascii_glyphs=args.ascii,
        **overrides,
    )


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_model_show(args: argparse.Namespace) -> int:
    try:
        model = _load_model(args)
    except (ModelSyntaxError, ModelValidationError) as exc:
        print(f"error: model does not parse: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: cannot read model: {exc}", file=sys.stderr)
        return EXIT_DATA

    if ReportFormat(args.format) is ReportFormat.STRUCTURED:
        print(canonical_dumps(_model_summary(model)), end="")
        return EXIT_OK

    meta = model.metadata
    print(
        f"{meta.model_name} {meta.version}: {len(model.focus_areas)} focus areas, "
        f"{model.capability_count} capabilities, {model.practice_count} practices"
    )
    print(f"Levels: 1..{model.max_level}")
    for fa in model.focus_areas:
        print(
            f"\nFocus area {fa.index}: {fa.name} "
            f"({len(fa.capabilities)} capabilities, {fa.practice_count} practices)"
        )
        width = max(len(cap.name) for cap in fa.capabilities)
        for cap in fa.capabilities:
            levels = ",".join(str(l) for l in sorted(cap.levels))
            print(f"  {fa.index}.{cap.index}  {cap.name:<{width}}  levels {levels}")
    return EXIT_OK


def _model_summary(model: MaturityModel) -> dict:
    return {
        "model_name": model.metadata.model_name,
        "version": model.metadata.version,
        "max_level": model.max_level,
        "focus_area_count": len(model.focus_areas),
        "capability_count": model.capability_count,
        "practice_count": model.practice_count,
        "focus_areas": [
            {
                "index": fa.index,
                "name": fa.name,
                "practice_count": fa.practice_count,
                "capabilities": [
                    {"index": cap.index, "name": cap.name, "levels": sorted(cap.levels)}
                    for cap in fa.capabilities
                ],
            }
            for fa in model.focus_areas
        ],
    }


def cmd_assess(args: argparse.Namespace) -> int:
    model = _load_model(args)
    store = _store(args, model)
    now = _now(args)
    project = ProjectInfo(name=args.project, repository_url=args.repo_url)
    assessment = new_assessment(model, project, assessment_id=args.assessment_id, now=now)

    if args.answers:
        try:
            text = Path(args.answers).read_text("utf-8")
        except OSError as exc:
            print(f"error: cannot read answers file: {exc}", file=sys.stderr)
            return EXIT_DATA
        parsed = answers_mod.parse_answers(text)
        assessment = answers_mod.apply_answers(model, assessment, parsed, now=now)
    elif args.interactive or sys.stdin.isatty():
        assessment = _interactive_questionnaire(model, assessment, now=now)

    store.save(assessment)
    result = profile(model, assessment)
    print(f"Assessment {assessment.id} saved for project {project.name}")
    print(f"Completeness: {completeness(assessment):.0%}")
    print(f"Profile: {result.vector_text}")
    return EXIT_OK


def _interactive_questionnaire(
    model: MaturityModel,
    assessment: Assessment,
    *,
    now: datetime | None,
) -> Assessment:
    """Prompt per practice in matrix reading order: focus area, capability, level."""
    print("Answer y (implemented), n (not implemented), s (skip), q (stop).")
    for fa in model.focus_areas:
        for cap in fa.capabilities:
            print(f"\n== Focus area {fa.index}: {fa.name}: {fa.index}.{cap.index} {cap.name}")
            for practice in sorted(cap.practices, key=lambda p: p.code.level):
                print(f"\n[{practice.code}] {practice.name}")
                if practice.description:
                    print(f"    {practice.description}")
                for criterion in practice.criteria:
                    print(f"    ({criterion.priority.value}) {criterion.text}")
                try:
                    reply = input("implemented? [y/n/s/q] ").strip().lower()
                except EOFError:
                    return assessment
                if reply == "q":
                    return assessment
                if reply not in ("y", "n"):
                    continue
                state = PracticeState.IMPLEMENTED if reply == "y" else PracticeState.NOT_IMPLEMENTED
                evidence = EvidenceRecord(
                    source=EvidenceSource.MANUAL,
                    confidence=EvidenceConfidence.CERTAIN,
                    note="interactive questionnaire answer",
                    observed_at=now or now_utc(),
                )
                assessment = set_status(assessment, practice.code, state, evidence, now=now)
    return assessment


def cmd_scan(args: argparse.Namespace) -> int:
    model = _load_model(args)
    store = _store(args, model)
    rule_set = _rules(args, model)
    now = _now(args)
    assessment, etag = store.load(args.assessment_id)

    globs = content_globs(rule_set)
    repo = args.repo
    if "://" in repo:
        snapshot = snapshot_remote(
            repo,
            token=os.environ.get(ENV_HOST_TOKEN),
            content_globs=globs,
        )
    else:
        snapshot = snapshot_local(Path(repo), content_globs=globs)

    for warning in snapshot.warnings:
        print(f"warning: {warning}", file=sys.stderr)

    results = run_probes(snapshot, rule_set)
    proposals = to_probe_evidence(results, origin=snapshot.origin, now=now)

    detected = [p for p in proposals if p.proposed_state is not None]
    informational = [p for p in proposals if p.proposed_state is None]
    inapplicable = [r for r in results if r.outcome is ProbeOutcome.INAPPLICABLE]

    print(f"Scan of {snapshot.origin}: {len(detected)} proposal(s)")
    for p in detected:
        print(f"  {p.code} -> {p.proposed_state.value} ({p.record.confidence.value}) {p.record.note}")
    if informational:
        print(f"Not detected ({len(informational)}):")
        for p in informational:
            print(f"  {p.code}: {p.record.note}")
    if inapplicable:
        print(f"Inapplicable ({len(inapplicable)}):")
        for r in inapplicable:
            print(f"  {r.rule_id}: {r.detail}")

    if args.dry_run:
        print("Dry run: assessment not modified.")
        return EXIT_OK

    merged = merge_probe_results(assessment, proposals, now=now)
    store.save(merged, expected_etag=etag, require_match=True)
    result = profile(model, merged)
    print(f"Assessment {merged.id} updated; profile: {result.vector_text}")
    return EXIT_OK


def cmd_score(args: argparse.Namespace) -> int:
    model = _load_model(args)
    store = _store(args, model)
    assessment, _ = store.load(args.assessment_id)
    result = profile(model, assessment)
    options = _report_options(args)
    print(render_matrix(model, assessment, result, options), end="")
    return EXIT_OK


def cmd_gaps(args: argparse.Namespace) -> int:
    model = _load_model(args)
    store = _store(args, model)
    assessment, _ = store.load(args.assessment_id)
    gaps = gap_analysis(model, assessment)
    options = _report_options(args)
    print(render_gap_report(model, gaps, options), end="")
    return EXIT_OK


def cmd_whatif(args: argparse.Namespace) -> int:
    model = _load_model(args)
    store = _store(args, model)
    assessment, _ = store.load(args.assessment_id)

    flips: dict[PracticeCode, PracticeState] = {}
    try:
        for code_text in args.implement:
            flips[PracticeCode.parse(code_text)] = PracticeState.IMPLEMENTED
        for code_text in args.unimplement:
            flips[PracticeCode.parse(code_text)] = PracticeState.NOT_IMPLEMENTED
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA

    result = what_if(model, assessment, flips)
    if ReportFormat(args.format) is ReportFormat.STRUCTURED:
        print(
            canonical_dumps(
                {
                    "flipped": sorted(str(c) for c in result.flipped),
                    "before": profile_to_dict(result.before),
                    "after": profile_to_dict(result.after),
                }
            ),
            end="",
        )
        return EXIT_OK

    print(f"Before: {result.before.vector_text}")
    print(f"After:  {result.after.vector_text}")
    for fa in model.focus_areas:
        before = result.before.focus_area_levels[fa.index - 1]
        after = result.after.focus_area_levels[fa.index - 1]
        marker = "" if before == after else f"  ({before} -> {after})"
        print(f"  Focus area {fa.index} {fa.name}: {after}{marker}")
    return EXIT_OK


def _parse_bind(bind: str) -> tuple[str, int]:
    host, _, port_text = bind.rpartition(":")
    if not host:
        host, port_text = bind, "0"
    try:
        return host, int(port_text)
    except ValueError:
        raise AssessmentFormatError(f"invalid bind address: {bind!r}") from None


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import DEFAULT_CORS_ORIGINS, create_app

    model = _load_model(args)
    store = _store(args, model)
    rule_set = _rules(args, model)
    host, port = _parse_bind(args.bind)

    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        probe.bind((host, port))
    except OSError as exc:
        print(f"error: cannot bind {host}:{port}: {exc}", file=sys.stderr)
        return EXIT_BIND
    actual_port = probe.getsockname()[1]
    probe.close()

    app = create_app(
        model,
        store,
        rules=rule_set,
        host_token=os.environ.get(ENV_HOST_TOKEN),
        auth_token=os.environ.get(ENV_SERVICE_TOKEN),
        cors_origins=[*DEFAULT_CORS_ORIGINS, *args.cors_origin],
    )
    print(f"listening on http://{host}:{actual_port}")
    server = uvicorn.Server(uvicorn.Config(app, host=host, port=actual_port, log_level="warning"))
    server.run()
    return EXIT_OK
