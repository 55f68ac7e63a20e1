"""Remote repository snapshots over the hosting platform's REST interface.

Talks GitHub-style endpoints (repository metadata, tags, recursive tree,
contents). Rate-limit aware: bounded retries with exponential backoff, at
most `max_retries` retries per request; content fetches run with bounded
concurrency. Authentication is a bearer token (CLI/service read it from
RSMM_HOST_TOKEN).

The Transport protocol isolates all network I/O so tests can run entirely
against recorded replay fixtures.
"""

from __future__ import annotations

import base64
import json
import threading
import time
import urllib.error
import urllib.parse
import urllib.request
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping, Protocol

from ..errors import (
    AuthError,
    NetworkError,
    RateLimitError,
    RemoteError,
    RepositoryNotFoundError,
    UpstreamError,
)
from .snapshot import FileEntry, PlatformMetadata, RepoSnapshot, SnapshotLimits

DEFAULT_API_BASE = "https://api.github.com"
CI_CONFIG_PREFIXES = (".github/workflows/",)
CI_CONFIG_FILES = (".gitlab-ci.yml", ".travis.yml", "azure-pipelines.yml", ".circleci/config.yml")


@dataclass(frozen=True)
class TransportResponse:
    status: int
    headers: Mapping[str, str]
    body: bytes

    def json(self) -> Any:
        return json.loads(self.body.decode("utf-8"))


class Transport(Protocol):
    def get(self, url: str, headers: Mapping[str, str]) -> TransportResponse: ...


class UrllibTransport:
    """Live transport; raises NetworkError on transport-level failures."""

    def __init__(self, timeout: float = 30.0):
        self.timeout = timeout

    def get(self, url: str, headers: Mapping[str, str]) -> TransportResponse:
        request = urllib.request.Request(url, headers=dict(headers))
        try:
            with urllib.request.urlopen(request, timeout=self.timeout) as response:
                return TransportResponse(
                    status=response.status,
                    headers=dict(response.headers.items()),
                    body=response.read(),
                )
        except urllib.error.HTTPError as exc:
            return TransportResponse(
                status=exc.code,
                headers=dict(exc.headers.items()) if exc.headers else {},
                body=exc.read() or b"",
            )
        except (urllib.error.URLError, TimeoutError, OSError) as exc:
            raise NetworkError(f"request failed: {url}: {exc}") from exc


class ReplayTransport:
    """Serves recorded responses; the only transport tests ever use.

    Fixture shape: {"responses": [{"url": ..., "status": ..., "headers": {},
    "json": ... | "body_b64": ... | "body": "text"}, ...]}. Responses for the
    same URL are served in recorded order, the last one repeating.
    """

    def __init__(self, fixture: Mapping[str, Any]):
        self._sequences: dict[str, list[TransportResponse]] = {}
        self._lock = threading.Lock()
        self.requests: list[str] = []
        for entry in fixture.get("responses", []):
            url = entry["url"]
            if "json" in entry:
                body = json.dumps(entry["json"]).encode("utf-8")
            elif "body_b64" in entry:
                body = base64.b64decode(entry["body_b64"])
            else:
                body = str(entry.get("body", "")).encode("utf-8")
            self._sequences.setdefault(url, []).append(
                TransportResponse(
                    status=int(entry.get("status", 200)),
                    headers=dict(entry.get("headers", {})),
                    body=body,
                )
            )

    @classmethod
    def from_file(cls, path: Path | str) -> "ReplayTransport":
        return cls(json.loads(Path(path).read_text("utf-8")))

    def get(self, url: str, headers: Mapping[str, str]) -> TransportResponse:
        with self._lock:
            self.requests.append(url)
            sequence = self._sequences.get(url)
            if not sequence:
                raise AssertionError(f"no recorded response for {url}")
            if len(sequence) > 1:
                return sequence.pop(0)
            return sequence[0]


@dataclass(frozen=True)
class RemoteConfig:
    api_base: str = DEFAULT_API_BASE
    max_concurrency: int = 4
    max_retries: int = 3
    backoff_base: float = 0.5
    sleeper: Callable[[float], None] = time.sleep
    limits: SnapshotLimits = field(default_factory=SnapshotLimits)


def parse_repo_url(url: str) -> tuple[str, str]:
    parsed = urllib.parse.urlparse(url)
    segments = [s for s in parsed.path.split("/") if s]
    if len(segments) < 2:
        raise RemoteError(f"cannot extract owner/repository from URL: {url}")
    owner, repo = segments[0], segments[1]
    if repo.endswith(".git"):
        repo = repo[:-4]
    return owner, repo


def snapshot_remote(
    url: str,
    *,
    token: str | None = None,
    transport: Transport | None = None,
    config: RemoteConfig = RemoteConfig(),
    content_globs: Iterable[str] = (),
) -> RepoSnapshot:
    """Snapshot a hosted repository: metadata, tags, file index, selected content."""
    owner, repo = parse_repo_url(url)
    transport = transport or UrllibTransport()
    headers = {
        "Accept": "application/vnd.github+json",
        "User-Agent": "rsmm-toolkit",
    }
    if token:
        headers["Authorization"] = f"Bearer {token}"
    base = f"{config.api_base.rstrip('/')}/repos/{owner}/{repo}"

    meta = _get_json(transport, base, headers, config)
    default_branch = meta.get("default_branch") or "main"
    license_info = meta.get("license") or {}
    license_id = license_info.get("spdx_id") if isinstance(license_info, dict) else None
    if license_id in ("NOASSERTION", ""):
        license_id = None
    topics = tuple(meta.get("topics") or ())

    tags_payload = _get_json(transport, f"{base}/tags?per_page=100", headers, config)
    tags = tuple(entry.get("name", "") for entry in tags_payload if isinstance(entry, dict))

    tree_payload = _get_json(
        transport, f"{base}/git/trees/{default_branch}?recursive=1", headers, config
    )
    warnings: list[str] = []
    truncated = bool(tree_payload.get("truncated", False))
    if truncated:
        warnings.append("hosting platform reported a truncated tree listing")
    entries = [
        FileEntry(path=node["path"], size=int(node.get("size", 0)))
        for node in tree_payload.get("tree", [])
        if node.get("type") == "blob"
    ]
    entries.sort(key=lambda e: e.path)
    if len(entries) > config.limits.max_files:
        truncated = True
        warnings.append(f"file index truncated to {config.limits.max_files} of {len(entries)} files")
        entries = entries[: config.limits.max_files]

    ci_present = any(
        entry.path.startswith(CI_CONFIG_PREFIXES) or entry.path in CI_CONFIG_FILES
        for entry in entries
    )
    platform = PlatformMetadata(
        default_branch=default_branch,
        tags=tags,
        topics=topics,
        license_id=license_id,
        ci_config_present=ci_present,
    )

    snapshot = RepoSnapshot(origin=url, files=tuple(entries), platform=platform)
    wanted = snapshot.paths_matching(list(content_globs))
    sizes = {e.path: e.size for e in entries}
    fetchable: list[str] = []
    for rel in wanted:
        if sizes[rel] > config.limits.max_file_bytes:
            warnings.append(f"content skipped (over {config.limits.max_file_bytes} bytes): {rel}")
        else:
            fetchable.append(rel)

    contents: dict[str, str] = {}
    if fetchable:
        def fetch(rel: str) -> tuple[str, str | None]:
            quoted = urllib.parse.quote(rel)
            payload = _get_json(
                transport, f"{base}/contents/{quoted}?ref={default_branch}", headers, config
            )
            if isinstance(payload, dict) and payload.get("encoding") == "base64":
                raw = base64.b64decode(payload.get("content", ""))
                return rel, raw.decode("utf-8", errors="replace")
            return rel, None

        with ThreadPoolExecutor(max_workers=config.max_concurrency) as pool:
            for rel, text in pool.map(fetch, fetchable):
                if text is None:
                    warnings.append(f"content not decodable: {rel}")
                else:
                    contents[rel] = text

    return RepoSnapshot(
        origin=url,
        files=tuple(entries),
        contents=contents,
        platform=platform,
        truncated=truncated,
        warnings=tuple(warnings),
    )


def _get_json(
    transport: Transport,
    url: str,
    headers: Mapping[str, str],
    config: RemoteConfig,
) -> Any:
    response = _request_with_retries(transport, url, headers, config)
    try:
        return response.json()
    except (ValueError, UnicodeDecodeError) as exc:
        raise UpstreamError(f"undecodable response from {url}: {exc}") from exc


def _request_with_retries(
    transport: Transport,
    url: str,
    headers: Mapping[str, str],
    config: RemoteConfig,
) -> TransportResponse:
    attempts = config.max_retries + 1
    last: TransportResponse | None = None
    for attempt in range(attempts):
        response = transport.get(url, headers)
        if response.status < 400:
            return response
        if response.status == 404:
            raise RepositoryNotFoundError(f"not found: {url}")
        if response.status in (401,):
            raise AuthError(f"authentication rejected ({response.status}): {url}")
        if _is_rate_limited(response) or response.status in (500, 502, 503, 504):
            last = response
            if attempt < attempts - 1:
                config.sleeper(config.backoff_base * (2**attempt))
            continue
        if response.status == 403:
            raise AuthError(f"access forbidden (403): {url}")
        raise UpstreamError(f"unexpected response {response.status}: {url}")

    assert last is not None
    if _is_rate_limited(last):
        raise RateLimitError(f"rate limited after {config.max_retries} retries: {url}")
    raise UpstreamError(f"server error {last.status} after {config.max_retries} retries: {url}")


def _is_rate_limited(response: TransportResponse) -> bool:
    if response.status == 429:
        return True
    if response.status != 403:
        return False
    remaining = {k.lower(): v for k, v in response.headers.items()}.get("x-ratelimit-remaining")
    if remaining == "0":
        return True
    try:
        message = str(response.json().get("message", "")).lower()
    except Exception:
        return False
    return "rate limit" in message
