"""Repository snapshots: a bounded, deterministic view of a working copy or
remote repository that probes can match against."""

from __future__ import annotations

from dataclasses import dataclass, field
from fnmatch import fnmatch
from pathlib import Path
from typing import Iterable, Mapping

DEFAULT_MAX_FILES = 10_000
DEFAULT_MAX_FILE_BYTES = 1_048_576  # 1 MiB


@dataclass(frozen=True)
class SnapshotLimits:
    max_files: int = DEFAULT_MAX_FILES
    max_file_bytes: int = DEFAULT_MAX_FILE_BYTES


@dataclass(frozen=True)
class FileEntry:
    path: str  # repo-root-relative, forward slashes
    size: int


@dataclass(frozen=True)
class PlatformMetadata:
    """Facts reported by the hosting platform, not inferred from file content."""

    default_branch: str | None = None
    tags: tuple[str, ...] = ()
    topics: tuple[str, ...] = ()
    license_id: str | None = None
    ci_config_present: bool = False

    def field_present(self, name: str) -> bool | None:
        """Presence of one predicate field; None if the field is unknown."""
        if name == "license":
            return self.license_id is not None
        if name == "tags":
            return bool(self.tags)
        if name == "topics":
            return bool(self.topics)
        if name == "ci_config":
            return self.ci_config_present
        if name == "default_branch":
            return self.default_branch is not None
        return None


@dataclass(frozen=True)
class RepoSnapshot:
    origin: str
    files: tuple[FileEntry, ...]
    contents: Mapping[str, str] = field(default_factory=dict)
    platform: PlatformMetadata | None = None
    truncated: bool = False
    warnings: tuple[str, ...] = ()

    def paths_matching(self, globs: Iterable[str]) -> list[str]:
        patterns = [g.lower() for g in globs]
        return [
            entry.path
            for entry in self.files
            if any(fnmatch(entry.path.lower(), pattern) for pattern in patterns)
        ]


def snapshot_local(
    path: Path | str,
    *,
    content_globs: Iterable[str] = (),
    limits: SnapshotLimits = SnapshotLimits(),
) -> RepoSnapshot:
    """Index a local working copy (skipping .git), loading content only for
    files matching content_globs and within the per-file size bound."""
    root = Path(path)
    if not root.is_dir():
        raise NotADirectoryError(f"not a directory: {root}")

    entries: list[FileEntry] = []
    for file_path in sorted(root.rglob("*")):
        relative = file_path.relative_to(root).as_posix()
        if relative == ".git" or relative.startswith(".git/"):
            continue
        if not file_path.is_file():
            continue
        entries.append(FileEntry(path=relative, size=file_path.stat().st_size))

    warnings: list[str] = []
    truncated = False
    if len(entries) > limits.max_files:
        truncated = True
        warnings.append(
            f"file index truncated to {limits.max_files} of {len(entries)} files"
        )
        entries = entries[: limits.max_files]

    snapshot = RepoSnapshot(origin=str(root), files=tuple(entries))
    contents: dict[str, str] = {}
    patterns = list(content_globs)
    if patterns:
        for rel in snapshot.paths_matching(patterns):
            size = next(e.size for e in entries if e.path == rel)
            if size > limits.max_file_bytes:
                warnings.append(f"content skipped (over {limits.max_file_bytes} bytes): {rel}")
                continue
            contents[rel] = (root / rel).read_text("utf-8", errors="replace")

    return RepoSnapshot(
        origin=str(root),
        files=tuple(entries),
        contents=contents,
        platform=None,
        truncated=truncated,
        warnings=tuple(warnings),
    )
