"""Repository evidence collectors: snapshots, probe rules, probe execution."""

from .probes import ProbeOutcome, ProbeResult, run_probes, to_probe_evidence
from .remote import ReplayTransport, Transport, TransportResponse, UrllibTransport, snapshot_remote
from .rules import ProbeRule, content_globs, default_rules, default_rules_text, parse_rules
from .snapshot import FileEntry, PlatformMetadata, RepoSnapshot, SnapshotLimits, snapshot_local

__all__ = [
    "FileEntry",
    "PlatformMetadata",
    "ProbeOutcome",
    "ProbeResult",
    "ProbeRule",
    "RepoSnapshot",
    "ReplayTransport",
    "SnapshotLimits",
    "Transport",
    "TransportResponse",
    "UrllibTransport",
    "content_globs",
    "default_rules",
    "default_rules_text",
    "parse_rules",
    "run_probes",
    "snapshot_local",
    "snapshot_remote",
    "to_probe_evidence",
]
