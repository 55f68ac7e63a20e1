"""File-backed assessment store: one canonical JSON document per assessment.

Writers to the same assessment id are serialized; readers never block.
Entity versions are strong ETags (SHA-256 of the stored bytes) used by the
HTTP service's If-Match precondition.
"""

from __future__ import annotations

import hashlib
import os
import re
import threading
from pathlib import Path

from .assessment import Assessment, parse_assessment, serialize_assessment
from .errors import AssessmentNotFoundError, StaleVersionError
from .model import MaturityModel

_SAFE_ID = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")


def compute_etag(content: bytes) -> str:
    return hashlib.sha256(content).hexdigest()


class AssessmentStore:
    def __init__(self, root: Path | str, model: MaturityModel):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._model = model
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _lock_for(self, assessment_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(assessment_id, threading.Lock())

    def _path(self, assessment_id: str) -> Path:
        if not _SAFE_ID.match(assessment_id):
            raise AssessmentNotFoundError(assessment_id)
        return self.root / f"{assessment_id}.json"

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self.root.glob("*.json"))

    def exists(self, assessment_id: str) -> bool:
        try:
            return self._path(assessment_id).is_file()
        except AssessmentNotFoundError:
            return False

    def read_bytes(self, assessment_id: str) -> tuple[bytes, str]:
        """Raw stored document plus its ETag; raises AssessmentNotFoundError."""
        path = self._path(assessment_id)
        try:
            content = path.read_bytes()
        except FileNotFoundError:
            raise AssessmentNotFoundError(assessment_id) from None
        return content, compute_etag(content)

    def load(self, assessment_id: str) -> tuple[Assessment, str]:
        """Return (assessment, etag); raises AssessmentNotFoundError."""
        content, etag = self.read_bytes(assessment_id)
        return parse_assessment(content.decode("utf-8"), self._model), etag

    def etag(self, assessment_id: str) -> str | None:
        try:
            return compute_etag(self._path(assessment_id).read_bytes())
        except (FileNotFoundError, AssessmentNotFoundError):
            return None

    def save(
        self,
        assessment: Assessment,
        *,
        expected_etag: str | None = None,
        require_match: bool = False,
    ) -> str:
        """Persist atomically and return the new ETag.

        With require_match, the write is rejected (StaleVersionError) unless
        expected_etag equals the currently stored version; creating a new
        assessment requires expected_etag None.
        """
        path = self._path(assessment.id)
        content = serialize_assessment(assessment).encode("utf-8")
        with self._lock_for(assessment.id):
            if require_match:
                current = self.etag(assessment.id)
                if current != expected_etag:
                    raise StaleVersionError(assessment.id, expected=expected_etag, actual=current)
            tmp = path.with_name(path.name + ".tmp")
            tmp.write_bytes(content)
            os.replace(tmp, path)
        return compute_etag(content)
