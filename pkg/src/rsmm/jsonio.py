"""Canonical JSON encoding used for every document this toolkit writes.

Canonical form: UTF-8, two-space indent, insertion-ordered keys, trailing
newline. Writers build dicts in a fixed key order so identical values always
produce identical bytes (ETags and --dry-run comparisons rely on this).
"""

from __future__ import annotations

import json
from typing import Any


def canonical_dumps(value: Any) -> str:
    return json.dumps(value, ensure_ascii=False, indent=2) + "\n"


def canonical_bytes(value: Any) -> bytes:
    return canonical_dumps(value).encode("utf-8")
