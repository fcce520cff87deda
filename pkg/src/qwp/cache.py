"""Content-addressed on-disk cache of computed volume documents.

One JSON file per key in a flat directory.  Each file stores the
payload together with the engine version and a sha256 over the
payload's canonical serialization; a reader treats a version mismatch,
a hash mismatch, or any parse failure as a miss and recomputes.
Writes go through a temporary file in the same directory followed by
os.replace, so a concurrent reader never sees a torn entry.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

from . import __version__
from .render import canonical_json

_ENV_VAR = "QWP_CACHE_DIR"


def resolve_cache_dir(flag_value: str | None) -> Path | None:
    """Explicit flag wins, then the environment, then no cache."""
    if flag_value:
        return Path(flag_value)
    env = os.environ.get(_ENV_VAR)
    return Path(env) if env else None


def payload_hash(payload) -> str:
    return hashlib.sha256(canonical_json(payload).encode()).hexdigest()


def _entry_path(cache_dir: Path, key: str) -> Path:
    return cache_dir / f"{key}.json"


def load(cache_dir: Path, key: str):
    """The stored payload, or None on miss, staleness, or corruption."""
    try:
        raw = _entry_path(cache_dir, key).read_text()
        entry = json.loads(raw)
        payload = entry["payload"]
        if entry["key"] != key:
            return None
        if entry["engine_version"] != __version__:
            return None
        if entry["sha256"] != payload_hash(payload):
            return None
        return payload
    except (OSError, ValueError, KeyError, TypeError):
        return None


def store(cache_dir: Path, key: str, payload) -> None:
    cache_dir.mkdir(parents=True, exist_ok=True)
    entry = {
        "key": key,
        "engine_version": __version__,
        "sha256": payload_hash(payload),
        "payload": payload,
    }
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(canonical_json(entry))
        os.replace(tmp, _entry_path(cache_dir, key))
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
