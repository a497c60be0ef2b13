"""
On-disk cache of invariant tables.

One JSON file per kmax:

    {"schema_version": 1, "digest": "<sha256 of payload>", "payload": {"kmax": ..., "a": [...]}}

A file is trusted only if its schema matches, the digest matches the payload,
and column kmax recomputed by the divided-difference solver equals the stored
column. Anything else is logged and recomputed.
"""

import hashlib
import json
import logging
from pathlib import Path
from typing import Mapping, Optional, Union

from .config import CACHE_DIR, CACHE_SCHEMA_VERSION
from .errors import CacheError, ChebytowerError
from .invariants import (
    InvariantTable,
    invariants_recursive,
    invariants_vandermonde,
    table_from_json,
    table_to_json,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def canonical_json(payload: Mapping) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def table_digest(payload: Mapping) -> str:
    """sha256 hex digest of the canonical JSON form."""
    return hashlib.sha256(canonical_json(payload).encode("utf-8")).hexdigest()


def cache_path(kmax: int, directory: PathLike = CACHE_DIR) -> Path:
    return Path(directory) / f"invariants_k{kmax}.json"


def save_table(table: InvariantTable, directory: PathLike = CACHE_DIR) -> Path:
    """Write the table atomically (temp file then rename) and return its path."""
    payload = table_to_json(table)
    document = {
        "schema_version": CACHE_SCHEMA_VERSION,
        "digest": table_digest(payload),
        "payload": payload,
    }
    path = cache_path(table.kmax, directory)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".json.tmp")
    tmp.write_text(canonical_json(document) + "\n", encoding="utf-8")
    tmp.replace(path)
    logger.info("cached invariant table kmax=%d at %s", table.kmax, path)
    return path


def _read_document(path: Path) -> InvariantTable:
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise CacheError(f"unreadable cache file: {exc}") from None
    if not isinstance(document, dict):
        raise CacheError("cache file is not a JSON object")
    if document.get("schema_version") != CACHE_SCHEMA_VERSION:
        raise CacheError(f"schema version {document.get('schema_version')!r}, expected {CACHE_SCHEMA_VERSION}")
    payload = document.get("payload")
    if not isinstance(payload, dict) or document.get("digest") != table_digest(payload):
        raise CacheError("digest does not match payload")
    try:
        table = table_from_json(payload)
    except (AttributeError, KeyError, TypeError, ValueError, ChebytowerError) as exc:
        raise CacheError(f"malformed payload: {exc}") from None
    if invariants_vandermonde(table.kmax) != table.column(table.kmax):
        raise CacheError(f"column {table.kmax} does not match a fresh computation")
    return table


def load_table(kmax: int, directory: PathLike = CACHE_DIR) -> Optional[InvariantTable]:
    """The cached table for kmax, or None when absent or untrustworthy."""
    path = cache_path(kmax, directory)
    if not path.exists():
        return None
    try:
        table = _read_document(path)
    except CacheError as exc:
        logger.warning("rejecting cache file %s: %s", path, exc)
        return None
    if table.kmax != kmax:
        logger.warning("rejecting cache file %s: holds kmax=%d", path, table.kmax)
        return None
    logger.debug("loaded invariant table kmax=%d from %s", kmax, path)
    return table


def load_or_compute(kmax: int, directory: PathLike = CACHE_DIR) -> InvariantTable:
    table = load_table(kmax, directory)
    if table is None:
        table = invariants_recursive(kmax)
        save_table(table, directory)
    return table


def clear(directory: PathLike = CACHE_DIR) -> int:
    """Delete every cached table in directory; returns how many were removed."""
    removed = 0
    for path in Path(directory).glob("invariants_k*.json"):
        path.unlink()
        removed += 1
    return removed


def list_cached(directory: PathLike = CACHE_DIR):
    """Sorted kmax values that have a cache file (not validated)."""
    found = []
    for path in Path(directory).glob("invariants_k*.json"):
        stem = path.stem[len("invariants_k"):]
        if stem.isdigit():
            found.append(int(stem))
    return sorted(found)
