"""Memo cache for cohomology tables with an optional content-addressed disk store."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
from pathlib import Path

log = logging.getLogger(__name__)


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest(obj) -> str:
    return hashlib.sha256(canonical(obj).encode()).hexdigest()


class TableCache:
    """Idempotent key -> JSON value map.

    Values are deterministic functions of their keys, so concurrent writers
    may race freely; the last one wins with an identical payload.
    """

    MANIFEST = "touched.txt"

    def __init__(self, directory: str | os.PathLike | None = None):
        self._mem: dict[str, object] = {}
        self._lock = threading.Lock()
        self.directory = Path(directory) if directory else None
        self.hits = 0
        self.misses = 0
        self.recomputed = 0
        self.touched: set[str] = set()
        if self.directory is not None:
            try:
                self.directory.mkdir(parents=True, exist_ok=True)
            except OSError as exc:
                log.warning("cache dir %s unusable (%s); running without disk cache", directory, exc)
                self.directory = None

    def _path(self, h: str) -> Path:
        return self.directory / h[:2] / f"{h}.json"

    def get(self, key):
        h = digest(key)
        self.touched.add(h)
        with self._lock:
            if h in self._mem:
                self.hits += 1
                return self._mem[h]
        if self.directory is not None:
            path = self._path(h)
            if path.exists():
                try:
                    rec = json.loads(path.read_text(encoding="utf-8"))
                    if rec["key"] != canonical(key) or rec["check"] != digest(rec["value"]):
                        raise ValueError("checksum mismatch")
                except (ValueError, KeyError, OSError, TypeError) as exc:
                    log.warning("corrupted cache entry %s (%s); recomputing", path.name, exc)
                    self.recomputed += 1
                else:
                    with self._lock:
                        self._mem[h] = rec["value"]
                        self.hits += 1
                    return rec["value"]
        self.misses += 1
        return None

    def put(self, key, value) -> None:
        h = digest(key)
        with self._lock:
            self._mem[h] = value
        if self.directory is None:
            return
        path = self._path(h)
        rec = {"key": canonical(key), "value": value, "check": digest(value)}
        try:
            path.parent.mkdir(exist_ok=True)
            tmp = path.with_suffix(f".{os.getpid()}.{threading.get_ident()}.tmp")
            tmp.write_text(json.dumps(rec, sort_keys=True), encoding="utf-8")
            os.replace(tmp, path)
        except OSError as exc:
            log.warning("cache write failed (%s); continuing without disk cache", exc)
            self.directory = None

    def write_manifest(self) -> None:
        if self.directory is None:
            return
        try:
            (self.directory / self.MANIFEST).write_text(
                "\n".join(sorted(self.touched)) + "\n", encoding="utf-8"
            )
        except OSError as exc:
            log.warning("could not write cache manifest: %s", exc)

    def gc(self) -> int:
        """Delete entries not touched by the last recorded run."""
        if self.directory is None:
            return 0
        manifest = self.directory / self.MANIFEST
        keep = set(manifest.read_text(encoding="utf-8").split()) if manifest.exists() else set()
        removed = 0
        for path in self.directory.glob("*/*.json"):
            if path.stem not in keep:
                path.unlink()
                removed += 1
        return removed

    def entries(self) -> int:
        if self.directory is None:
            return len(self._mem)
        return sum(1 for _ in self.directory.glob("*/*.json"))


_active = TableCache()


def active() -> TableCache:
    return _active


def use(cache: TableCache) -> TableCache:
    global _active
    _active = cache
    return cache
