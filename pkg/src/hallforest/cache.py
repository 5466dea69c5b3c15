"""Optional on-disk persistence of canonical split tables.

Set ``HALLFOREST_CACHE_DIR`` to a directory to keep tables between runs; each
table is one JSON file.  Without the variable everything stays in memory.
"""
from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

ENV = "HALLFOREST_CACHE_DIR"

_tables: dict[str, dict] = {}
_dirty: set[str] = set()


def table(name: str) -> dict:
    return _tables.setdefault(name, {})


def mark(name: str) -> None:
    _dirty.add(name)


def directory() -> Path | None:
    d = os.environ.get(ENV)
    return Path(d) if d else None


def load() -> None:
    d = directory()
    if d is None or not d.is_dir():
        return
    for f in sorted(d.glob("*.json")):
        try:
            data = json.loads(f.read_text())
        except (OSError, json.JSONDecodeError):
            continue  # a damaged cache file is simply ignored
        if isinstance(data, dict):
            table(f.stem).update(data)


def save() -> None:
    d = directory()
    if d is None or not _dirty:
        return
    d.mkdir(parents=True, exist_ok=True)
    for name in sorted(_dirty):
        fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(_tables[name], fh, sort_keys=True)
        os.replace(tmp, d / f"{name}.json")
    _dirty.clear()
