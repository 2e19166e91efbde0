"""Append-only JSON-lines cache of search outcomes keyed by a content hash."""

from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path

log = logging.getLogger(__name__)

DEFAULT_PATH = Path.home() / ".cache" / "posetsat" / "outcomes.jsonl"


def stable_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def make_key(params: dict) -> str:
    return hashlib.sha256(stable_json(params).encode()).hexdigest()


def default_path() -> Path:
    return Path(os.environ.get("POSETSAT_CACHE", DEFAULT_PATH))


class OutcomeCache:
    """One JSON object per line: ``{"key": ..., "params": ..., "outcome": ...}``.

    Later lines win. A line that does not parse (a torn append) is skipped
    with a warning.
    """

    def __init__(self, path=None):
        self.path = Path(path) if path is not None else default_path()
        self._index: dict[str, dict] = {}
        if self.path.exists():
            self._load()

    def _load(self):
        with self.path.open(encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                    self._index[record["key"]] = record["outcome"]
                except (json.JSONDecodeError, KeyError, TypeError):
                    log.warning("skipping corrupt cache line %d in %s", lineno, self.path)

    def get(self, params: dict) -> dict | None:
        return self._index.get(make_key(params))

    def put(self, params: dict, outcome: dict) -> str:
        key = make_key(params)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        prefix = ""
        if self.path.exists() and self.path.stat().st_size:
            # a torn previous append must not swallow this record
            with self.path.open("rb") as fh:
                fh.seek(-1, os.SEEK_END)
                if fh.read(1) != b"\n":
                    prefix = "\n"
        with self.path.open("a", encoding="utf-8") as fh:
            fh.write(prefix + stable_json({"key": key, "params": params, "outcome": outcome}) + "\n")
        self._index[key] = outcome
        return key

    def __len__(self):
        return len(self._index)
