"""Disk-backed exact-key response cache.

Translation APIs are paid and drift over time; caching every provider
response keys runs hermetically and makes replays free. Values are JSON
documents stored one file per key; writes are atomic (temp file + rename)
and serialized, reads are lock-free.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import threading
from pathlib import Path


class ResponseCache:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self._write_lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def _path(self, namespace: str, key: str) -> Path:
        digest = hashlib.sha256(key.encode("utf-8")).hexdigest()
        return self.root / namespace / f"{digest}.json"

    def get(self, namespace: str, key: str):
        path = self._path(namespace, key)
        try:
            with open(path, encoding="utf-8") as handle:
                value = json.load(handle)
        except FileNotFoundError:
            with self._write_lock:
                self.misses += 1
            return None
        with self._write_lock:
            self.hits += 1
        return value

    def put(self, namespace: str, key: str, value) -> None:
        path = self._path(namespace, key)
        with self._write_lock:
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as handle:
                    json.dump(value, handle, ensure_ascii=False)
                os.replace(tmp, path)
            finally:
                if os.path.exists(tmp):
                    os.unlink(tmp)
