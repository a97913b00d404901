"""Append-only cache of computed class data.

One JSON record per line, self-describing with a version field; the cache is
a pure memo and never a source of truth: any cached value is reproducible by
recomputation, and corrupted or version-mismatched lines are skipped.  The
wall-time of the original computation is stored next to the value (outside
it) so that reports built from warm caches are byte-identical to cold runs.
"""

from __future__ import annotations

import json
import os
import sys
import threading
import time
from pathlib import Path
from typing import Callable, Optional

CACHE_VERSION = 1
CACHE_ENV_VAR = "QMPOLAR_CACHE"

KINDS = ("h_imag", "h_real_wide", "h_real_narrow", "pell", "h_quartic", "pi0", "pi_total")


class ResultCache:
    """Line-oriented cache with an optional backing file."""

    def __init__(self, path: Optional[str] = None):
        if path is None:
            path = os.environ.get(CACHE_ENV_VAR)
        self.path = Path(path) if path else None
        self.memory: dict[tuple[str, tuple[int, ...]], tuple[tuple[int, ...], int]] = {}
        self.writable = self.path is not None
        self._lock = threading.Lock()
        if self.path is not None:
            self._load()

    def _warn(self, message: str) -> None:
        print(f"qmpolar cache: {message}", file=sys.stderr)

    def _load(self) -> None:
        if not self.path.exists():
            return
        try:
            lines = self.path.read_text().splitlines()
        except OSError as exc:
            self._warn(f"unreadable cache ({exc}); continuing in memory only")
            self.writable = False
            return
        for line in lines:
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
                if rec.get("v") != CACHE_VERSION:
                    continue  # version mismatch: recompute and rewrite later
                kind = rec["kind"]
                key = tuple(int(k) for k in rec["key"])
                value = tuple(int(x) for x in rec["value"])
                ms = int(rec.get("ms", 0))
                if kind not in KINDS:
                    raise ValueError(f"unknown kind {kind}")
            except (ValueError, KeyError, TypeError) as exc:
                self._warn(f"skipping corrupt cache line: {exc}")
                continue
            self.memory[(kind, key)] = (value, ms)

    def _append(self, kind: str, key: tuple[int, ...], value: tuple[int, ...], ms: int) -> None:
        if not self.writable:
            return
        rec = {"v": CACHE_VERSION, "kind": kind, "key": list(key), "value": list(value), "ms": ms}
        try:
            with self._lock:
                with open(self.path, "a") as fh:
                    fh.write(json.dumps(rec) + "\n")
        except OSError as exc:
            self._warn(f"cache not writable ({exc}); continuing in memory only")
            self.writable = False

    def get_or_compute(
        self, kind: str, key: tuple[int, ...], compute: Callable[[], tuple[int, ...]]
    ) -> tuple[tuple[int, ...], int]:
        """(value, milliseconds of the original computation)."""
        assert kind in KINDS, kind
        with self._lock:
            hit = self.memory.get((kind, key))
        if hit is not None:
            return hit
        start = time.monotonic()
        value = tuple(int(x) for x in compute())
        ms = int((time.monotonic() - start) * 1000)
        with self._lock:
            self.memory[(kind, key)] = (value, ms)
        self._append(kind, key, value, ms)
        return value, ms
