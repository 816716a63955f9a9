"""On-disk cache for ball and series records.

A cache file is ``MAGIC | version (4 bytes) | sha256(body) | body`` with
a JSON body. Keys hash the format version together with the inputs, so a
version bump or any change of inputs lands on a different file. A file
whose checksum or header does not match is deleted and recomputed.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import struct
from fractions import Fraction
from pathlib import Path
from typing import Callable

from .growth import BallRecord
from .series import Series

FORMAT_VERSION = 1
MAGIC = b"WGC\x00"
log = logging.getLogger("wreathgrowth.cache")


def digest(obj) -> str:
    """Stable digest of a JSON-serialisable input description."""
    text = json.dumps(obj, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(text.encode()).hexdigest()


def cache_key(kind: str, inputs: dict, version: int = FORMAT_VERSION) -> str:
    return f"{kind}-v{version}-{digest(inputs)[:32]}"


def ball_to_payload(rec: BallRecord) -> dict:
    spheres = [list(p) for p in rec.spheres] if rec.weighted else list(rec.spheres)
    return {"kind": "ball", "radius": rec.radius, "weighted": rec.weighted, "spheres": spheres}


def ball_from_payload(d: dict) -> BallRecord:
    spheres = [tuple(p) for p in d["spheres"]] if d["weighted"] else list(d["spheres"])
    return BallRecord(d["radius"], {}, spheres, d["weighted"])


def series_to_payload(s: Series) -> dict:
    return {"kind": "series", "coeffs": [[c.numerator, c.denominator] for c in s.coeffs]}


def series_from_payload(d: dict) -> Series:
    return Series([Fraction(n, m) for n, m in d["coeffs"]])


class Cache:
    def __init__(self, root: str | os.PathLike, version: int = FORMAT_VERSION):
        self.root = Path(root).expanduser()
        self.version = version

    def path(self, key: str) -> Path:
        return self.root / f"{key}.wgc"

    def save(self, key: str, payload: dict) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        body = json.dumps(payload, sort_keys=True).encode()
        blob = MAGIC + struct.pack("<I", self.version) + hashlib.sha256(body).digest() + body
        p = self.path(key)
        tmp = p.with_suffix(".tmp")
        tmp.write_bytes(blob)
        tmp.replace(p)
        return p

    def load(self, key: str) -> dict | None:
        """Payload for ``key``, or None when missing or invalid (invalid files are removed)."""
        p = self.path(key)
        if not p.exists():
            return None
        blob = p.read_bytes()
        head = len(MAGIC) + 4 + 32
        ok = len(blob) >= head and blob.startswith(MAGIC)
        if ok:
            (version,) = struct.unpack("<I", blob[len(MAGIC):len(MAGIC) + 4])
            body = blob[head:]
            ok = version == self.version and hashlib.sha256(body).digest() == blob[len(MAGIC) + 4:head]
        if ok:
            try:
                return json.loads(body)
            except ValueError:
                ok = False
        log.warning("cache file %s is corrupt or stale; recomputing", p)
        p.unlink(missing_ok=True)
        return None

    def get_or_compute(self, key: str, compute: Callable[[], dict]) -> tuple[dict, bool]:
        """(payload, hit)."""
        payload = self.load(key)
        if payload is not None:
            return payload, True
        payload = compute()
        self.save(key, payload)
        return payload, False
