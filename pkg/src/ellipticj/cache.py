"""Write-once memo tables and their on-disk format.

File layout (all integers little-endian)::

    magic      8 bytes   b"ELLJMEMO"
    version    u32
    n          u32       ambient dimension
    n_sigma    u64       number of sigma records
    n_phi      u64       number of phi records
    records    sigma records, then phi records, each sorted by key bytes
    checksum   32 bytes  SHA-256 of everything above

A sigma record is ``d:u32, counts[0..n]:u32, value:bigint``; a phi record is
``d:u32, i:u32, j:u32, counts[0..n]:u32, numerator:bigint,
denominator:bigint``. A bigint is a sign byte (0 or 1), a u32 byte length
and the little-endian magnitude.
"""
from __future__ import annotations

import hashlib
import os
import struct
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Hashable, NamedTuple

MAGIC = b"ELLJMEMO"
VERSION = 1
CACHE_ENV = "ELLIPTICJ_CACHE"

_HEADER = struct.Struct("<8sIIQQ")
_U32 = struct.Struct("<I")


class CacheConflictError(RuntimeError):
    """A key was stored twice with different values."""


class CacheFormatError(ValueError):
    """A cache file could not be loaded."""


class SigmaKey(NamedTuple):
    n: int
    d: int
    counts: tuple[int, ...]


class PhiKey(NamedTuple):
    n: int
    d: int
    i: int
    j: int
    counts: tuple[int, ...]


_MISSING = object()


class MemoTable:
    """Dictionary with write-once semantics.

    Writes are serialized by a lock; reads go straight to the dict.
    """

    def __init__(self):
        self._data: dict[Hashable, Any] = {}
        self._lock = threading.Lock()

    def lookup(self, key, default=None):
        return self._data.get(key, default)

    def store(self, key, value) -> None:
        with self._lock:
            old = self._data.get(key, _MISSING)
            if old is _MISSING:
                self._data[key] = value
            elif old != value or type(old) is not type(value):
                raise CacheConflictError(f"conflicting values for {key}: {old!r} vs {value!r}")

    def __contains__(self, key) -> bool:
        return key in self._data

    def __len__(self) -> int:
        return len(self._data)

    def items(self):
        return self._data.items()


@dataclass
class Stats:
    sigma_evals: int = 0
    phi_evals: int = 0
    cache_hits: int = 0

    def as_dict(self) -> dict[str, int]:
        return {"sigma_evals": self.sigma_evals, "phi_evals": self.phi_evals, "cache_hits": self.cache_hits}


@dataclass
class Cache:
    """Memo tables for one ambient dimension."""

    n: int
    sigma: MemoTable = field(default_factory=MemoTable)
    phi: MemoTable = field(default_factory=MemoTable)
    stats: Stats = field(default_factory=Stats)

    def lookup(self, key):
        table = self.sigma if isinstance(key, SigmaKey) else self.phi
        return table.lookup(key)

    def store(self, key, value) -> None:
        if key.n != self.n:
            raise ValueError(f"key for n={key.n} stored in cache for n={self.n}")
        if isinstance(key, SigmaKey):
            if not isinstance(value, int):
                raise TypeError("sigma values are integers")
            self.sigma.store(key, value)
        else:
            self.phi.store(key, Fraction(value))

    def save(self, path: str | os.PathLike) -> None:
        data = encode(self)
        tmp = Path(str(path) + ".tmp")
        tmp.write_bytes(data)
        os.replace(tmp, path)

    @classmethod
    def load(cls, path: str | os.PathLike) -> "Cache":
        return decode(Path(path).read_bytes())


def _enc_bigint(x: int) -> bytes:
    mag = abs(x)
    raw = mag.to_bytes((mag.bit_length() + 7) // 8, "little")
    return bytes([1 if x < 0 else 0]) + _U32.pack(len(raw)) + raw


def _enc_sigma_key(key: SigmaKey) -> bytes:
    return struct.pack(f"<{1 + len(key.counts)}I", key.d, *key.counts)


def _enc_phi_key(key: PhiKey) -> bytes:
    return struct.pack(f"<{3 + len(key.counts)}I", key.d, key.i, key.j, *key.counts)


def encode(cache: Cache) -> bytes:
    sig = sorted(
        (_enc_sigma_key(k), _enc_bigint(v)) for k, v in cache.sigma.items()
    )
    phi = sorted(
        (_enc_phi_key(k), _enc_bigint(v.numerator) + _enc_bigint(v.denominator))
        for k, v in cache.phi.items()
    )
    body = bytearray(_HEADER.pack(MAGIC, VERSION, cache.n, len(sig), len(phi)))
    for k, v in sig:
        body += k + v
    for k, v in phi:
        body += k + v
    return bytes(body) + hashlib.sha256(body).digest()


class _Reader:
    def __init__(self, buf: bytes, pos: int):
        self.buf = buf
        self.pos = pos

    def take(self, size: int) -> bytes:
        end = self.pos + size
        if end > len(self.buf):
            raise CacheFormatError("malformed record: unexpected end of payload")
        out = self.buf[self.pos:end]
        self.pos = end
        return out

    def u32s(self, count: int) -> tuple[int, ...]:
        return struct.unpack(f"<{count}I", self.take(4 * count))

    def bigint(self) -> int:
        sign = self.take(1)[0]
        if sign > 1:
            raise CacheFormatError("malformed record: bad sign byte")
        (size,) = _U32.unpack(self.take(4))
        mag = int.from_bytes(self.take(size), "little")
        return -mag if sign else mag


def decode(data: bytes) -> Cache:
    if len(data) < _HEADER.size + 32:
        raise CacheFormatError("checksum error: file truncated")
    body, digest = data[:-32], data[-32:]
    if hashlib.sha256(body).digest() != digest:
        raise CacheFormatError("checksum error: payload does not match its SHA-256")
    magic, version, n, n_sigma, n_phi = _HEADER.unpack_from(body)
    if magic != MAGIC:
        raise CacheFormatError(f"not a cache file (magic {magic!r})")
    if version != VERSION:
        raise CacheFormatError(f"cache version {version} is not supported (expected {VERSION})")
    cache = Cache(n)
    r = _Reader(body, _HEADER.size)
    try:
        for _ in range(n_sigma):
            d, *counts = r.u32s(n + 2)
            cache.store(SigmaKey(n, d, tuple(counts)), r.bigint())
        for _ in range(n_phi):
            d, i, j, *counts = r.u32s(n + 4)
            num = r.bigint()
            den = r.bigint()
            if den <= 0:
                raise CacheFormatError("malformed record: nonpositive denominator")
            value = Fraction(num, den)
            if value.denominator != den:
                raise CacheFormatError("malformed record: rational not in lowest terms")
            cache.store(PhiKey(n, d, i, j, tuple(counts)), value)
    except CacheConflictError as exc:
        raise CacheFormatError(f"malformed record: duplicate key ({exc})") from exc
    if r.pos != len(body):
        raise CacheFormatError("malformed record: trailing bytes after records")
    return cache


_registry: dict[int, Cache] = {}
_registry_lock = threading.Lock()


def default_cache(n: int) -> Cache:
    """Process-wide cache for P^n, created on first use."""
    with _registry_lock:
        cache = _registry.get(n)
        if cache is None:
            cache = _registry[n] = Cache(n)
        return cache


def install(cache: Cache) -> None:
    """Make ``cache`` the process-wide cache for its ambient dimension."""
    with _registry_lock:
        _registry[cache.n] = cache


def reset() -> None:
    with _registry_lock:
        _registry.clear()
