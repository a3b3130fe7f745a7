"""Segmented sieve of Eratosthenes and indexed access to progression primes.

Everything downstream sits on this module: plain prime enumeration up to a
height, and the lazily extended 1-based index into the primes congruent to
a fixed residue a modulo q. Heights are bounded by a hard ceiling so that
searches whose termination is only guaranteed asymptotically fail cleanly
instead of running away.
"""

from __future__ import annotations

import os
import struct
from bisect import bisect_right
from dataclasses import dataclass, field
from itertools import compress
from math import gcd, isqrt, log
from typing import Iterator

import numpy as np

from .errors import DomainError, ResourceError

DEFAULT_SEGMENT_WIDTH = 1 << 16
DEFAULT_HEIGHT_CEILING = 1 << 40

_MAGIC = b"SEGSIEV1"


def _env_budget_bytes() -> int | None:
    raw = os.environ.get("SHIU_SIEVE_BUDGET_MB")
    if raw is None:
        return None
    try:
        mb = int(raw)
    except ValueError as exc:
        raise DomainError(f"SHIU_SIEVE_BUDGET_MB must be an integer, got {raw!r}") from exc
    if mb <= 0:
        raise DomainError("SHIU_SIEVE_BUDGET_MB must be positive")
    return mb << 20


@dataclass(frozen=True)
class SieveConfig:
    """Knobs for all sieving work.

    segment_width: numbers sieved per chunk; results never depend on it.
    height_ceiling: hard upper bound on any number examined.
    budget_bytes: memory cap per allocation (defaults to SHIU_SIEVE_BUDGET_MB).
    cache: optional preloaded segment store consulted before sieving.
    """

    segment_width: int = DEFAULT_SEGMENT_WIDTH
    height_ceiling: int = DEFAULT_HEIGHT_CEILING
    budget_bytes: int | None = field(default_factory=_env_budget_bytes)
    cache: "SegmentCache | None" = None

    def __post_init__(self):
        if self.segment_width < 8:
            raise DomainError("segment_width must be at least 8")
        if self.height_ceiling < 4:
            raise DomainError("height_ceiling must be at least 4")

    def effective_width(self) -> int:
        if self.budget_bytes is not None and self.budget_bytes < self.segment_width:
            return max(8, self.budget_bytes)
        return self.segment_width

    def check_allocation(self, nbytes: int) -> None:
        if self.budget_bytes is not None and nbytes > self.budget_bytes:
            raise ResourceError(
                f"sieve needs {nbytes} bytes, over the {self.budget_bytes} byte budget"
            )


def _simple_flags(n: int) -> bytearray:
    """Byte-per-number primality flags for [0, n]."""
    if n < 1:
        return bytearray(n + 1)
    flags = bytearray([1]) * (n + 1)
    flags[0] = flags[1] = 0
    for p in range(2, isqrt(n) + 1):
        if flags[p]:
            start = p * p
            flags[start::p] = b"\x00" * ((n - start) // p + 1)
    return flags


def _base_primes(limit: int) -> list[int]:
    if limit < 2:
        return []
    flags = _simple_flags(limit)
    return list(compress(range(limit + 1), flags))


def _segment_flags(lo: int, hi: int, base: list[int]) -> bytearray:
    """Flags over [lo, hi): flags[i] set iff lo + i is prime. Requires lo >= 2
    and base to contain every prime <= isqrt(hi - 1)."""
    size = hi - lo
    flags = bytearray([1]) * size
    for p in base:
        if p * p >= hi:
            break
        start = max(p * p, ((lo + p - 1) // p) * p)
        if start >= hi:
            continue
        flags[start - lo::p] = b"\x00" * ((hi - 1 - start) // p + 1)
    return flags


def iter_primes(lo: int, hi: int, config: SieveConfig | None = None) -> Iterator[int]:
    """Yield the primes in [lo, hi) in increasing order."""
    config = config or SieveConfig()
    if hi > config.height_ceiling + 1:
        raise ResourceError(
            f"requested height {hi - 1} exceeds the ceiling {config.height_ceiling}"
        )
    lo = max(lo, 2)
    if hi <= lo:
        return
    base_limit = isqrt(hi - 1)
    config.check_allocation(base_limit + 1)
    base = _base_primes(base_limit)
    width = config.effective_width()
    seg_lo = lo
    while seg_lo < hi:
        seg_hi = min(seg_lo + width, hi)
        flags = None
        if config.cache is not None:
            flags = config.cache.flags_for(seg_lo, seg_hi)
        if flags is None:
            flags = _segment_flags(seg_lo, seg_hi, base)
        yield from compress(range(seg_lo, seg_hi), flags)
        seg_lo = seg_hi


def _prime_list_bytes(y: int) -> int:
    # pi(y) < 1.3 y / ln y for y >= 17; a list slot plus small int runs ~40 bytes
    if y < 17:
        return 512
    return int(1.3 * y / log(y)) * 40


def primes_up_to(y: int, config: SieveConfig | None = None) -> list[int]:
    """All primes in [2, y], ascending. Unlike iter_primes this materializes
    the whole list, so the memory budget is checked against an upper estimate
    of its size."""
    if y < 0:
        raise DomainError("upper bound must be nonnegative")
    config = config or SieveConfig()
    if y > config.height_ceiling:
        raise ResourceError(f"height {y} exceeds the ceiling {config.height_ceiling}")
    config.check_allocation(_prime_list_bytes(y))
    return list(iter_primes(2, y + 1, config))


def _pack_bits(flags: bytearray) -> bytes:
    arr = np.frombuffer(bytes(flags), dtype=np.uint8)
    return np.packbits(arr, bitorder="little").tobytes()


def _unpack_bits(bits: bytes, size: int) -> bytearray:
    arr = np.unpackbits(np.frombuffer(bits, dtype=np.uint8), bitorder="little")
    return bytearray(arr[:size].tobytes())


@dataclass(frozen=True)
class SieveSegment:
    """Primality flags over [lo, hi) as a bitset, LSB-first within each byte."""

    lo: int
    hi: int
    bits: bytes

    def __post_init__(self):
        if self.lo < 2:
            raise DomainError("segment lower bound must be >= 2")
        if self.hi <= self.lo:
            raise DomainError("segment must be nonempty")
        if len(self.bits) != (self.hi - self.lo + 7) // 8:
            raise DomainError("bitset length does not match segment width")

    @classmethod
    def sieve(cls, lo: int, hi: int, config: SieveConfig | None = None) -> "SieveSegment":
        config = config or SieveConfig()
        if hi > config.height_ceiling + 1:
            raise ResourceError(
                f"requested height {hi - 1} exceeds the ceiling {config.height_ceiling}"
            )
        if lo < 2 or hi <= lo:
            raise DomainError("need 2 <= lo < hi")
        config.check_allocation(hi - lo)
        flags = _segment_flags(lo, hi, _base_primes(isqrt(hi - 1)))
        return cls(lo, hi, _pack_bits(flags))

    def flags(self) -> bytearray:
        return _unpack_bits(self.bits, self.hi - self.lo)

    def is_prime(self, n: int) -> bool:
        if not self.lo <= n < self.hi:
            raise DomainError(f"{n} outside segment [{self.lo}, {self.hi})")
        i = n - self.lo
        return bool(self.bits[i >> 3] >> (i & 7) & 1)

    def primes(self) -> list[int]:
        return list(compress(range(self.lo, self.hi), self.flags()))


class SegmentCache:
    """Read-only store of disjoint sieved segments, usable across processes."""

    def __init__(self, segments: list[SieveSegment]):
        self._segments = sorted(segments, key=lambda s: s.lo)
        for prev, cur in zip(self._segments, self._segments[1:]):
            if cur.lo < prev.hi:
                raise DomainError("cache segments overlap")

    def __len__(self) -> int:
        return len(self._segments)

    def coverage(self) -> list[tuple[int, int]]:
        return [(s.lo, s.hi) for s in self._segments]

    def flags_for(self, lo: int, hi: int) -> bytearray | None:
        """Flags over [lo, hi) if fully covered by stored segments, else None."""
        out = bytearray()
        pos = lo
        for seg in self._segments:
            if seg.hi <= pos:
                continue
            if seg.lo > pos:
                return None
            take_hi = min(hi, seg.hi)
            out += seg.flags()[pos - seg.lo:take_hi - seg.lo]
            pos = take_hi
            if pos >= hi:
                return out
        return out if pos >= hi else None


def dump_segments(path: str, height: int, config: SieveConfig | None = None) -> int:
    """Sieve [2, height) and write it as length-prefixed little-endian bitset
    records. Returns the number of records written."""
    config = config or SieveConfig()
    if height > config.height_ceiling + 1:
        raise ResourceError(f"height {height} exceeds the ceiling {config.height_ceiling}")
    if height <= 2:
        raise DomainError("height must be > 2")
    # the dump is read back whole, so budget the full bitset, not one segment
    config.check_allocation((height - 2 + 7) // 8)
    base_limit = isqrt(height - 1)
    config.check_allocation(base_limit + 1)
    base = _base_primes(base_limit)
    width = config.effective_width()
    count = 0
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        lo = 2
        while lo < height:
            hi = min(lo + width, height)
            bits = _pack_bits(_segment_flags(lo, hi, base))
            fh.write(struct.pack("<QQQ", lo, hi, len(bits)))
            fh.write(bits)
            lo = hi
            count += 1
    return count


def load_segments(path: str, config: SieveConfig | None = None) -> SegmentCache:
    config = config or SieveConfig()
    segments = []
    total = 0
    with open(path, "rb") as fh:
        if fh.read(len(_MAGIC)) != _MAGIC:
            raise DomainError(f"{path} is not a sieve cache file")
        while True:
            header = fh.read(24)
            if not header:
                break
            if len(header) != 24:
                raise DomainError(f"{path}: truncated record header")
            lo, hi, nbytes = struct.unpack("<QQQ", header)
            total += nbytes
            config.check_allocation(total)
            bits = fh.read(nbytes)
            if len(bits) != nbytes:
                raise DomainError(f"{path}: truncated bitset")
            segments.append(SieveSegment(lo, hi, bits))
    return SegmentCache(segments)


class APIndex:
    """The primes congruent to a modulo q, indexed from 1 in increasing order.

    Extends itself by sieving further segments on demand and memoizes what it
    has found. Consecutive entries differ by a positive multiple of q, so the
    (k+1)-st entry always exceeds q*k. Mutation is not thread-safe; queries on
    an index that is no longer extending are.
    """

    def __init__(self, q: int, a: int, config: SieveConfig | None = None):
        if q < 3:
            raise DomainError("q must be >= 3")
        if gcd(a, q) != 1:
            raise DomainError("gcd(a,q) != 1")
        self.q = q
        self.a = a % q
        self._config = config or SieveConfig()
        self._primes: list[int] = []
        self._height = 2  # everything below this has been scanned

    @property
    def config(self) -> SieveConfig:
        return self._config

    def nth(self, n: int) -> int:
        if n < 1:
            raise DomainError("progression index is 1-based")
        while len(self._primes) < n:
            self._extend()
        return self._primes[n - 1]

    def extend_to(self, height: int) -> None:
        if height <= self._height:
            return
        if height > self._config.height_ceiling + 1:
            raise ResourceError(
                f"height {height - 1} exceeds the ceiling {self._config.height_ceiling}"
            )
        for p in iter_primes(self._height, height, self._config):
            if p % self.q == self.a:
                self._primes.append(p)
        self._height = height

    def _extend(self) -> None:
        ceiling = self._config.height_ceiling
        if self._height >= ceiling + 1:
            raise ResourceError(
                f"only {len(self._primes)} primes = {self.a} mod {self.q} "
                f"below the ceiling {ceiling}"
            )
        target = max(self._height * 2, self._height + self._config.segment_width)
        self.extend_to(min(target, ceiling + 1))

    def count_up_to(self, y: int) -> int:
        """Number of progression primes <= y."""
        if y >= self._height:
            if y > self._config.height_ceiling:
                raise ResourceError(
                    f"height {y} exceeds the ceiling {self._config.height_ceiling}"
                )
            self.extend_to(y + 1)
        return bisect_right(self._primes, y)

    def known(self) -> tuple[int, ...]:
        """Snapshot of the entries discovered so far."""
        return tuple(self._primes)


def nth_ap_prime(idx: APIndex, n: int) -> int:
    """The n-th smallest prime congruent to idx.a modulo idx.q."""
    return idx.nth(n)


def count_ap_primes(q: int, a: int, y: int, config: SieveConfig | None = None) -> int:
    """Count primes p <= y with p = a mod q."""
    if y < 0:
        raise DomainError("upper bound must be nonnegative")
    return APIndex(q, a, config).count_up_to(y)
