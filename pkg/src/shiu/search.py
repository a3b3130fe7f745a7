"""Hunting real runs of consecutive primes in one residue class.

The construction promises such runs exist far out; this module looks for the
ones that occur naturally at small height. A run here is m consecutive
primes, consecutive in the full prime sequence, all congruent to a mod q.
The scanner streams primes in order, growing a run while the residue
matches and resetting on any break.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import gcd
from statistics import mean, median
from typing import Iterable, Iterator

from .errors import DomainError, NotFoundError
from .sieve import SieveConfig, iter_primes

DEFAULT_HEIGHT_CAP = 10**8


@dataclass(frozen=True)
class ShiuString:
    """m consecutive primes sharing the residue a mod q.

    start_index is the count of primes below the first member, so the run
    occupies positions start_index+1 .. start_index+len(primes) in the
    prime sequence.
    """

    q: int
    a: int
    start_index: int
    primes: tuple[int, ...]
    diameter: int

    def __post_init__(self):
        if self.q < 3:
            raise DomainError("q must be >= 3")
        if gcd(self.a, self.q) != 1:
            raise DomainError("gcd(a,q) != 1")
        if self.start_index < 0:
            raise DomainError("start_index must be nonnegative")
        if len(self.primes) < 2:
            raise DomainError("a string needs at least two primes")
        if any(b <= a for a, b in zip(self.primes, self.primes[1:])):
            raise DomainError("primes must be strictly increasing")
        res = self.a % self.q
        if any(p % self.q != res for p in self.primes):
            raise DomainError("every member must be congruent to a mod q")
        if self.diameter != self.primes[-1] - self.primes[0]:
            raise DomainError("diameter must equal last prime minus first")

    @property
    def m(self) -> int:
        return len(self.primes)

    @property
    def start_prime(self) -> int:
        return self.primes[0]


def all_strings(
    q: int,
    a: int,
    m: int,
    *,
    cap: int = DEFAULT_HEIGHT_CAP,
    maximal_only: bool = False,
    config: SieveConfig | None = None,
) -> Iterator[ShiuString]:
    """Yield strings of length >= m with every member below cap.

    Default mode emits each length-m window of a qualifying run, so a
    maximal run of r matching primes produces r - m + 1 strings. With
    maximal_only the run is emitted once, whole, after it breaks; a run
    still open at the cap is emitted as found, so its maximality is only
    relative to the scanned range.
    """
    if m < 2:
        raise DomainError("m must be >= 2")
    if cap < 3:
        raise DomainError("cap must be >= 3")
    if q < 3:
        raise DomainError("q must be >= 3")
    if gcd(a, q) != 1:
        raise DomainError("gcd(a,q) != 1")
    config = config or SieveConfig()
    res = a % q

    run: list[int] = []
    run_start_index = 0
    count = 0
    for p in iter_primes(2, cap, config):
        count += 1
        if p % q == res:
            if not run:
                run_start_index = count - 1
            run.append(p)
            if not maximal_only and len(run) >= m:
                window = tuple(run[-m:])
                yield ShiuString(
                    q=q, a=a,
                    start_index=run_start_index + len(run) - m,
                    primes=window,
                    diameter=window[-1] - window[0],
                )
        else:
            if maximal_only and len(run) >= m:
                primes = tuple(run)
                yield ShiuString(q=q, a=a, start_index=run_start_index,
                                 primes=primes,
                                 diameter=primes[-1] - primes[0])
            run.clear()
    if maximal_only and len(run) >= m:
        primes = tuple(run)
        yield ShiuString(q=q, a=a, start_index=run_start_index,
                         primes=primes, diameter=primes[-1] - primes[0])


def first_string(
    q: int,
    a: int,
    m: int,
    *,
    cap: int = DEFAULT_HEIGHT_CAP,
    config: SieveConfig | None = None,
) -> ShiuString:
    """The earliest length-m string, or NotFoundError if none lives below
    cap."""
    for s in all_strings(q, a, m, cap=cap, config=config):
        return s
    raise NotFoundError(
        f"no string of {m} consecutive primes congruent to {a} mod {q} below {cap}"
    )


def verify_string(
    s: ShiuString,
    *,
    config: SieveConfig | None = None,
    check_index: bool = True,
) -> bool:
    """Recheck a claimed string against a fresh sieve.

    The span between the first and last member is re-sieved and must contain
    exactly the claimed primes, which pins down consecutiveness; residues and
    the diameter are rechecked by arithmetic, and with check_index the count
    of primes below the first member is recomputed from scratch.
    """
    config = config or SieveConfig()
    span = tuple(iter_primes(s.primes[0], s.primes[-1] + 1, config))
    if span != s.primes:
        raise DomainError(
            f"span re-sieve found {len(span)} primes where the string claims {s.m}"
        )
    if check_index:
        below = sum(1 for _ in iter_primes(2, s.primes[0], config))
        if below != s.start_index:
            raise DomainError(
                f"start_index is {s.start_index} but {below} primes precede "
                f"{s.primes[0]}"
            )
    return True


# -- diameter summaries ---------------------------------------------------


@dataclass(frozen=True)
class DiameterStats:
    """Summary of string diameters. The None fields appear only for an
    empty input, which yields an empty histogram rather than an error."""

    count: int
    min_diameter: int | None
    median_diameter: float | None
    max_diameter: int | None
    mean_diameter: float | None
    buckets: tuple[tuple[int, int], ...]
    bucket_width: int
    reference_b: int | None = None
    at_or_below_reference: int | None = None


def diameter_stats(
    strings: Iterable[ShiuString],
    *,
    bucket_width: int = 10,
    reference_b: int | None = None,
) -> DiameterStats:
    """Histogram of string diameters; bucket floors are multiples of the
    width. With reference_b set, also count how many diameters fit inside
    that bound."""
    if bucket_width < 1:
        raise DomainError("bucket_width must be >= 1")
    ds = [s.diameter for s in strings]
    if not ds:
        return DiameterStats(count=0, min_diameter=None, median_diameter=None,
                             max_diameter=None, mean_diameter=None,
                             buckets=(), bucket_width=bucket_width,
                             reference_b=reference_b,
                             at_or_below_reference=0 if reference_b is not None else None)
    hist: dict[int, int] = {}
    for d in ds:
        lo = (d // bucket_width) * bucket_width
        hist[lo] = hist.get(lo, 0) + 1
    at_or_below = None
    if reference_b is not None:
        at_or_below = sum(1 for d in ds if d <= reference_b)
    return DiameterStats(
        count=len(ds),
        min_diameter=min(ds),
        median_diameter=float(median(ds)),
        max_diameter=max(ds),
        mean_diameter=float(mean(ds)),
        buckets=tuple(sorted(hist.items())),
        bucket_width=bucket_width,
        reference_b=reference_b,
        at_or_below_reference=at_or_below,
    )


def string_to_dict(s: ShiuString) -> dict:
    return {
        "q": s.q,
        "a": s.a,
        "m": s.m,
        "start_prime": s.start_prime,
        "primes": list(s.primes),
        "diameter": s.diameter,
    }


def strings_to_jsonl(strings: Iterable[ShiuString]) -> str:
    return "".join(json.dumps(string_to_dict(s)) + "\n" for s in strings)


def stats_to_csv(stats: DiameterStats) -> str:
    lines = ["field,value"]
    lines.append(f"count,{stats.count}")
    if stats.count:
        lines.append(f"min_diameter,{stats.min_diameter}")
        lines.append(f"median_diameter,{stats.median_diameter:.6g}")
        lines.append(f"max_diameter,{stats.max_diameter}")
        lines.append(f"mean_diameter,{stats.mean_diameter:.6g}")
    lines.append(f"bucket_width,{stats.bucket_width}")
    for lo, n in stats.buckets:
        lines.append(f"bucket_{lo},{n}")
    if stats.reference_b is not None:
        lines.append(f"reference_b,{stats.reference_b}")
        lines.append(f"at_or_below_reference,{stats.at_or_below_reference}")
    return "\n".join(lines) + "\n"
