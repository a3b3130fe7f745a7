"""Miller-Rabin primality testing.

Deterministic below 2^64 via a fixed minimal witness set; a strong
probable-prime battery above that, with the certainty reported to callers.
"""

from __future__ import annotations

# Deterministic for all n < 2^64 (witness set from miller-rabin.appspot.com).
_U64_WITNESSES = (2, 325, 9375, 28178, 450775, 9780504, 1795265022)

# Battery used above 2^64: the first twelve primes. Strong probable-prime
# only; no counterexample is known below 3.3e24, but results in this range
# are reported as unproven.
_WIDE_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

DETERMINISTIC_LIMIT = 1 << 64


def _strong_probable_prime(n: int, a: int) -> bool:
    """One strong probable-prime round; n odd, n > 2."""
    a %= n
    if a == 0:
        return True
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _run_battery(n: int, witnesses: tuple[int, ...]) -> bool:
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    return all(_strong_probable_prime(n, a) for a in witnesses)


def is_prime_u64(n: int) -> bool:
    """Deterministic primality for 0 <= n < 2^64."""
    if n >= DETERMINISTIC_LIMIT:
        raise ValueError("value out of deterministic range")
    if n < 2:
        return False
    return _run_battery(n, _U64_WITNESSES)


def is_probable_prime(n: int) -> bool:
    """Strong probable-prime battery for arbitrary n >= 0."""
    if n < 2:
        return False
    return _run_battery(n, _WIDE_WITNESSES)


def classify_prime(n: int) -> tuple[bool, bool]:
    """Return (is_prime, proven): proven is True iff the verdict is deterministic."""
    if n < DETERMINISTIC_LIMIT:
        return is_prime_u64(n), True
    return is_probable_prime(n), False
