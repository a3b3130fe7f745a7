"""Building tuples whose prime values are forced consecutive and congruent.

Given a modulus q, a coprime residue a, and a length k, pick the least
shift t for which the progression primes l_{t+1} < ... < l_{t+k} satisfy
k < l_{t+1} and l_{t+k} < l_{t+1}^2. With g the product of every prime up
to l_{t+k} that is not one of those offsets, the forms g*q*x + l_{t+i}
form an admissible tuple, and every other integer in the window
[g*q*n + l_{t+1}, g*q*n + l_{t+k}] shares a factor with g*q. So whatever
primes the window contains sit at the offsets: they are consecutive primes,
all congruent to a modulo q, within an interval of length
B = l_{t+k} - l_{t+1}.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import gcd, prod

from .errors import DomainError, InternalConsistencyError, ResourceError
from .primality import classify_prime
from .sieve import APIndex, SieveConfig, primes_up_to
from .tuples import AdmissibilityReport, KTuple, LinearForm, is_admissible

DEFAULT_SHIFT_CAP = 10**6


@dataclass(frozen=True)
class ConstructionParams:
    """Inputs (q, a, k); m is carried as metadata only and never consulted."""

    q: int
    a: int
    k: int
    m: int | None = None

    def __post_init__(self):
        if self.q < 3:
            raise DomainError("q must be >= 3")
        if gcd(self.a, self.q) != 1:
            raise DomainError("gcd(a,q) != 1")
        if self.k < 2:
            raise DomainError("k must be >= 2")
        if self.m is not None and self.m < 2:
            raise DomainError("m must be >= 2 when given")

    @property
    def residue(self) -> int:
        return self.a % self.q


@dataclass(frozen=True)
class Construction:
    """A complete certificate: shift, offsets, factored coefficient, diameter.

    g_factors lists every prime up to the last offset that is not itself an
    offset; the coefficient g is kept factored and only multiplied out on
    demand.
    """

    params: ConstructionParams
    t: int
    offsets: tuple[int, ...]
    g_factors: tuple[int, ...]
    B: int

    def __post_init__(self):
        k, q, res = self.params.k, self.params.q, self.params.residue
        if self.t < 0:
            raise DomainError("shift must be nonnegative")
        if len(self.offsets) != k:
            raise DomainError(f"expected {k} offsets, got {len(self.offsets)}")
        if any(b <= a for a, b in zip(self.offsets, self.offsets[1:])):
            raise DomainError("offsets must be strictly increasing")
        if any(b <= a for a, b in zip(self.g_factors, self.g_factors[1:])):
            raise DomainError("g_factors must be strictly increasing")
        if not k < self.offsets[0]:
            raise DomainError("need k < first offset")
        if not self.offsets[-1] < self.offsets[0] ** 2:
            raise DomainError("need last offset below the square of the first")
        if any(off % q != res for off in self.offsets):
            raise DomainError("every offset must be congruent to a mod q")
        if set(self.g_factors) & set(self.offsets):
            raise DomainError("g_factors and offsets must be disjoint")
        if self.B != self.offsets[-1] - self.offsets[0]:
            raise DomainError("B must equal last offset minus first offset")

    def g_value(self) -> int:
        """The coefficient quotient multiplied out (can run to hundreds of digits)."""
        return prod(self.g_factors)

    def coefficient(self) -> int:
        """The common form coefficient g*q."""
        return self.g_value() * self.params.q


def choose_t(idx: APIndex, k: int, shift_cap: int = DEFAULT_SHIFT_CAP) -> int:
    """Least t >= 0 with k < l_{t+1} and l_{t+k} < l_{t+1}^2.

    The second condition is not monotone in t, so shifts are tried in order.
    Termination is an asymptotic fact about progression primes, hence the cap.
    """
    if k < 2:
        raise DomainError("k must be >= 2")
    for t in range(shift_cap + 1):
        first = idx.nth(t + 1)
        if k < first and idx.nth(t + k) < first * first:
            return t
    raise ResourceError(f"no admissible shift found with t <= {shift_cap}")


def build(
    params: ConstructionParams,
    *,
    idx: APIndex | None = None,
    config: SieveConfig | None = None,
    shift_cap: int = DEFAULT_SHIFT_CAP,
) -> Construction:
    config = config or (idx.config if idx is not None else SieveConfig())
    if idx is None:
        idx = APIndex(params.q, params.a, config)
    t = choose_t(idx, params.k, shift_cap)
    offsets = tuple(idx.nth(t + i) for i in range(1, params.k + 1))
    chosen = set(offsets)
    g_factors = tuple(p for p in primes_up_to(offsets[-1], config) if p not in chosen)
    return Construction(params, t, offsets, g_factors, offsets[-1] - offsets[0])


def as_ktuple(c: Construction) -> KTuple:
    """The k forms coeff*x + offset with the shared materialized coefficient."""
    coeff = c.coefficient()
    return KTuple(tuple(LinearForm(coeff, h) for h in c.offsets))


def _prime_factors(n: int) -> set[int]:
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.add(n)
    return out


def verify_admissible(c: Construction) -> AdmissibilityReport:
    """Check admissibility by the specialized two-case argument, then
    cross-check against the general tuple checker.

    Case one: a prime dividing the coefficient g*q divides no offset. Case
    two: a prime p <= k not dividing the coefficient sees the offsets in
    fewer than p classes; since every offset is a prime exceeding k, class
    0 is never hit. Disagreement between the two routes is a bug.
    """
    q, res, k = c.params.q, c.params.residue, c.params.k
    coeff_primes = set(c.g_factors) | _prime_factors(q)
    specialized_ok = True
    for p in sorted(coeff_primes):
        if any(off % p == 0 for off in c.offsets):
            specialized_ok = False
    for p in primes_up_to(k):
        if p in coeff_primes:
            continue
        residues = {off % p for off in c.offsets}
        if 0 in residues or len(residues) >= p:
            specialized_ok = False
    report = is_admissible(as_ktuple(c))
    if report.admissible != specialized_ok:
        raise InternalConsistencyError(
            "specialized and general admissibility checks disagree",
            context={"q": q, "a": res, "k": k, "t": c.t,
                     "specialized": specialized_ok, "general": report.admissible},
        )
    return report


def verify_isolation(c: Construction) -> list[tuple[int, int]]:
    """For every non-offset integer h in [first offset, last offset], find a
    prime factor of h that divides the coefficient, so the form value at h is
    composite in every window beyond the degenerate one.

    Such a factor must exist: all prime factors of h lie below the last
    offset, and a value composed of offsets alone would be a single offset
    because the last offset is below the square of the first. Finding none is
    therefore a bug, not an input condition.
    """
    chosen = set(c.offsets)
    blocking: list[tuple[int, int]] = []
    for h in range(c.offsets[0], c.offsets[-1] + 1):
        if h in chosen:
            continue
        p = next((f for f in c.g_factors if h % f == 0), None)
        if p is None:
            raise InternalConsistencyError(
                "interior value with no blocking factor",
                context={"q": c.params.q, "a": c.params.residue,
                         "k": c.params.k, "t": c.t, "h": h},
            )
        blocking.append((h, p))
    return blocking


@dataclass(frozen=True)
class WindowReport:
    """Outcome of exhaustively primality-testing one window.

    prime_offsets: offsets whose form value is prime at this n.
    window_prime_count: primes found anywhere in the window, off-offset ones
    included (they can exist only at n = 0, where a form value may equal a
    small prime dividing the coefficient; such windows are flagged
    degenerate).
    primality_proven: False when any tested value was beyond the range of the
    deterministic test and a probable-prime battery was used instead.
    """

    n: int
    prime_offsets: tuple[int, ...]
    window_prime_count: int
    degenerate: bool
    congruence_ok: bool
    isolation_ok: bool
    primality_proven: bool


def _scan_one(c: Construction, coeff: int, n: int) -> WindowReport:
    q, res = c.params.q, c.params.residue
    base = coeff * n
    found: list[int] = []
    proven = True
    for v in range(base + c.offsets[0], base + c.offsets[-1] + 1):
        is_p, det = classify_prime(v)
        proven = proven and det
        if is_p:
            found.append(v)
    chosen = set(c.offsets)
    prime_offsets = tuple(v - base for v in found if v - base in chosen)
    return WindowReport(
        n=n,
        prime_offsets=prime_offsets,
        window_prime_count=len(found),
        degenerate=(n == 0),
        congruence_ok=all(v % q == res for v in found),
        isolation_ok=len(prime_offsets) == len(found),
        primality_proven=proven,
    )


def scan_windows(
    c: Construction,
    n_lo: int,
    n_hi: int,
    *,
    threads: int = 1,
    max_value: int | None = None,
) -> list[WindowReport]:
    """Exhaustively test every integer in each window for n in [n_lo, n_hi].

    Reports, per n, which offsets carry primes and whether any prime occurs
    off-offset. Results are merged in n order and do not depend on threads.
    """
    if n_lo < 0 or n_hi < n_lo:
        raise DomainError("need 0 <= n_lo <= n_hi")
    coeff = c.coefficient()
    top = coeff * n_hi + c.offsets[-1]
    if max_value is not None and top > max_value:
        raise ResourceError(f"window values reach {top}, over the cap {max_value}")
    ns = range(n_lo, n_hi + 1)
    if threads <= 1:
        return [_scan_one(c, coeff, n) for n in ns]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda n: _scan_one(c, coeff, n), ns))


# -- certificate serialization ------------------------------------------

_CERT_KEYS = ("q", "a", "k", "m", "t", "offsets", "g_factors", "B", "g_decimal")


def construction_to_dict(c: Construction, *, include_g: bool = False) -> dict:
    out: dict = {"q": c.params.q, "a": c.params.a, "k": c.params.k}
    if c.params.m is not None:
        out["m"] = c.params.m
    out["t"] = c.t
    out["offsets"] = list(c.offsets)
    out["g_factors"] = list(c.g_factors)
    out["B"] = c.B
    if include_g:
        out["g_decimal"] = str(c.g_value())
    return out


def construction_to_json(c: Construction, *, include_g: bool = False) -> str:
    return json.dumps(construction_to_dict(c, include_g=include_g), indent=2) + "\n"


def construction_from_dict(data: dict) -> Construction:
    if not isinstance(data, dict):
        raise DomainError("certificate must be a JSON object")
    unknown = set(data) - set(_CERT_KEYS)
    if unknown:
        raise DomainError(f"certificate has unknown fields: {sorted(unknown)}")
    missing = {"q", "a", "k", "t", "offsets", "g_factors", "B"} - set(data)
    if missing:
        raise DomainError(f"certificate is missing fields: {sorted(missing)}")
    for key in ("q", "a", "k", "t", "B"):
        if not isinstance(data[key], int) or isinstance(data[key], bool):
            raise DomainError(f"certificate field {key} must be an integer")
    for key in ("offsets", "g_factors"):
        if not (isinstance(data[key], list)
                and all(isinstance(v, int) and not isinstance(v, bool) for v in data[key])):
            raise DomainError(f"certificate field {key} must be a list of integers")
    m = data.get("m")
    if m is not None and (not isinstance(m, int) or isinstance(m, bool)):
        raise DomainError("certificate field m must be an integer")
    params = ConstructionParams(q=data["q"], a=data["a"], k=data["k"], m=m)
    c = Construction(
        params=params,
        t=data["t"],
        offsets=tuple(data["offsets"]),
        g_factors=tuple(data["g_factors"]),
        B=data["B"],
    )
    g_decimal = data.get("g_decimal")
    if g_decimal is not None:
        if not isinstance(g_decimal, str):
            raise DomainError("certificate field g_decimal must be a decimal string")
        if int(g_decimal) != c.g_value():
            raise DomainError("g_decimal does not match the product of g_factors")
    return c


def construction_from_json(text: str) -> Construction:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"malformed certificate JSON: {exc}") from exc
    return construction_from_dict(data)


def reverify(
    data: dict,
    *,
    config: SieveConfig | None = None,
    shift_cap: int = DEFAULT_SHIFT_CAP,
) -> Construction:
    """Re-derive every certificate field from (q, a, k) and demand an exact
    match, then re-run the admissibility and isolation checks. Certificates
    are self-contained, so no sieve cache is needed."""
    claimed = construction_from_dict(data)
    rebuilt = build(claimed.params, config=config, shift_cap=shift_cap)
    rebuilt_dict = construction_to_dict(rebuilt, include_g="g_decimal" in data)
    mismatched = [key for key in rebuilt_dict
                  if key not in data or data[key] != rebuilt_dict[key]]
    if mismatched or set(data) != set(rebuilt_dict):
        raise DomainError(
            "certificate does not match re-derivation; "
            f"mismatched fields: {sorted(mismatched or set(data) ^ set(rebuilt_dict))}"
        )
    report = verify_admissible(rebuilt)
    if not report.admissible:
        raise InternalConsistencyError(
            "re-derived construction is not admissible",
            context=construction_to_dict(rebuilt),
        )
    verify_isolation(rebuilt)
    return rebuilt


def window_report_to_dict(r: WindowReport) -> dict:
    return {
        "n": r.n,
        "prime_offsets": list(r.prime_offsets),
        "window_prime_count": r.window_prime_count,
        "degenerate": r.degenerate,
        "congruence_ok": r.congruence_ok,
        "isolation_ok": r.isolation_ok,
        "primality_proven": r.primality_proven,
    }


def window_reports_to_jsonl(reports) -> str:
    return "".join(json.dumps(window_report_to_dict(r)) + "\n" for r in reports)
