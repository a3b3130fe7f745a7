"""Tuples of integer linear forms and exact admissibility checking.

A tuple of forms g_i*x + h_i is admissible when, for every prime p, the
residues n mod p at which the product of the forms vanishes cover fewer
than p classes. Only finitely many primes can achieve full coverage: any
p exceeding the tuple length covers at most k < p classes unless some form
has p dividing both its coefficient and its constant. That observation
gives the finite check set used here.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from math import gcd

from .errors import DomainError, ResourceError
from .primality import classify_prime, is_probable_prime
from .sieve import primes_up_to


@dataclass(frozen=True)
class LinearForm:
    """g*x + h with a positive integer coefficient g and integer constant h."""

    g: int
    h: int

    def __post_init__(self):
        if self.g < 1:
            raise DomainError("form coefficient must be a positive integer")

    def value(self, n: int) -> int:
        return self.g * n + self.h


@dataclass(frozen=True)
class KTuple:
    """An ordered tuple of pairwise distinct linear forms."""

    forms: tuple[LinearForm, ...]

    def __post_init__(self):
        if len(self.forms) < 1:
            raise DomainError("a tuple needs at least one form")
        if len({(f.g, f.h) for f in self.forms}) != len(self.forms):
            raise DomainError("forms must be pairwise distinct")

    @property
    def k(self) -> int:
        return len(self.forms)


@dataclass(frozen=True)
class AdmissibilityReport:
    """Verdict plus the evidence examined to reach it.

    witness is (p, covered) for the first prime whose residue classes are
    fully covered; present exactly when the tuple is inadmissible.
    """

    admissible: bool
    witness: tuple[int, int] | None
    checked_primes: tuple[int, ...]


def make_tuple(pairs) -> KTuple:
    return KTuple(tuple(LinearForm(int(g), int(h)) for g, h in pairs))


def residue_coverage(t: KTuple, p: int) -> set[int]:
    """The set {n mod p : prod_i (g_i*n + h_i) = 0 mod p}, computed exactly.

    A form with p not dividing g contributes its single root; a form with
    p dividing both g and h vanishes identically and covers everything; a
    form with p dividing g only contributes nothing.
    """
    if p < 2 or not classify_prime(p)[0]:
        raise DomainError(f"{p} is not prime")
    covered: set[int] = set()
    for f in t.forms:
        g_mod = f.g % p
        if g_mod:
            covered.add(-f.h * pow(g_mod, -1, p) % p)
        elif f.h % p == 0:
            return set(range(p))
    return covered


def _prime_factors_of(d: int, trial_limit: int = 10**6) -> set[int]:
    """Distinct prime factors by trial division, with a primality test
    mopping up the cofactor. Composite cofactors past the trial bound are a
    resource error, not a wrong answer."""
    out: set[int] = set()
    while d % 2 == 0:
        out.add(2)
        d //= 2
    f = 3
    while f * f <= d and f <= trial_limit:
        while d % f == 0:
            out.add(f)
            d //= f
        f += 2
    if d > 1:
        if f * f > d or is_probable_prime(d):
            out.add(d)
        else:
            raise ResourceError(
                f"cannot factor {d} within trial bound {trial_limit}"
            )
    return out


def _check_primes(t: KTuple) -> list[int]:
    """Finite prime set deciding admissibility: every p <= k, plus every
    prime dividing both g_i and h_i of some form."""
    candidates = set(primes_up_to(t.k))
    for f in t.forms:
        d = gcd(f.g, f.h)
        if d > 1:
            candidates |= _prime_factors_of(d)
    return sorted(candidates)


def is_admissible(t: KTuple) -> AdmissibilityReport:
    """Decide admissibility exactly, checking primes in increasing order."""
    checked: list[int] = []
    for p in _check_primes(t):
        checked.append(p)
        covered = residue_coverage(t, p)
        if len(covered) == p:
            return AdmissibilityReport(False, (p, len(covered)), tuple(checked))
    return AdmissibilityReport(True, None, tuple(checked))


# text format: one form per line, "g*x+h" or "g*x-h", no leading zeros
_FORM_RE = re.compile(r"^([1-9][0-9]*)\*x([+-])(0|[1-9][0-9]*)$")
_INT_RE = re.compile(r"^-?(0|[1-9][0-9]*)$")
_POSINT_RE = re.compile(r"^[1-9][0-9]*$")


def format_form_text(f: LinearForm) -> str:
    sign = "+" if f.h >= 0 else "-"
    return f"{f.g}*x{sign}{abs(f.h)}"


def parse_form_text(line: str) -> LinearForm:
    m = _FORM_RE.match(line)
    if m is None:
        raise DomainError(f"malformed linear form {line!r}")
    g = int(m.group(1))
    h = int(m.group(3))
    if m.group(2) == "-":
        if h == 0:
            raise DomainError(f"malformed linear form {line!r}: -0 constant")
        h = -h
    return LinearForm(g, h)


def format_tuple_text(t: KTuple) -> str:
    return "".join(format_form_text(f) + "\n" for f in t.forms)


def parse_tuple_text(text: str) -> KTuple:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise DomainError("empty tuple text")
    return KTuple(tuple(parse_form_text(line.strip()) for line in lines))


def format_tuple_json(t: KTuple) -> str:
    return json.dumps([[str(f.g), str(f.h)] for f in t.forms])


def parse_tuple_json(text: str) -> KTuple:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"malformed tuple JSON: {exc}") from exc
    if not isinstance(data, list):
        raise DomainError("tuple JSON must be an array of [g, h] pairs")
    forms = []
    for item in data:
        if not (isinstance(item, list) and len(item) == 2
                and all(isinstance(x, str) for x in item)):
            raise DomainError("each entry must be a pair of decimal strings")
        g_str, h_str = item
        if not _POSINT_RE.match(g_str):
            raise DomainError(f"coefficient {g_str!r} is not a positive decimal integer")
        if not _INT_RE.match(h_str):
            raise DomainError(f"constant {h_str!r} is not a decimal integer")
        forms.append(LinearForm(int(g_str), int(h_str)))
    return KTuple(tuple(forms))
