"""Measuring the interval length B(q, a, k) across parameter ranges.

B is the diameter of the chosen offsets, so it depends only on where the
first k usable progression primes sit. The table builder sweeps (q, a, k)
grids, records B next to the shift t that produced it, and checks t against
the window suggested by a Linnik-type bound on the least progression prime.
A small least-squares helper fits log B against log q and log k to expose
the empirical growth rate.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import ceil, gcd, log
from typing import NamedTuple

import numpy as np

from .construction import ConstructionParams, build
from .errors import DomainError, ShiuError
from .sieve import APIndex, SieveConfig

DEFAULT_LINNIK_EXPONENT = 5.0


@dataclass(frozen=True)
class LinnikConfig:
    """Window policy: with p(q, a) << q^L, the shift t should fall within
    t <= (k - 1) * M + k where M = max(k, ceil(L))."""

    L: float = DEFAULT_LINNIK_EXPONENT

    def __post_init__(self):
        if self.L <= 0:
            raise DomainError("L must be positive")

    def m_for(self, k: int) -> int:
        return max(k, ceil(self.L))

    def window_cap(self, k: int) -> int:
        return (k - 1) * self.m_for(k) + k


def verify_t_window(
    q: int,
    a: int,
    k: int,
    linnik: LinnikConfig | None = None,
    *,
    idx: APIndex | None = None,
    config: SieveConfig | None = None,
) -> bool:
    """Whether some shift t inside the window {0, ..., (k-1)*M + k}
    satisfies k < l_{t+1} and l_{t+k} < l_{t+1}^2, by direct enumeration.

    Deliberately independent of the minimal-shift chooser: this re-derives
    the window claim from scratch. The window is heuristic at small
    parameters, so callers treat False as a data point, not an error.
    """
    if k < 2:
        raise DomainError("k must be >= 2")
    linnik = linnik or LinnikConfig()
    if idx is None:
        idx = APIndex(q, a, config or SieveConfig())
    for t in range(linnik.window_cap(k) + 1):
        first = idx.nth(t + 1)
        if k < first and idx.nth(t + k) < first * first:
            return True
    return False


@dataclass(frozen=True)
class BoundRow:
    """One grid cell. Rows where the build failed carry error text and None
    measurements so a sweep never dies half way through."""

    q: int
    a: int
    k: int
    t: int | None
    B: int | None
    window_cap: int
    t_in_window: bool | None
    error: str | None = None


def measure_b(
    q: int,
    a: int,
    k: int,
    *,
    idx: APIndex | None = None,
    config: SieveConfig | None = None,
    linnik: LinnikConfig | None = None,
) -> BoundRow:
    linnik = linnik or LinnikConfig()
    cap = linnik.window_cap(k)
    try:
        c = build(ConstructionParams(q=q, a=a, k=k), idx=idx, config=config)
    except ShiuError as exc:
        return BoundRow(q=q, a=a, k=k, t=None, B=None, window_cap=cap,
                        t_in_window=None, error=str(exc))
    return BoundRow(q=q, a=a, k=k, t=c.t, B=c.B, window_cap=cap,
                    t_in_window=c.t <= cap)


def _residues(q: int) -> list[int]:
    return [a for a in range(1, q) if gcd(a, q) == 1]


def bound_table(
    q_range,
    k_range,
    *,
    a: int | None = None,
    linnik: LinnikConfig | None = None,
    config: SieveConfig | None = None,
    threads: int = 1,
) -> list[BoundRow]:
    """Sweep the grid in lexicographic (q, a, k) order. With a=None every
    residue coprime to each q is measured. One progression index is shared
    across the k column so the sieve work is paid once per (q, a)."""
    linnik = linnik or LinnikConfig()
    config = config or SieveConfig()
    qs = sorted(set(q_range))
    ks = sorted(set(k_range))
    if not qs or not ks:
        raise DomainError("empty q or k range")
    if any(q < 3 for q in qs):
        raise DomainError("q must be >= 3")
    if any(k < 2 for k in ks):
        raise DomainError("k must be >= 2")
    pairs = []
    for q in qs:
        for res in (_residues(q) if a is None else [a]):
            if gcd(res, q) != 1:
                raise DomainError("gcd(a,q) != 1")
            pairs.append((q, res))

    def column(pair: tuple[int, int]) -> list[BoundRow]:
        q, res = pair
        idx = APIndex(q, res, config)
        return [measure_b(q, res, k, idx=idx, linnik=linnik) for k in ks]

    if threads <= 1:
        columns = [column(p) for p in pairs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            columns = list(pool.map(column, pairs))
    return [row for col in columns for row in col]


class ScalingFit(NamedTuple):
    exponent_q: float
    exponent_k: float
    log_constant: float
    rms_residual: float
    n_points: int


def scaling_fit(rows: list[BoundRow]) -> ScalingFit:
    """Least squares for log B ~ c + e_q*log q + e_k*log k over the rows that
    measured successfully. A column with no variation (all q equal, or all k
    equal) is dropped from the design and its exponent reported as 0; with
    both constant there is nothing to fit."""
    good = [r for r in rows if r.B is not None and r.B > 0]
    if len(good) < 2:
        raise DomainError("need at least two successful rows to fit")
    qs = np.array([log(r.q) for r in good])
    ks = np.array([log(r.k) for r in good])
    ys = np.array([log(r.B) for r in good])
    vary_q = not np.allclose(qs, qs[0])
    vary_k = not np.allclose(ks, ks[0])
    if not vary_q and not vary_k:
        raise DomainError("all rows share one (q, k); nothing to fit")
    cols = [np.ones_like(ys)]
    if vary_q:
        cols.append(qs)
    if vary_k:
        cols.append(ks)
    design = np.column_stack(cols)
    coef, *_ = np.linalg.lstsq(design, ys, rcond=None)
    pos = 1
    e_q = e_k = 0.0
    if vary_q:
        e_q = float(coef[pos])
        pos += 1
    if vary_k:
        e_k = float(coef[pos])
    resid = ys - design @ coef
    rms = float(np.sqrt(np.mean(resid**2)))
    return ScalingFit(exponent_q=e_q, exponent_k=e_k,
                      log_constant=float(coef[0]), rms_residual=rms,
                      n_points=len(good))


# -- table serialization -------------------------------------------------

CSV_HEADER = ("q", "a", "k", "t", "B", "window_cap", "t_in_window")


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def rows_to_csv(rows: list[BoundRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow([_cell(getattr(r, f)) for f in CSV_HEADER])
    return buf.getvalue()


def rows_to_json(rows: list[BoundRow]) -> str:
    payload = [
        {
            "q": r.q, "a": r.a, "k": r.k, "t": r.t, "B": r.B,
            "window_cap": r.window_cap, "t_in_window": r.t_in_window,
            "error": r.error,
        }
        for r in rows
    ]
    return json.dumps(payload, indent=2) + "\n"
