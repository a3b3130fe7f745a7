"""Command-line front end.

One subcommand per library capability: construct and verify certificates,
scan windows, tabulate the diameter bound over a grid, hunt strings of
consecutive congruent primes, and dump a reusable sieve cache. Identical
invocations produce byte-identical output; all diagnostics go to stderr as
one machine-parsable line. Exit statuses: 0 success, 1 bad input or nothing
found, 2 resource limits, 3 internal inconsistency (a bug, reported with a
reproduction bundle).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bounds import LinnikConfig, bound_table, rows_to_csv, rows_to_json
from .construction import (
    ConstructionParams,
    as_ktuple,
    build,
    construction_from_json,
    construction_to_json,
    reverify,
    scan_windows,
    verify_admissible,
    verify_isolation,
    window_reports_to_jsonl,
)
from .errors import (
    DomainError,
    InternalConsistencyError,
    NotFoundError,
    ResourceError,
)
from .search import (
    all_strings,
    diameter_stats,
    first_string,
    stats_to_csv,
    string_to_dict,
    strings_to_jsonl,
)
from .sieve import SieveConfig, dump_segments, load_segments
from .tuples import format_tuple_text


class _Parser(argparse.ArgumentParser):
    """argparse maps usage problems to exit 2, which this tool reserves for
    resource errors; raise them as domain errors instead."""

    def error(self, message):
        raise DomainError(message)


def _build_parser() -> _Parser:
    top = _Parser(prog="shiu", description=__doc__.splitlines()[0])
    top.add_argument("--seed-doc", action="store_true",
                     help="print a computed walkthrough of the q=3, a=1, k=5 "
                          "construction and exit")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"),
                        default=None, help="output format (subcommand default)")
    common.add_argument("--output", default=None, metavar="PATH",
                        help="write output to PATH instead of stdout")
    common.add_argument("--sieve-cache", default=None, metavar="PATH",
                        help="preload a sieve segment dump")

    sub = top.add_subparsers(dest="subcommand")

    p = sub.add_parser("construct", parents=[common],
                       help="build a certificate for (q, a, k)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, default=None,
                   help="target prime count, carried as metadata")
    p.add_argument("--with-g", action="store_true",
                   help="include the multiplied-out coefficient quotient")

    p = sub.add_parser("verify", parents=[common],
                       help="re-derive a certificate and demand equality")
    p.add_argument("--cert", required=True, metavar="PATH")

    p = sub.add_parser("scan", parents=[common],
                       help="exhaustively primality-test certificate windows")
    p.add_argument("--cert", required=True, metavar="PATH")
    p.add_argument("--n-lo", type=int, required=True)
    p.add_argument("--n-hi", type=int, required=True)
    p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("bounds", parents=[common],
                       help="tabulate the diameter bound over a (q, k) grid")
    p.add_argument("--q-min", type=int, required=True)
    p.add_argument("--q-max", type=int, required=True)
    p.add_argument("--k-min", type=int, required=True)
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--a", type=int, default=None,
                   help="fix one residue (default: all coprime residues)")
    p.add_argument("--L", type=float, default=5.0,
                   help="exponent for the shift-window policy")
    p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("search", parents=[common],
                       help="scan for runs of consecutive congruent primes")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--cap", type=int, default=10**8)
    p.add_argument("--all", action="store_true", dest="emit_all",
                   help="emit every string below the cap, not just the first")
    p.add_argument("--maximal-only", action="store_true",
                   help="with --all, emit whole maximal runs once")
    p.add_argument("--bucket-width", type=int, default=10,
                   help="histogram bucket width for --all --format csv")
    p.add_argument("--reference-b", type=int, default=None,
                   help="also count diameters at or below this value")

    p = sub.add_parser("sieve-cache", parents=[common],
                       help="sieve up to a height and dump the segments")
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--path", required=True)
    p.add_argument("--segment-width", type=int, default=None)

    return top


def _sieve_config(args) -> SieveConfig:
    cache_path = getattr(args, "sieve_cache", None)
    if cache_path is None:
        return SieveConfig()
    return SieveConfig(cache=load_segments(cache_path))


def _emit(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _pick(args, default: str, allowed: tuple[str, ...]) -> str:
    fmt = args.format or default
    if fmt not in allowed:
        raise DomainError(
            f"format {fmt!r} is not available for this subcommand "
            f"(choose from {', '.join(allowed)})"
        )
    return fmt


def _cmd_construct(args) -> str:
    params = ConstructionParams(q=args.q, a=args.a, k=args.k, m=args.m)
    c = build(params, config=_sieve_config(args))
    fmt = _pick(args, "json", ("json", "text"))
    if fmt == "json":
        return construction_to_json(c, include_g=args.with_g)
    return format_tuple_text(as_ktuple(c))


def _read_cert(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DomainError(f"cannot read certificate {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"malformed certificate JSON: {exc}") from exc
    return data


def _cmd_verify(args) -> str:
    data = _read_cert(args.cert)
    c = reverify(data, config=_sieve_config(args))
    fmt = _pick(args, "text", ("json", "text"))
    if fmt == "json":
        return construction_to_json(c, include_g="g_decimal" in data)
    p = c.params
    return (f"ok: certificate re-derived and checked "
            f"(q={p.q} a={p.a} k={p.k} t={c.t} B={c.B})\n")


def _cmd_scan(args) -> str:
    if args.threads < 1:
        raise DomainError("threads must be >= 1")
    c = construction_from_json(json.dumps(_read_cert(args.cert)))
    reports = scan_windows(c, args.n_lo, args.n_hi, threads=args.threads)
    fmt = _pick(args, "json", ("json", "text"))
    if fmt == "json":
        return window_reports_to_jsonl(reports)
    lines = []
    for r in reports:
        offs = ",".join(str(o) for o in r.prime_offsets)
        flags = "".join((
            " degenerate" if r.degenerate else "",
            "" if r.congruence_ok else " BAD-CONGRUENCE",
            "" if r.isolation_ok else " OFF-OFFSET-PRIME",
            "" if r.primality_proven else " probable-prime",
        ))
        lines.append(f"n={r.n} primes={r.window_prime_count} "
                     f"offsets=[{offs}]{flags}")
    return "\n".join(lines) + "\n"


def _cmd_bounds(args) -> str:
    if args.threads < 1:
        raise DomainError("threads must be >= 1")
    rows = bound_table(
        range(args.q_min, args.q_max + 1),
        range(args.k_min, args.k_max + 1),
        a=args.a,
        linnik=LinnikConfig(L=args.L),
        config=_sieve_config(args),
        threads=args.threads,
    )
    fmt = _pick(args, "csv", ("json", "csv", "text"))
    if fmt == "json":
        return rows_to_json(rows)
    return rows_to_csv(rows)


def _cmd_search(args) -> str:
    config = _sieve_config(args)
    if not args.emit_all:
        s = first_string(args.q, args.a, args.m, cap=args.cap, config=config)
        fmt = _pick(args, "json", ("json", "text"))
        if fmt == "json":
            return json.dumps(string_to_dict(s)) + "\n"
        primes = ",".join(str(p) for p in s.primes)
        return (f"q={s.q} a={s.a} m={s.m} start_index={s.start_index} "
                f"diameter={s.diameter} primes={primes}\n")
    stream = all_strings(args.q, args.a, args.m, cap=args.cap,
                         maximal_only=args.maximal_only, config=config)
    fmt = _pick(args, "json", ("json", "csv"))
    if fmt == "json":
        return strings_to_jsonl(stream)
    stats = diameter_stats(stream, bucket_width=args.bucket_width,
                           reference_b=args.reference_b)
    return stats_to_csv(stats)


def _cmd_sieve_cache(args) -> str:
    kwargs = {}
    if args.segment_width is not None:
        kwargs["segment_width"] = args.segment_width
    config = SieveConfig(**kwargs)
    n = dump_segments(args.path, args.height, config)
    fmt = _pick(args, "text", ("json", "text"))
    if fmt == "json":
        payload = {"path": args.path, "height": args.height, "segments": n}
        return json.dumps(payload) + "\n"
    return f"wrote {n} segments covering [2, {args.height}] to {args.path}\n"


def _seed_doc() -> str:
    params = ConstructionParams(q=3, a=1, k=5)
    c = build(params)
    report = verify_admissible(c)
    blocking = verify_isolation(c)
    offs = ", ".join(str(o) for o in c.offsets)
    facs = " * ".join(str(p) for p in c.g_factors)
    sample = "; ".join(f"{h} -> {p}" for h, p in blocking[:6])
    lo, hi = c.offsets[0], c.offsets[-1]
    lines = [
        "How to force consecutive primes into one residue class",
        "======================================================",
        "",
        f"Worked example with q = {params.q}, a = {params.a}, k = {params.k}.",
        "",
        f"1. List the primes congruent to {params.a} mod {params.q} in order.",
        f"   The first few are {offs}, ...",
        "",
        "2. Find the least shift t >= 0 so that the k primes starting at",
        "   position t+1 satisfy two size conditions: k below the first of",
        f"   them, and the last below the square of the first. Here t = {c.t}",
        f"   works: {params.k} < {lo} and {hi} < {lo * lo} = {lo}^2.",
        f"   These k primes become the offsets: {offs}.",
        "",
        f"3. Multiply every prime up to {hi} that is not an offset:",
        f"   g = {facs} = {c.g_value()}.",
        f"   The common coefficient of the tuple is g*q = {c.coefficient()}.",
        "",
        "4. The forms g*q*x + offset make an admissible tuple (verified:",
        f"   admissible = {report.admissible}). Each prime p dividing g*q",
        "   divides no offset, and each other small prime leaves at least",
        "   one residue class uncovered, so no prime kills every value.",
        "",
        f"5. Isolation: each of the {len(blocking)} other integers h between",
        f"   {lo} and {hi} shares a prime factor with g*q ({sample}; ...),",
        "   so g*q*n + h is composite for every n >= 1.",
        "",
        "6. Consequence: for n >= 1, any primes in the window",
        f"   [g*q*n + {lo}, g*q*n + {hi}] sit at the offsets. They are",
        f"   consecutive primes, every one congruent to {params.a} mod"
        f" {params.q},",
        f"   and they fit in an interval of length B = {c.B}.",
        "",
        "If some n puts m primes among the k offsets, those are m",
        f"consecutive primes, congruent to {params.a} mod {params.q}, at most"
        f" {c.B} apart.",
        "",
    ]
    return "\n".join(lines)


_HANDLERS = {
    "construct": _cmd_construct,
    "verify": _cmd_verify,
    "scan": _cmd_scan,
    "bounds": _cmd_bounds,
    "search": _cmd_search,
    "sieve-cache": _cmd_sieve_cache,
}


def _diagnose(kind: str, exc: Exception) -> None:
    print(f"error: {kind}: {exc}", file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.seed_doc:
            sys.stdout.write(_seed_doc())
            return 0
        if args.subcommand is None:
            raise DomainError("a subcommand is required (see --help)")
        _emit(args, _HANDLERS[args.subcommand](args))
        return 0
    except NotFoundError as exc:
        _diagnose("not-found", exc)
        return 1
    except DomainError as exc:
        _diagnose("domain", exc)
        return 1
    except ResourceError as exc:
        _diagnose("resource", exc)
        return 2
    except InternalConsistencyError as exc:
        _diagnose("internal", exc)
        bundle = {"argv": argv, "context": exc.context}
        print(json.dumps(bundle), file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
