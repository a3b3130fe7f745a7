"""Sweep the diameter bound over a (q, k) grid and fit a power law.

Builds every construction in the grid, tabulates B, then regresses
log B on log q and log k. Prints the table head, the fitted exponents,
and the worst residuals so outliers are easy to spot.

Usage: python3 scripts/bound_scaling.py [--q-max 40] [--k-max 14] [--threads 4]
"""

import argparse
from math import exp, log
from time import perf_counter

from shiu.bounds import LinnikConfig, bound_table, scaling_fit


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q-max", type=int, default=40)
    ap.add_argument("--k-max", type=int, default=14)
    ap.add_argument("--L", type=float, default=5.0)
    ap.add_argument("--threads", type=int, default=4)
    args = ap.parse_args()

    t0 = perf_counter()
    rows = bound_table(
        range(3, args.q_max + 1),
        range(2, args.k_max + 1),
        linnik=LinnikConfig(L=args.L),
        threads=args.threads,
    )
    good = [r for r in rows if r.error is None]
    print(f"built {len(good)}/{len(rows)} grid cells in "
          f"{perf_counter() - t0:.2f}s")

    fit = scaling_fit(good)
    print(f"fit over {fit.n_points} points: "
          f"B ~ {exp(fit.log_constant):.3g} * q^{fit.exponent_q:.3f}"
          f" * k^{fit.exponent_k:.3f} (rms residual {fit.rms_residual:.3f})")

    def predicted(r):
        return (fit.log_constant + fit.exponent_q * log(r.q)
                + fit.exponent_k * log(r.k))

    worst = sorted(good, key=lambda r: abs(log(r.B) - predicted(r)))[-5:]
    print("largest deviations from the fit:")
    for r in reversed(worst):
        ratio = r.B / exp(predicted(r))
        print(f"  q={r.q:3d} a={r.a:3d} k={r.k:3d} t={r.t:3d} "
              f"B={r.B:6d} observed/fitted={ratio:.2f}")

    in_window = sum(r.t_in_window for r in good)
    print(f"shifts inside the (k-1)*max(k,L)+k window: "
          f"{in_window}/{len(good)}")


if __name__ == "__main__":
    main()
