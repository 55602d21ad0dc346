#!/usr/bin/env python3
"""Generate tradeoff-curve data for plotting.

Writes one CSV per bias value with columns lambda,epsilon,p_bob,p_alice,
combined, and prints the endpoint rows as a sanity check.
"""

import argparse
from pathlib import Path

from wotsim.tradeoff import curve


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=129)
    parser.add_argument("--epsilons", type=float, nargs="+", default=[0.0, 0.01])
    parser.add_argument("--outdir", type=Path, default=Path("out"))
    args = parser.parse_args()

    args.outdir.mkdir(parents=True, exist_ok=True)
    for eps in args.epsilons:
        rows = curve(eps, args.points)
        path = args.outdir / f"curve_eps{eps:g}.csv"
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("lambda,epsilon,p_bob,p_alice,combined\n")
            for p in rows:
                fh.write(f"{p.lam:.12g},{p.epsilon:.12g},{p.b_bound:.12g},"
                         f"{p.a_bound:.12g},{p.combined:.12g}\n")
        print(f"{path}: {len(rows)} rows, "
              f"endpoints (p_bob, p_alice) = ({rows[0].b_bound:g}, {rows[0].a_bound:g}) "
              f"and ({rows[-1].b_bound:g}, {rows[-1].a_bound:g})")


if __name__ == "__main__":
    main()
