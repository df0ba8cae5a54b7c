"""Density samples and the payoff landscape of the sawtooth witness.

Writes two CSV files into ``--outdir``:

* ``density.csv``: z, f(z), F(z)
* ``deviations.csv``: for each candidate i, the payoff of moving alone to x
  (limit-delta semantics), next to its current vote share
"""

import argparse
import csv
import os

import numpy as np

from hotelling.density import sawtooth_witness
from hotelling.game import Profile, utilities
from hotelling.solver import deviation_payoff, epsilon_of


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", default="sawtooth_out")
    ap.add_argument("--n", type=int, default=2201)
    args = ap.parse_args()
    os.makedirs(args.outdir, exist_ok=True)

    dist = sawtooth_witness()
    prof = Profile((3 / 22, 0.5, 19 / 22))
    z = np.linspace(0, 1, args.n)
    with open(os.path.join(args.outdir, "density.csv"), "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["z", "f", "F"])
        w.writerows(zip(z, dist.pdf(z), dist.cdf(z)))

    current = utilities(dist, prof).totals
    with open(os.path.join(args.outdir, "deviations.csv"), "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["candidate", "x", "payoff", "current"])
        for i in range(prof.m):
            others = set(prof.positions[:i] + prof.positions[i + 1:])
            for x in z:
                if x in others:
                    continue
                w.writerow([i + 1, x, deviation_payoff(dist, prof, i, float(x)), current[i]])

    rep = epsilon_of(dist, prof)
    print(f"epsilon = {rep.epsilon!r} (1/12 = {1 / 12!r})")
    for o in rep.outcomes:
        print(f"  candidate {o.candidate + 1}: best move to {o.location:.6f} ({o.side.value}), "
              f"gain {o.gain:.6f}")


if __name__ == "__main__":
    main()
