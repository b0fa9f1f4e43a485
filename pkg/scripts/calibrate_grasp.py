#!/usr/bin/env python3
"""Calibrate the GRASP quality band against the enumeration oracle.

Rebuilds the seeded random corpus the test suite uses, solves every
instance exactly by brute force, then sweeps the RCL width and reports
how often a fixed-iteration run lands within the quality band.  The
numbers printed here back the threshold asserted in the acceptance
tests; rerun after any heuristic change.
"""

import argparse
import time
from fractions import Fraction

from scpcs.core import evaluate
from scpcs.oracle import brute_force_optimum
from scpcs.solver_heur import GraspConfig, grasp
from scpcs.toys import calibration_corpus


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--iterations", type=int, default=200)
    ap.add_argument("--alphas", default="0.1,0.3,0.5,1.0")
    ap.add_argument("--band", type=float, default=0.05, help="relative gap bound")
    args = ap.parse_args()

    corpus = calibration_corpus(args.seed, args.count)
    t0 = time.monotonic()
    optima = [brute_force_optimum(inst)[0] for inst in corpus]
    print(f"oracle pass over {len(corpus)} instances: {time.monotonic() - t0:.1f}s")

    band = Fraction(str(args.band))
    for alpha in (float(a) for a in args.alphas.split(",")):
        hits = 0
        worst = Fraction(0)
        t0 = time.monotonic()
        for inst, opt in zip(corpus, optima):
            cfg = GraspConfig(
                iterations=args.iterations, rcl_alpha=alpha, seed=args.seed
            )
            total = evaluate(inst, grasp(inst, cfg)[0]).total
            if opt == 0:
                ok = total == 0
            else:
                gap = Fraction(total - opt, opt)
                ok = gap <= band
                worst = max(worst, gap)
            hits += ok
        print(
            f"alpha={alpha:<4} within {100 * args.band:.0f}%: "
            f"{hits}/{len(corpus)}  worst gap {100 * float(worst):.2f}%  "
            f"({time.monotonic() - t0:.1f}s)"
        )


if __name__ == "__main__":
    main()
