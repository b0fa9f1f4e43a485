#!/usr/bin/env python3
"""Write the six-element overlap toy to a canonical instance file.

Handy for exercising the CLI by hand:

    python scripts/make_toy_instance.py toy.scpcs
    scpcs oracle toy.scpcs
    scpcs solve toy.scpcs
"""

import argparse

from scpcs.ingest import write_canonical
from scpcs.toys import overlap_toy


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("output", help="destination .scpcs file")
    ap.add_argument("--set-cost", type=int, default=1)
    ap.add_argument("--penalty-scale", type=int, default=10)
    args = ap.parse_args()

    inst = overlap_toy(set_cost=args.set_cost, penalty_scale=args.penalty_scale)
    with open(args.output, "w") as fh:
        fh.write(write_canonical(inst))
    print(f"wrote {inst.name}: {inst.num_elements} elements, "
          f"{inst.num_subsets} sets, {len(inst.conflicts)} conflicts")


if __name__ == "__main__":
    main()
