#!/usr/bin/env python3
"""Compare check_functional against the brute-force oracle on random VPTs."""

import argparse
import time
from collections import Counter

from vptkit import CheckOptions, brute_functional, check_functional, transduce
from vptkit.randgen import VptShape, random_vpt


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=200)
    ap.add_argument("--start", type=int, default=0)
    ap.add_argument("--max-len", type=int, default=12, help="oracle input-length bound")
    ap.add_argument("--cap", type=int, default=6, help="height cap for the symbolic check")
    ap.add_argument("--states", type=int, default=3)
    args = ap.parse_args()

    shape = VptShape(max_states=args.states)
    tally: Counter = Counter()
    disagreements = []
    t0 = time.perf_counter()
    for seed in range(args.start, args.start + args.seeds):
        t = random_vpt(seed, shape)
        v = check_functional(t, CheckOptions(height_cap=args.cap))
        o = brute_functional(t, args.max_len)
        tally[(v.label, o.verdict)] += 1
        if o.verdict == "non-functional" and v.functional is not False:
            disagreements.append((seed, "missed"))
        if v.functional is False:
            w = v.witness
            if w.out1 == w.out2 or not {w.out1, w.out2} <= transduce(t, w.input):
                disagreements.append((seed, "bad witness"))
    for (label, verdict), k in sorted(tally.items()):
        print(f"{k:5d}  check={label:24s} oracle={verdict}")
    print(f"disagreements: {disagreements or 'none'}  ({time.perf_counter() - t0:.1f}s)")
    return 1 if disagreements else 0


if __name__ == "__main__":
    raise SystemExit(main())
