#!/usr/bin/env python3
"""Run the two-branch example machine and check it for functionality.

Prints the output for c1 c2^n c3 r3 r2^n r1 next to both closed forms, then
runs check_functional at a few caps and (unless --skip-full) at the exact
height bound 8 N^4 = 32768, which takes about half a minute.
"""

import argparse
import time
from pathlib import Path

from vptkit import CheckOptions, check_functional, load_machine, transduce

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=5)
    ap.add_argument("--skip-full", action="store_true", help="skip the full-bound run")
    args = ap.parse_args()

    m = load_machine(FIXTURES / "fig1.vpt")
    for n in range(args.max_n + 1):
        u = m.alphabet.word(["c1"] + ["c2"] * n + ["c3", "r3"] + ["r2"] * n + ["r1"])
        outs = transduce(m, u)
        a = "dfcab" + "cabcab" * n + "gh"
        b = "dfc" + "abc" * n + "ab" + "cab" * n + "gh"
        status = "ok" if outs == {a} and a == b else "MISMATCH"
        print(f"n={n}: {sorted(outs)} {status}")

    caps = [4, 8, 16]
    if not args.skip_full:
        caps.append(None)
    for h in caps:
        t0 = time.perf_counter()
        v = check_functional(m, CheckOptions(height_cap=h))
        print(f"cap={v.bound}: {v.label} (explored {v.explored} nodes, {time.perf_counter() - t0:.1f}s)")

    mut = load_machine(FIXTURES / "fig1_mutated.vpt")
    v = check_functional(mut, CheckOptions(height_cap=8))
    print(f"mutated: {v.label} on {mut.alphabet.spell(v.witness.input)!r}: "
          f"{v.witness.out1!r} vs {v.witness.out2!r}")


if __name__ == "__main__":
    main()
