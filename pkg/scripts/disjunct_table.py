"""Tabulate the unfolded disjuncts of the two witness properties.

For n = 1 .. N prints whether <a>^n [b]^n p (resp. <a>^n [b] <a>^n p) holds
at the initial states of T1 and T2. The fixpoint formula is the union over
all n, so a single n that holds on T2 makes the whole property hold there.
"""

import argparse

from pdlflc.flc import Box, Diamond, Prop, chop, holds
from pdlflc.lts import make_witness_an_b_an, make_witness_diabox


def diabox_disjunct(n):
    return chop(*[Diamond("a")] * n, *[Box("b")] * n, Prop("p"))


def an_b_an_disjunct(n):
    return chop(*[Diamond("a")] * n, Box("b"), *[Diamond("a")] * n, Prop("p"))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=1)
    ap.add_argument("--k", type=int, default=1)
    ap.add_argument("--d", type=int, default=1)
    args = ap.parse_args(argv)
    families = (("diabox", make_witness_diabox, diabox_disjunct),
                ("an_b_an", make_witness_an_b_an, an_b_an_disjunct))
    for name, make, disjunct in families:
        t1, t2 = make(args.m, args.k, args.d)
        top = len(t2.states)
        print(f"{name} (m={args.m}, k={args.k}, d={args.d}); disjuncts that differ are marked")
        for n in range(1, top + 1):
            f = disjunct(n)
            v1, v2 = holds(t1, t1.initial, f), holds(t2, t2.initial, f)
            mark = "  <-" if v1 != v2 else ""
            print(f"  n={n:>2}  T1={str(v1):5}  T2={str(v2):5}{mark}")


if __name__ == "__main__":
    main()
