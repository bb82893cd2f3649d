"""Compare the witness pairs with and without T1's extra a-edge into the fork.

For each (m, k, d) prints the number of PDL disagreements at the initial
states and the FLC verdicts, for both structure variants.
"""

import argparse

from pdlflc.automata import language
from pdlflc.lab import Bounds, run_an_b_an_experiment, run_diabox_experiment
from pdlflc.properties import anban_pda, anbn_pda, b_star

PARAMS = ((1, 1, 1), (1, 2, 1))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size-cap", type=int, default=5)
    args = ap.parse_args(argv)
    cases = {
        "diabox": (run_diabox_experiment, [language("ANBN", anbn_pda()),
                                           language("BSTAR", b_star())]),
        "anban": (run_an_b_an_experiment, [language("ANBAN", anban_pda())]),
    }
    for family, (run, langs) in cases.items():
        for cross in (False, True):
            r = run(langs, 1, Bounds(size_cap=args.size_cap, cross_edge=cross))
            v = r.flc_verdicts
            print(f"{family:7} cross_edge={str(cross):5} m={r.m} k={r.k} l={r.l} "
                  f"formulas={r.formulas_checked} disagreements={len(r.disagreements)} "
                  f"flc={v['t1']}/{v['t2']}")
            for d in r.disagreements[:3]:
                print(f"    {d['formula']}: T1={d['t1']} T2={d['t2']}")


if __name__ == "__main__":
    main()
