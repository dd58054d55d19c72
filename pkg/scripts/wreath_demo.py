"""Compressed word problem on words far too long to write out.

For N = 2^k, the word [a^N t a^-N, t] is the identity in Z wr Z while
[a^N t a^-N, t a] is not.  Both have length about 2^(k+2) but grammars of
size O(k).

    python3 scripts/wreath_demo.py --log-n 10 20 40 60
"""

import argparse
import time

from skewpit.pit import PitParams
from skewpit.slp import SLPBuilder, lengths
from skewpit.wreath import GroupSpec, cwp


def commutator(n, perturb):
    b = SLPBuilder(1)
    a, ai, t, ti = (b.terminal(s) for s in "aAtT")
    g = b.concat([b.power(a, n), t, b.power(ai, n)])
    g_inv = b.concat([b.power(a, n), ti, b.power(ai, n)])
    h, h_inv = (b.concat([t, a]), b.concat([ai, ti])) if perturb else (t, ti)
    return b.build(b.concat([g, h, g_inv, h_inv]), ("a", "A", "t", "T"))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--log-n", type=int, nargs="+", default=[10, 20, 40, 60])
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    spec = GroupSpec()
    params = PitParams(trials=args.trials, seed=args.seed)
    print(f"{'log2 N':>6s} {'perturbed':>9s} {'rules':>5s} {'length':>22s} {'verdict':>13s} {'s':>6s}")
    for k in args.log_n:
        for perturb in (False, True):
            w = commutator(2**k, perturb)
            t0 = time.perf_counter()
            res = cwp(w, spec, params)
            print(f"{k:6d} {str(perturb):>9s} {len(w.rules):5d} {lengths(w)[w.start][0]:22d} "
                  f"{res.verdict:>13s} {time.perf_counter() - t0:6.2f}")


if __name__ == "__main__":
    main()
