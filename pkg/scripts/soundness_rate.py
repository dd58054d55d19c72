"""Per-trial rejection rate of nonzero circuits, against the guaranteed epsilon.

Runs single trials on the handcrafted nonzero corpus (and on random
near-cancelling circuits) and prints the observed fraction of rejecting
trials per circuit.  Every nonzero input should be rejected in at least an
epsilon fraction of trials, up to sampling noise.

    python3 scripts/soundness_rate.py --epsilon 1/2 --seeds 200
"""

import argparse
import math
import random
import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from corpus import nonzero_circuits  # noqa: E402
from gen import random_instance  # noqa: E402
from skewpit.oracle import expand_circuit  # noqa: E402
from skewpit.pit import PitParams, pit  # noqa: E402
from skewpit.polyring import PrimeField  # noqa: E402


def rejection_rate(c, field, epsilon, seeds):
    """Fraction of single trials over ``field`` that reject ``c``."""
    rejected = 0
    for seed in range(seeds):
        rejected += not pit(c, PitParams(epsilon=epsilon, trials=1, seed=seed, ring=field)).zero
    return rejected / seeds, seeds


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--epsilon", default="1/2")
    ap.add_argument("--seeds", type=int, default=100)
    ap.add_argument("--random", type=int, default=20, help="extra random nonzero circuits")
    ap.add_argument("--prime", type=int, default=2, help="field for the per-trial measurement")
    args = ap.parse_args(argv)
    eps = Fraction(args.epsilon)
    field = PrimeField(args.prime)

    cases = [(name, c) for name, c, p in nonzero_circuits() if p in (None, args.prime)]
    rng = random.Random(0)
    while len(cases) < len(nonzero_circuits()) + args.random:
        c = random_instance(rng, 1)
        if not expand_circuit(c, modulus=args.prime).is_zero():
            cases.append((f"random-{len(cases)}", c))

    print(f"{'circuit':40s} {'trials':>7s} {'reject rate':>12s}")
    worst = 1.0
    for name, c in cases:
        if expand_circuit(c, modulus=args.prime).is_zero():
            continue  # nonzero over Z but zero over this field
        rate, n = rejection_rate(c, field, eps, args.seeds)
        worst = min(worst, rate)
        # three standard errors below the bound counts as a violation
        flag = "" if rate >= float(eps) - 3 * math.sqrt(float(eps) * (1 - float(eps)) / n) else "  BELOW"
        print(f"{name:40s} {n:7d} {rate:12.3f}{flag}")
    print(f"worst observed rate {worst:.3f}, guaranteed lower bound {float(eps):.3f}")


if __name__ == "__main__":
    main()
