"""Verify the tag-strategy construction on batches of random games.

Example:
    python scripts/implementation_batches.py --n 2 3 4 --seeds 25 --class strict-pfg --concept nash
"""

import argparse
import time

from coopimpl.construction import PASS, GammaGame, auto_theta, verify_implementation
from coopimpl.solvers import CONCEPTS
from coopimpl.worth import GENERATOR_CLASSES, WEAK_PFG, generate_random


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--seeds", type=int, default=25)
    ap.add_argument("--class", dest="cls", choices=GENERATOR_CLASSES, default="strict-pfg")
    ap.add_argument("--concept", choices=CONCEPTS, default="nash")
    args = ap.parse_args()

    print(f"{'n':>2} {'class':<11} {'concept':<17} {'pass':>5} {'other':>5} {'max theta':>12} {'seconds':>8}")
    for n in args.n:
        if args.cls == WEAK_PFG and n < 3:
            continue
        start = time.perf_counter()
        passed, other, top = 0, [], 0
        for seed in range(args.seeds):
            worth = generate_random(n, args.cls, seed)
            theta = auto_theta(worth)
            top = max(top, theta)
            rep = verify_implementation(GammaGame(worth, theta), worth, args.concept)
            if rep.verdict == PASS:
                passed += 1
            else:
                other.append((seed, rep.verdict))
        elapsed = time.perf_counter() - start
        print(f"{n:>2} {args.cls:<11} {args.concept:<17} {passed:>5} {len(other):>5} "
              f"{float(top):>12.3f} {elapsed:>8.2f}")
        for seed, verdict in other:
            print(f"   seed {seed}: {verdict}")


if __name__ == "__main__":
    main()
