"""Cooperative analysis of a linear-demand oligopoly.

Example:
    python scripts/oligopoly_report.py --a 100 --b 1 --costs 10,20,30
"""

import argparse

from coopimpl import combinatorics as cb
from coopimpl.numerics import format_rational as fmt
from coopimpl.oligopoly import (bertrand_characteristic, cournot_oracle, cournot_worth,
                                market_from_strings, maximin_worth)
from coopimpl.solutions import (DELTA, GAMMA, check_convexity, core_feasible,
                                delta_singleton_sum_test, gamma_characteristic, shapley,
                                sqrt_supermodularity_report)
from coopimpl.worth import classify_superadditivity, externality_report


def coalition(mask):
    return cb.format_coalition(mask, one_based=True)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--a", default="100")
    ap.add_argument("--b", default="1")
    ap.add_argument("--costs", default="10,20,30")
    args = ap.parse_args()
    m = market_from_strings(args.a, args.b, args.costs)

    cournot = cournot_worth(m)
    print("Cournot worth (exact / best-response oracle)")
    for p in cb.enumerate_partitions(m.n):
        out = cournot_oracle(m, p)
        cells = "  ".join(f"{coalition(s)}={fmt(cournot(s, p))} ({profit:.6f})"
                          for s, profit in zip(p.blocks, out.profits))
        print(f"  {str(p):<24} {cells}")
    ext = externality_report(cournot)
    print(f"superadditivity: {classify_superadditivity(cournot).cls}; "
          f"externalities: {len(ext.positive)} positive, {len(ext.negative)} negative")

    for variant in (GAMMA, DELTA):
        res = core_feasible(cournot, variant)
        detail = res.witness if res.feasible else res.certificate
        print(f"{variant} core: {'nonempty' if res.feasible else 'empty'} "
              f"{[fmt(x) for x in detail]}")
    single = delta_singleton_sum_test(cournot)
    print(f"singleton sum {fmt(single.lhs)} vs grand {fmt(single.rhs)}: "
          f"{'certifies empty' if single.empty_certified else 'inconclusive'}")

    gc = gamma_characteristic(cournot, m)
    print(f"reduced game convex: {check_convexity(gc.game).convex}")
    fails = sqrt_supermodularity_report(gc).failures
    print(f"margin pairs failing: {len(fails)}")
    for pair in fails:
        print(f"  {coalition(pair.s)} {coalition(pair.t)}: {fmt(pair.lhs)} > {fmt(pair.rhs)}")

    bertrand = bertrand_characteristic(m)
    print(f"Bertrand shapley: {[fmt(x) for x in shapley(bertrand)]}; "
          f"convex: {check_convexity(bertrand).convex}")
    print(f"maximin shapley: {[fmt(x) for x in shapley(maximin_worth(m))]}")


if __name__ == "__main__":
    main()
