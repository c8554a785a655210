"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line (visible even under
output capture) and then asserts.
"""

import itertools
import json
import random
import time
from fractions import Fraction

import pytest

from coopimpl import combinatorics as cb
from coopimpl.cli import main
from coopimpl.combinatorics import Partition
from coopimpl.construction import (PASS, GammaGame, auto_theta, gamma_payoff, theta_bar,
                                   verify_implementation)
from coopimpl.normal_form import CompositeGame
from coopimpl.oligopoly import (Market, bertrand_characteristic, cournot_oracle, cournot_worth)
from coopimpl.solutions import (DELTA, GAMMA, check_convexity, core_feasible, core_system,
                                delta_singleton_sum_test, gamma_characteristic, in_core, shapley,
                                sqrt_supermodularity_report)
from coopimpl.solvers import NASH, RATIONALIZABILITY, THP, iesds, thp_certify
from coopimpl.worth import (STRICT, STRICT_PFG, WEAK_CF, WEAK_ONLY, WEAK_PFG,
                            classify_superadditivity, externality_report, generate_random)

from conftest import three_player_game, two_player_game
from test_construction import COLS, PARAMS, ROWS, THREE_PLAYER_TABLE, TWO_PLAYER_TABLE, _cell
from test_oligopoly import random_market

F = Fraction
MARKET_A = Market(100, 1, (10, 20, 30))


@pytest.fixture
def report(capsys):
    def emit(number: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number:>2}: {detail}")
        assert ok, detail
    return emit


def _strict_instances():
    return [(n, seed, generate_random(n, STRICT_PFG, seed)) for n in (2, 3, 4) for seed in range(25)]


def _weak_instances():
    return [(n, seed, generate_random(n, WEAK_CF, seed)) for n in (2, 3) for seed in range(25)]


def _weak_pfg_instances():
    return [(3 + seed % 2, seed, generate_random(3 + seed % 2, WEAK_PFG, seed)) for seed in range(10)]


def test_golden_matrices(report):
    start = time.perf_counter()
    bad = []
    for theta in (2, 5):
        w2 = two_player_game(3)
        for (r, t1), (c, t2) in itertools.product(enumerate([1, 3]), enumerate([2, 3])):
            if gamma_payoff(w2, theta, [t1, t2]) != _cell(TWO_PLAYER_TABLE[r][c], theta, {"a": 3}):
                bad.append((theta, t1, t2))
        w3 = three_player_game(**PARAMS)
        for third, grid in THREE_PLAYER_TABLE.items():
            for (r, t1), (c, t2) in itertools.product(enumerate(ROWS), enumerate(COLS)):
                if gamma_payoff(w3, theta, [t1, t2, third]) != _cell(grid[r][c], theta, PARAMS):
                    bad.append((theta, t1, t2, third))
    elapsed = time.perf_counter() - start
    report(1, not bad and elapsed < 1,
           f"2x(4 + 64) golden cells, {len(bad)} mismatches, {elapsed:.3f}s")


def test_strict_worth_nash_implementation(report):
    start = time.perf_counter()
    failures = []
    n4 = 0.0
    for n, seed, w in _strict_instances():
        t = time.perf_counter()
        assert classify_superadditivity(w).cls == STRICT
        rep = verify_implementation(GammaGame(w, auto_theta(w)), w, NASH)
        distinct = {x for e in rep.entries for x in e.solution.profiles}
        if rep.verdict != PASS or not rep.bijection or len(distinct) != cb.bell(n):
            failures.append((n, seed))
        if n == 4:
            n4 += time.perf_counter() - t
    report(2, not failures and n4 < 60,
           f"75 strict games pass under nash with Bell(n) equilibria; failures {failures}; "
           f"n=4 took {n4:.1f}s; total {time.perf_counter() - start:.1f}s")


def test_strict_worth_rationalizability(report):
    failures = []
    n4 = 0.0
    for n, seed, w in _strict_instances():
        t = time.perf_counter()
        game = GammaGame(w, auto_theta(w))
        rep = verify_implementation(game, w, RATIONALIZABILITY)
        ok = rep.verdict == PASS
        for p in cb.enumerate_partitions(n):
            cg = CompositeGame(game, p)
            res = iesds(cg)
            ok &= res.solved and cg.to_profile([s[0] for s in res.survivors]) == game.dominant_profile(p)
        if not ok:
            failures.append((n, seed))
        if n == 4:
            n4 += time.perf_counter() - t
    report(3, not failures and n4 < 60,
           f"IESDS leaves exactly the tag profile in every composite game; failures {failures}; "
           f"n=4 took {n4:.1f}s")


def test_weak_characteristic_nash(report):
    failures = []
    multiple = 0
    for n, seed, w in _weak_instances():
        if classify_superadditivity(w).cls != WEAK_ONLY:
            failures.append((n, seed, "class"))
            continue
        rep = verify_implementation(GammaGame(w, auto_theta(w)), w, NASH)
        if rep.verdict != PASS or not all(e.solution.payoff_unique for e in rep.entries):
            failures.append((n, seed))
        multiple += any(len(e.solution.profiles) > 1 for e in rep.entries)
    report(4, not failures,
           f"50 weak characteristic games pass under nash, {multiple} with multiple "
           f"payoff-equal equilibria; failures {failures}")


def test_weak_worth_trembling_hand(report):
    failures = []
    for n, seed, w in _weak_instances() + _weak_pfg_instances():
        game = GammaGame(w, auto_theta(w))
        for p in cb.enumerate_partitions(n):
            cert = thp_certify(CompositeGame(game, p))
            if not cert.certified or not all(ok for _, ok in cert.epsilon_check):
                failures.append((n, seed, str(p)))
        if verify_implementation(game, w, THP).verdict != PASS:
            failures.append((n, seed, "payoffs"))
    report(5, not failures,
           f"60 weak games certified in every composite game at eps 1/100, 1/1000; failures {failures}")


def test_threshold_sharpness(report):
    w = two_player_game(4)
    bar = theta_bar(w)
    rep = verify_implementation(GammaGame(w, F(1, 2)), w, NASH)
    witness = [x for x in rep.witnesses if x.get("reason") == "tag strategy not strictly dominant"]
    ok = bar == 1 and rep.verdict != PASS and bool(witness)
    report(6, ok, f"theta_bar = {bar}; at theta 1/2 verdict {rep.verdict} with "
                  f"{len(witness)} non-dominance witness(es)")


def test_cournot_agreement(report):
    start = time.perf_counter()
    rng = random.Random(2024)
    worst = 0.0
    for _ in range(50):
        m = random_market(rng, rng.choice([2, 3, 4]))
        g = cournot_worth(m)
        for p in cb.enumerate_partitions(m.n):
            out = cournot_oracle(m, p)
            for s, profit in zip(p.blocks, out.profits):
                exact = float(g(s, p))
                worst = max(worst, abs(profit - exact) / max(1.0, exact))
    g = cournot_worth(MARKET_A)
    P = lambda *b: Partition.of(3, b)  # noqa: E731
    got = [g(1, P([0], [1], [2])), g(2, P([0], [1], [2])), g(4, P([0], [1], [2])),
           g(3, P([0, 1], [2])), g(4, P([0, 1], [2])), g(5, P([0, 2], [1])), g(2, P([0, 2], [1])),
           g(6, P([0], [1, 2])), g(1, P([0], [1, 2])), g(7, P([0, 1, 2]))]
    want = [900, 400, 100, F(12100, 9), F(2500, 9), F(10000, 9), F(4900, 9),
            F(4900, 9), F(10000, 9), 2025]
    elapsed = time.perf_counter() - start
    report(7, worst < 1e-9 and got == want and elapsed < 10,
           f"worst relative oracle gap {worst:.2e} over 50 markets; instance values exact; {elapsed:.2f}s")


def test_cournot_externalities(report):
    rng = random.Random(2024)
    negative = 0
    positive_missing = 0
    for _ in range(50):
        m = random_market(rng, rng.choice([2, 3, 4]))
        ext = externality_report(cournot_worth(m))
        negative += len(ext.negative)
        # two firms leave no pair of outsiders to merge
        positive_missing += m.n >= 3 and not ext.positive
    ext_a = externality_report(cournot_worth(MARKET_A))
    ok = negative == 0 and positive_missing == 0 and ext_a.positive and not ext_a.negative
    report(8, bool(ok), f"{negative} negative witnesses; every game with 3+ firms has positive ones")


def test_cores(report):
    g = cournot_worth(MARKET_A)
    gamma = core_feasible(g, GAMMA)
    gamma_ok = gamma.feasible and in_core(g, (1200, 500, 325), GAMMA)
    delta = core_feasible(g, DELTA)
    delta_ok = not delta.feasible and core_system(g, DELTA).certifies_infeasible(delta.certificate)
    single = delta_singleton_sum_test(g)
    single_ok = single.empty_certified and single.lhs == F(19500, 9) and single.rhs == 2025
    proxies = [Market(1000, 1, (10, 20, 30)),
               Market(100, 1, (10, F(101, 10), F(102, 10), F(103, 10), F(104, 10)))]
    proxy_ok = all(delta_singleton_sum_test(cournot_worth(m)).empty_certified for m in proxies)
    report(9, gamma_ok and delta_ok and single_ok and proxy_ok,
           f"gamma core feasible: {gamma_ok}; delta core empty with certificate: {delta_ok}; "
           f"singleton sum {single.lhs} vs {single.rhs} (expected 19500/9 > 2025): {single_ok}; "
           f"finite proxies certified: {proxy_ok}")


def test_bertrand_shapley_and_convexity(report):
    g = bertrand_characteristic(MARKET_A)
    phi = shapley(g)
    ok = (phi == (F(7850, 6), F(3050, 6), F(1250, 6)) and phi[0] > phi[1] > phi[2]
          and check_convexity(g).convex and in_core(g, phi))
    report(10, ok, f"shapley {tuple(str(x) for x in phi)}, convex and in the core")


def test_margin_report(report, capsys):
    gc = gamma_characteristic(cournot_worth(MARKET_A), MARKET_A)
    rep = sqrt_supermodularity_report(gc)
    code = main(["convexity", "--a", "100", "--b", "1", "--costs", "10,20,30", "--sqrt-report", "--json"])
    data = json.loads(capsys.readouterr().out)
    ok = (not rep.pair(1, 2).holds and rep.pair(3, 5).holds and code == 0
          and data["convex"] and check_convexity(gc.game).convex)
    report(11, ok, f"pair {{1}},{{2}} fails ({rep.pair(1, 2).lhs} > {rep.pair(1, 2).rhs}); "
                   f"pair {{1,2}},{{1,3}} holds ({rep.pair(3, 5).lhs} <= {rep.pair(3, 5).rhs}); "
                   f"exit {code}; reduced game convex")
