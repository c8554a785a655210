from fractions import Fraction

import numpy as np

from coopimpl import combinatorics as cb
from coopimpl.combinatorics import Partition
from coopimpl.construction import GammaGame, auto_theta
from coopimpl.normal_form import CompositeGame, DenseGame, tag_registry
from coopimpl.solvers import (STRICT, WEAK, dominance_registry, find_dominant, iesds,
                              mixed_dominated, pure_nash, thp_certify)
from coopimpl.worth import STRICT_PFG, WEAK_CF, generate_random

from conftest import two_player_game


def _bimatrix(rows):
    """Dense two-player game from a nested list of payoff pairs."""
    m, k = len(rows), len(rows[0])
    return DenseGame([[f"r{i}" for i in range(m)], [f"c{j}" for j in range(k)]],
                     {(i, j): rows[i][j] for i in range(m) for j in range(k)})


def test_two_player_construction_equilibria():
    game = GammaGame(two_player_game(3), 2)
    split = pure_nash(CompositeGame(game, Partition.singletons(2)))
    assert [game.labels(x) for x in split.profiles] == [tuple(game.strategies[i][0] for i in range(2))]
    assert split.payoffs == [(0, 0)]
    joint = pure_nash(CompositeGame(game, Partition.grand(2)))
    assert [tuple(map(str, game.labels(x))) for x in joint.profiles] == [("1:{1,2}", "2:{1,2}")]
    assert joint.payoffs == [(3,)]


def test_one_block_game_picks_every_maximizer():
    game = _bimatrix([[(1, 1), (0, 2)], [(2, 0), (0, 0)]])
    sol = pure_nash(CompositeGame(game, Partition.grand(2)))
    assert sol.profiles == [(0, 0), (0, 1), (1, 0)]
    assert sol.payoff_unique


def test_grand_tag_is_strictly_dominant():
    game = GammaGame(two_player_game(3), 2)
    js = find_dominant(CompositeGame(game, Partition.grand(2)), 3, STRICT)
    assert js.labels(game) == (game.strategies[0][1], game.strategies[1][1])


def test_no_dominant_row_in_matching_pennies():
    game = _bimatrix([[(1, -1), (-1, 1)], [(-1, 1), (1, -1)]])
    cg = CompositeGame(game, Partition.singletons(2))
    assert find_dominant(cg, 1, STRICT) is None and find_dominant(cg, 1, WEAK) is None


def test_weak_but_not_strict_dominance_at_an_equality_merge():
    w = generate_random(2, WEAK_CF, 3)
    game = GammaGame(w, auto_theta(w))
    cg = CompositeGame(game, Partition.grand(2))
    assert find_dominant(cg, 3, STRICT) is None
    assert find_dominant(cg, 3, WEAK) is not None


def test_undominated_game_keeps_everything():
    game = _bimatrix([[(1, -1), (-1, 1)], [(-1, 1), (1, -1)]])
    res = iesds(CompositeGame(game, Partition.singletons(2)))
    assert res.survivors == [[0, 1], [0, 1]] and res.order_independent


def test_mixture_only_domination():
    rows = np.array([[0, 0], [2, -1], [-1, 2]])
    assert mixed_dominated(rows, 0)
    assert not mixed_dominated(rows, 1)
    game = _bimatrix([[(0, 0), (0, 0)], [(2, 0), (-1, 0)], [(-1, 0), (2, 0)]])
    res = iesds(CompositeGame(game, Partition.singletons(2)))
    assert res.survivors[0] == [1, 2]
    assert res.eliminated_by_mixture == [(0, 0)]


def test_duplicate_strategies_block_the_certificate():
    game = _bimatrix([[(1, 0), (1, 0)], [(1, 0), (1, 0)]])
    cert = thp_certify(CompositeGame(game, Partition.singletons(2)))
    assert not cert.certified and cert.failures


def test_all_concepts_agree_on_strict_constructions():
    for n in (2, 3, 4):
        for seed in range(2):
            w = generate_random(n, STRICT_PFG, seed)
            game = GammaGame(w, auto_theta(w))
            for p in cb.enumerate_partitions(n):
                cg = CompositeGame(game, p)
                star = game.dominant_profile(p)
                assert pure_nash(cg).profiles == [star]
                res = iesds(cg)
                assert res.order_independent
                assert [cg.to_profile([s[0] for s in res.survivors])] == [star]
                assert all(len(s) == 1 for s in res.survivors)
                cert = thp_certify(cg)
                assert cert.certified and cert.profiles == [star]


def test_weak_constructions_certify_trembling_hand():
    w = generate_random(3, WEAK_CF, 1)
    game = GammaGame(w, auto_theta(w))
    for p in cb.enumerate_partitions(3):
        cert = thp_certify(CompositeGame(game, p))
        assert cert.certified and cert.profiles == [game.dominant_profile(p)]
        assert [ok for _, ok in cert.epsilon_check] == [True, True]


def test_equilibria_are_exactly_the_complete_profiles():
    for n in (2, 3, 4):
        game = GammaGame(generate_random(n, STRICT_PFG, 5), auto_theta(generate_random(n, STRICT_PFG, 5)))
        found = set()
        for p in cb.enumerate_partitions(n):
            found.update(pure_nash(CompositeGame(game, p)).profiles)
        complete = {x for x in game.profiles() if game.kappa(x, cb.full(n)) == n}
        assert found == complete


def test_table_registry_matches_labels_on_constructions():
    w = generate_random(3, STRICT_PFG, 8)
    game = GammaGame(w, auto_theta(w))
    assert dominance_registry(game).dominant == tag_registry(game).dominant


def test_registry_skips_coalitions_without_dominance():
    w = generate_random(3, STRICT_PFG, 8)
    game = GammaGame(w, Fraction(1, 1000))
    reg = dominance_registry(game)
    assert set(reg.dominant) < set(tag_registry(game).dominant)
