import json

import pytest
from hypothesis import given, strategies as st

from coopimpl.construction import GammaGame
from coopimpl.errors import InputError
from coopimpl.oligopoly import Market, bertrand_characteristic, cournot_worth
from coopimpl.serialization import (game_from_json, game_to_json, read_json, worth_from_json,
                                    worth_to_json)
from coopimpl.worth import GENERATOR_CLASSES, generate_random

classes = st.sampled_from(GENERATOR_CLASSES)


@given(st.integers(3, 5), classes, st.integers(0, 1000))
def test_worth_round_trip(n, cls, seed):
    g = generate_random(n, cls, seed)
    text = json.dumps(worth_to_json(g))
    assert worth_from_json(json.loads(text)) == g


def test_market_games_round_trip(market_a):
    for g in (cournot_worth(market_a), bertrand_characteristic(market_a)):
        assert worth_from_json(worth_to_json(g)) == g


@given(st.integers(2, 3), st.integers(0, 1000), st.fractions(min_value=1, max_value=50, max_denominator=9))
def test_game_round_trip(n, seed, theta):
    lazy = GammaGame(generate_random(n, "strict-pfg", seed), theta)
    assert game_from_json(json.loads(json.dumps(game_to_json(lazy)))) == lazy
    dense = lazy.to_dense()
    assert game_from_json(json.loads(json.dumps(game_to_json(dense)))) == dense


def test_dense_labels_parse_back():
    dense = GammaGame(generate_random(2, "strict-pfg", 0), 3).to_dense()
    data = game_to_json(dense)
    assert data["strategies"] == [["1:{1}", "1:{1,2}"], ["2:{2}", "2:{1,2}"]]
    assert game_from_json(data).strategies == dense.strategies


@pytest.mark.parametrize("mutate,message", [
    (lambda d: d["values"].pop(), "missing value"),
    (lambda d: d["values"][0].update(value=0.5), "inexact"),
    (lambda d: d["values"][0].update(coalition=[0, 9]), "players must be"),
    (lambda d: d.update(kind="other"), "'kind'"),
    (lambda d: d["values"].append(dict(d["values"][0])), "duplicate"),
])
def test_bad_worth_files(mutate, message):
    data = worth_to_json(cournot_worth(Market(100, 1, (10, 20, 30))))
    mutate(data)
    with pytest.raises(InputError, match=message):
        worth_from_json(data)


def test_bad_dense_file():
    data = game_to_json(GammaGame(generate_random(2, "strict-pfg", 0), 3).to_dense())
    data["payoffs"].pop()
    with pytest.raises(InputError, match="expected 4"):
        game_from_json(data)


def test_malformed_json_location(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"players": 2,\n "values": [}')
    with pytest.raises(InputError, match="line 2"):
        read_json(path)
