"""JSON files for worth functions and normal-form games.

Players and coalition members are 0-based integers in worth files;
strategy labels use the 1-based ``"i:{members}"`` form.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from . import combinatorics as cb
from .combinatorics import Partition
from .construction import GammaGame
from .errors import InputError
from .normal_form import DenseGame, NormalFormGame, StrategyLabel, parse_label
from .numerics import format_rational, parse_rational
from .worth import CharacteristicFunctionGame, PartitionFunctionGame

PARTITION = "partition"
CHARACTERISTIC = "characteristic"
DENSE = "dense"
GAMMA = GammaGame.kind


def _members(raw, n: int, where: str) -> int:
    if not isinstance(raw, list) or not raw:
        raise InputError(f"{where}: coalition must be a nonempty list of players")
    if any(not isinstance(i, int) or isinstance(i, bool) or not 0 <= i < n for i in raw):
        raise InputError(f"{where}: players must be integers in 0..{n - 1}")
    if len(set(raw)) != len(raw):
        raise InputError(f"{where}: repeated player in coalition")
    return cb.mask_of(raw)


def worth_to_json(game) -> dict:
    if isinstance(game, CharacteristicFunctionGame):
        return {"players": game.n, "kind": CHARACTERISTIC,
                "values": [{"coalition": list(cb.members(s)), "value": format_rational(game(s))}
                           for s in cb.nonempty_coalitions(game.n)]}
    return {"players": game.n, "kind": PARTITION,
            "values": [{"partition": p.to_json(), "coalition": list(cb.members(s)),
                        "value": format_rational(game(s, p))}
                       for s, p in cb.embedded_coalitions(game.n)]}


def worth_from_json(data) -> PartitionFunctionGame | CharacteristicFunctionGame:
    if not isinstance(data, dict):
        raise InputError("worth file must be a JSON object")
    n = data.get("players")
    kind = data.get("kind", PARTITION)
    rows = data.get("values")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputError("'players' must be a positive integer")
    if kind not in (PARTITION, CHARACTERISTIC):
        raise InputError(f"'kind' must be {PARTITION!r} or {CHARACTERISTIC!r}, got {kind!r}")
    if not isinstance(rows, list):
        raise InputError("'values' must be a list")
    values = {}
    for k, row in enumerate(rows):
        where = f"values[{k}]"
        if not isinstance(row, dict) or "coalition" not in row or "value" not in row:
            raise InputError(f"{where}: needs 'coalition' and 'value'")
        s = _members(row["coalition"], n, where)
        v = parse_rational(row["value"])
        if kind == CHARACTERISTIC:
            key = s
        else:
            if "partition" not in row:
                raise InputError(f"{where}: missing 'partition'")
            p = Partition.from_json(row["partition"], n)
            if s not in p.blocks:
                raise InputError(f"{where}: coalition is not a block of its partition")
            key = (s, p)
        if key in values:
            raise InputError(f"{where}: duplicate entry")
        values[key] = v
    if kind == CHARACTERISTIC:
        return CharacteristicFunctionGame(n, values)
    return PartitionFunctionGame(n, values)


def game_to_json(game: NormalFormGame) -> dict:
    if isinstance(game, GammaGame):
        return {"kind": GAMMA, "game": worth_to_json(game.worth), "theta": format_rational(game.theta)}
    return {"kind": DENSE, "players": game.n,
            "strategies": [[str(x) for x in strat] for strat in game.strategies],
            "payoffs": [{"profile": list(p), "u": [format_rational(v) for v in game.payoff(p)]}
                        for p in game.profiles()]}


def game_from_json(data) -> NormalFormGame:
    if not isinstance(data, dict):
        raise InputError("game file must be a JSON object")
    kind = data.get("kind", DENSE)
    if kind == GAMMA:
        if "game" not in data or "theta" not in data:
            raise InputError("gamma-construction file needs 'game' and 'theta'")
        return GammaGame(worth_from_json(data["game"]), parse_rational(data["theta"]))
    if kind != DENSE:
        raise InputError(f"unknown game kind {kind!r}")
    strategies = data.get("strategies")
    if not isinstance(strategies, list) or not all(isinstance(s, list) for s in strategies):
        raise InputError("'strategies' must be a list of lists of labels")
    if "players" in data and data["players"] != len(strategies):
        raise InputError("'players' disagrees with the number of strategy lists")
    labels = [[parse_label(x) if isinstance(x, str) else x for x in strat] for strat in strategies]
    for i, strat in enumerate(labels):
        for lab in strat:
            if isinstance(lab, StrategyLabel) and lab.player != i:
                raise InputError(f"label {lab} listed under player {i + 1}")
    rows = data.get("payoffs")
    if not isinstance(rows, list):
        raise InputError("'payoffs' must be a list")
    payoffs = {}
    for k, row in enumerate(rows):
        if not isinstance(row, dict) or "profile" not in row or "u" not in row:
            raise InputError(f"payoffs[{k}]: needs 'profile' and 'u'")
        prof = tuple(row["profile"])
        if prof in payoffs:
            raise InputError(f"payoffs[{k}]: duplicate profile {list(prof)}")
        payoffs[prof] = [parse_rational(v) for v in row["u"]]
    return DenseGame(labels, payoffs)


def dumps(data) -> str:
    return json.dumps(data, indent=2)


def read_json(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def write_json(path, data) -> None:
    Path(path).write_text(dumps(data) + "\n")


def load_worth(path):
    return worth_from_json(read_json(path))


def load_game(path) -> NormalFormGame:
    return game_from_json(read_json(path))


def rational_list(values) -> list[str]:
    return [format_rational(Fraction(v)) for v in values]
