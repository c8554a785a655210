from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from coopimpl.combinatorics import Partition
from coopimpl.oligopoly import Market
from coopimpl.worth import CharacteristicFunctionGame, PartitionFunctionGame

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def two_player_game(a) -> CharacteristicFunctionGame:
    """Zero-normalized two-player game with v(12) = a."""
    return CharacteristicFunctionGame(2, {1: 0, 2: 0, 3: Fraction(a)})


def three_player_game(a, b, c, d, e, f, g) -> PartitionFunctionGame:
    """Zero-normalized three-player game with the seven free worths."""
    P = lambda *blocks: Partition.of(3, blocks)  # noqa: E731
    singles = P([0], [1], [2])
    values = {(1, singles): 0, (2, singles): 0, (4, singles): 0,
              (3, P([0, 1], [2])): a, (4, P([0, 1], [2])): b,
              (5, P([0, 2], [1])): c, (2, P([0, 2], [1])): d,
              (6, P([0], [1, 2])): e, (1, P([0], [1, 2])): f,
              (7, P([0, 1, 2])): g}
    return PartitionFunctionGame(3, {k: Fraction(v) for k, v in values.items()})


@pytest.fixture
def market_a() -> Market:
    return Market(100, 1, (10, 20, 30))
