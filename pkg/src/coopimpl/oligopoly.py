"""Cooperative games from a linear-demand oligopoly.

Inverse demand is p(Q) = a - b*Q, firm i has constant marginal cost c_i
with c_1 < ... < c_n < a.  A cartel produces at its lowest member cost.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import combinatorics as cb
from .combinatorics import Partition
from .errors import InputError, OracleError
from .numerics import parse_rational
from .worth import CharacteristicFunctionGame, PartitionFunctionGame


@dataclass(frozen=True)
class Market:
    a: Fraction
    b: Fraction
    costs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", parse_rational(self.a))
        object.__setattr__(self, "b", parse_rational(self.b))
        object.__setattr__(self, "costs", tuple(parse_rational(c) for c in self.costs))
        if not self.costs:
            raise InputError("market needs at least one firm")
        if self.b <= 0:
            raise InputError("demand slope b must be positive")
        if any(x >= y for x, y in zip(self.costs, self.costs[1:])):
            raise InputError("costs must be strictly increasing")
        if self.a <= self.costs[-1]:
            raise InputError("intercept a must exceed every cost")

    @property
    def n(self) -> int:
        return len(self.costs)

    def cartel_cost(self, coalition: int) -> Fraction:
        return self.costs[cb.least(coalition)]

    @property
    def monopoly_profit(self) -> Fraction:
        return (self.a - self.costs[0]) ** 2 / (4 * self.b)


@dataclass
class InteriorCheck:
    ok: bool
    violating: list[tuple[int, Partition]]


def _cournot_margin(m: Market, s: int, p: Partition) -> Fraction:
    # equilibrium price minus the cartel's cost, times (|pi| + 1)
    others = sum((m.cartel_cost(t) for t in p.without(s)), Fraction(0))
    return m.a + others - len(p) * m.cartel_cost(s)


def interior_check(m: Market) -> InteriorCheck:
    """Every cartel produces a positive quantity in every partition."""
    bad = [(s, p) for s, p in cb.embedded_coalitions(m.n) if _cournot_margin(m, s, p) <= 0]
    return InteriorCheck(not bad, bad)


def _require_interior(m: Market) -> None:
    chk = interior_check(m)
    if not chk.ok:
        s, p = chk.violating[0]
        raise InputError(f"no interior Cournot outcome: cartel {list(cb.members(s))} in {p} "
                         f"would not produce")


def cournot_worth(m: Market) -> PartitionFunctionGame:
    """Cartel profits at the Cournot outcome among the blocks of each partition."""
    _require_interior(m)
    return PartitionFunctionGame(m.n, {
        (s, p): _cournot_margin(m, s, p) ** 2 / ((len(p) + 1) ** 2 * m.b)
        for s, p in cb.embedded_coalitions(m.n)
    })


@dataclass
class CartelOutcome:
    cartels: tuple[int, ...]
    quantities: tuple[float, ...]
    total: float
    price: float
    profits: tuple[float, ...]
    iterations: int


def cournot_oracle(m: Market, partition: Partition, tol: float = 1e-12,
                   max_iter: int = 10_000) -> CartelOutcome:
    """Cournot outcome by best-response iteration in floating point.

    Cartels update in turn (Gauss-Seidel) starting from zero output.  The
    simultaneous update oscillates once there are three or more cartels,
    while the sequential one converges because the first-order system is
    symmetric positive definite.
    """
    a, b = float(m.a), float(m.b)
    costs = [float(m.cartel_cost(s)) for s in partition.blocks]
    q = [0.0] * len(costs)
    for it in range(1, max_iter + 1):
        change = 0.0
        for k, c in enumerate(costs):
            rest = sum(q) - q[k]
            new = max(0.0, (a - c - b * rest) / (2 * b))
            change = max(change, abs(new - q[k]) / max(1.0, abs(new)))
            q[k] = new
        if change < tol:
            break
    else:
        raise OracleError(f"best-response iteration did not converge in {max_iter} rounds for {partition}")
    total = sum(q)
    price = a - b * total
    return CartelOutcome(partition.blocks, tuple(q), total, price,
                         tuple((price - c) * qk for c, qk in zip(costs, q)), it)


def cournot_closed_form(m: Market, partition: Partition) -> tuple[Fraction, Fraction]:
    """Exact (total quantity, price) at the Cournot outcome."""
    k = len(partition)
    csum = sum((m.cartel_cost(s) for s in partition.blocks), Fraction(0))
    return (k * m.a - csum) / ((k + 1) * m.b), (m.a + csum) / (k + 1)


def _bertrand_value(m: Market, s: int) -> Fraction:
    full = cb.full(m.n)
    if s == full:
        return m.monopoly_profit
    if not s & 1:  # the lowest-cost firm is outside
        return Fraction(0)
    rival = m.costs[cb.least(full & ~s)]
    return (rival - m.costs[0]) * (m.a - rival) / m.b


def bertrand_characteristic(m: Market) -> CharacteristicFunctionGame:
    """Price-competition worth: the cartel holding firm 1 sells at the best outside cost."""
    _require_interior(m)
    return CharacteristicFunctionGame(m.n, {s: _bertrand_value(m, s) for s in cb.nonempty_coalitions(m.n)})


def bertrand_worth(m: Market) -> PartitionFunctionGame:
    return bertrand_characteristic(m).lift()


def maximin_worth(m: Market) -> CharacteristicFunctionGame:
    """Outsiders can flood the market, so only the grand coalition earns anything."""
    full = cb.full(m.n)
    return CharacteristicFunctionGame(
        m.n, {s: m.monopoly_profit if s == full else Fraction(0) for s in cb.nonempty_coalitions(m.n)})


def parse_costs(text: str) -> tuple[Fraction, ...]:
    parts = [t for t in text.split(",") if t.strip()]
    if not parts:
        raise InputError("--costs needs a comma-separated list")
    return tuple(parse_rational(t) for t in parts)


def market_from_strings(a: str, b: str, costs: str | Sequence) -> Market:
    if isinstance(costs, str):
        costs = parse_costs(costs)
    return Market(parse_rational(a), parse_rational(b), tuple(costs))
