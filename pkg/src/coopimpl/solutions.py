"""Shapley value, core variants, convexity and the gamma reduction."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import combinatorics as cb
from .combinatorics import Partition
from .errors import InputError
from .numerics import EQ, Feasibility, LinearSystem, format_rational, lp_feasible
from .oligopoly import Market
from .worth import CharacteristicFunctionGame, PartitionFunctionGame, as_cfg, as_pfg

PLAIN = "plain"
GAMMA = "gamma"
DELTA = "delta"
CORE_VARIANTS = (PLAIN, GAMMA, DELTA)


def shapley(g) -> tuple[Fraction, ...]:
    """Weighted average of marginal contributions over subsets not containing i."""
    g = as_cfg(g)
    n = g.n
    weights = [Fraction(math.factorial(k) * math.factorial(n - k - 1), math.factorial(n))
               for k in range(n)]
    out = []
    for i in range(n):
        rest = cb.full(n) & ~(1 << i)
        out.append(sum((weights[cb.size(s)] * (g(s | 1 << i) - g(s)) for s in cb.subsets(rest)),
                       Fraction(0)))
    return tuple(out)


def shapley_by_orderings(g) -> tuple[Fraction, ...]:
    """Average marginal contribution over all arrival orders (slow, independent check)."""
    g = as_cfg(g)
    n = g.n
    total = [Fraction(0)] * n
    count = 0
    for order in itertools.permutations(range(n)):
        s = 0
        for i in order:
            total[i] += g(s | 1 << i) - g(s)
            s |= 1 << i
        count += 1
    return tuple(t / count for t in total)


def gamma_partition(n: int, coalition: int) -> Partition:
    """The coalition with every outsider on their own."""
    rest = cb.full(n) & ~coalition
    return Partition.of(n, [coalition, *(1 << i for i in cb.members(rest))])


def delta_partition(n: int, coalition: int) -> Partition:
    """The coalition facing the outsiders as one block."""
    rest = cb.full(n) & ~coalition
    return Partition.of(n, [coalition, rest] if rest else [coalition])


@dataclass
class GammaCharacteristic:
    """v(S) = worth of S when the outsiders stay separate.

    ``margins`` is set for Cournot-derived games: price minus the cartel's
    cost, so that margin**2 / b is the value.
    """

    game: CharacteristicFunctionGame
    margins: dict[int, Fraction] | None = None
    market: Market | None = None


def cournot_margin(m: Market, coalition: int) -> Fraction:
    if not coalition:
        return Fraction(0)
    rest = list(cb.members(cb.full(m.n) & ~coalition))
    return ((m.a + sum((m.costs[j] for j in rest), Fraction(0))
             - (len(rest) + 1) * m.cartel_cost(coalition)) / (len(rest) + 2))


def gamma_characteristic(g, market: Market | None = None) -> GammaCharacteristic:
    g = as_pfg(g)
    game = CharacteristicFunctionGame(g.n, {s: g(s, gamma_partition(g.n, s))
                                            for s in cb.nonempty_coalitions(g.n)})
    margins = None
    if market is not None:
        if market.n != g.n:
            raise InputError("market and game have different player counts")
        margins = {s: cournot_margin(market, s) for s in cb.subsets(cb.full(g.n))}
        for s in cb.nonempty_coalitions(g.n):
            if margins[s] ** 2 / market.b != game(s):
                raise InputError(f"game is not the Cournot game of this market at {list(cb.members(s))}")
    return GammaCharacteristic(game, margins, market)


def core_system(g, variant: str = PLAIN) -> LinearSystem:
    """Efficiency as an equality row plus one >= row per coalition."""
    if variant not in CORE_VARIANTS:
        raise InputError(f"unknown core variant {variant!r}; expected one of {CORE_VARIANTS}")
    if variant == PLAIN:
        cf = as_cfg(g)
        n = cf.n
        worth = cf
    else:
        pf = as_pfg(g)
        n = pf.n
        embed = gamma_partition if variant == GAMMA else delta_partition
        worth = lambda s: pf(s, embed(n, s))  # noqa: E731
    system = LinearSystem(n)
    full = cb.full(n)
    system.add([1] * n, worth(full), EQ)
    for s in cb.nonempty_coalitions(n):
        system.add([1 if s >> i & 1 else 0 for i in range(n)], worth(s))
    return system


def core_feasible(g, variant: str = PLAIN) -> Feasibility:
    return lp_feasible(core_system(g, variant))


def in_core(g, y, variant: str = PLAIN) -> bool:
    return core_system(g, variant).satisfied_by([Fraction(v) for v in y])


@dataclass
class ConvexityReport:
    convex: bool
    witness: tuple[int, int] | None = None
    gap: Fraction | None = None  # lhs minus rhs at the witness


def check_convexity(g) -> ConvexityReport:
    """v(S) + v(T) <= v(S | T) + v(S & T) for every pair, the empty set included."""
    g = as_cfg(g)
    coalitions = list(cb.subsets(cb.full(g.n)))
    for s, t in itertools.combinations_with_replacement(coalitions, 2):
        gap = g(s) + g(t) - g(s | t) - g(s & t)
        if gap > 0:
            return ConvexityReport(False, (s, t), gap)
    return ConvexityReport(True)


@dataclass
class PairCheck:
    s: int
    t: int
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    def to_json(self) -> dict:
        return {"S": list(cb.members(self.s)), "T": list(cb.members(self.t)),
                "lhs": format_rational(self.lhs), "rhs": format_rational(self.rhs),
                "holds": self.holds}


@dataclass
class SqrtSupermodularityReport:
    pairs: list[PairCheck] = field(default_factory=list)

    @property
    def failures(self) -> list[PairCheck]:
        return [p for p in self.pairs if not p.holds]

    def pair(self, s: int, t: int) -> PairCheck:
        key = (min(s, t), max(s, t))
        return next(p for p in self.pairs if (p.s, p.t) == key)


def sqrt_supermodularity_report(gc: GammaCharacteristic) -> SqrtSupermodularityReport:
    """margin(S) + margin(T) against margin(S | T) + margin(S & T), per pair.

    Margins are square roots of the reduced values up to the common factor
    sqrt(b), so the comparison is exact.
    """
    if gc.margins is None:
        raise InputError("margin report needs a Cournot-derived game (pass the market)")
    m = gc.margins
    coalitions = sorted(m)
    report = SqrtSupermodularityReport()
    for s, t in itertools.combinations_with_replacement(coalitions, 2):
        report.pairs.append(PairCheck(s, t, m[s] + m[t], m[s | t] + m[s & t]))
    return report


@dataclass
class SingletonSumTest:
    empty_certified: bool
    lhs: Fraction
    rhs: Fraction


def delta_singleton_sum_test(g) -> SingletonSumTest:
    """Sufficient emptiness test: singletons facing a united rest already ask for more than v(N)."""
    g = as_pfg(g)
    lhs = sum((g(1 << i, delta_partition(g.n, 1 << i)) for i in range(g.n)), Fraction(0))
    rhs = g.grand_value()
    return SingletonSumTest(lhs > rhs, lhs, rhs)
