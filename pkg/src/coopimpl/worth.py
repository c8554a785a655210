"""Partition-function and characteristic-function games."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from . import combinatorics as cb
from .combinatorics import Partition
from .errors import InputError

MAX_PLAYERS = 8

STRICT = "strict"
WEAK_ONLY = "weak-only"
NONE = "none"


@dataclass(frozen=True)
class PartitionFunctionGame:
    """A worth value for every embedded coalition ``(S, pi)``.

    ``values`` is keyed by ``(coalition_mask, partition)``.  Construction
    fails with :class:`InputError` naming the first missing embedded
    coalition.
    """

    n: int
    values: Mapping[tuple[int, Partition], Fraction]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_PLAYERS:
            raise InputError(f"games need 1..{MAX_PLAYERS} players, got {self.n}")
        vals = {}
        for (s, p), v in self.values.items():
            if p.n != self.n or s not in p.blocks:
                raise InputError(f"({cb.format_coalition(s)}, {p}) is not an embedded coalition")
            vals[(s, p)] = Fraction(v)
        for s, p in cb.embedded_coalitions(self.n):
            if (s, p) not in vals:
                raise InputError(f"missing value for coalition {list(cb.members(s))} in partition {p}")
        object.__setattr__(self, "values", vals)

    def __call__(self, coalition: int, partition: Partition) -> Fraction:
        try:
            return self.values[(coalition, partition)]
        except KeyError:
            raise InputError(
                f"({cb.format_coalition(coalition)}, {partition}) is not an embedded coalition"
            ) from None

    value = __call__

    def grand_value(self) -> Fraction:
        return self(cb.full(self.n), Partition.grand(self.n))

    def is_characteristic(self) -> bool:
        seen: dict[int, Fraction] = {}
        for (s, _), v in self.values.items():
            if seen.setdefault(s, v) != v:
                return False
        return True

    def to_characteristic(self) -> "CharacteristicFunctionGame":
        if not self.is_characteristic():
            raise InputError("game is partition-dependent; reduce it first (e.g. gamma reduction)")
        return CharacteristicFunctionGame(self.n, {s: v for (s, _), v in self.values.items()})

    def __eq__(self, other):
        return (isinstance(other, PartitionFunctionGame) and self.n == other.n
                and self.values == other.values)

    def __hash__(self):
        return hash((self.n, frozenset(self.values.items())))


@dataclass(frozen=True)
class CharacteristicFunctionGame:
    n: int
    values: Mapping[int, Fraction]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_PLAYERS:
            raise InputError(f"games need 1..{MAX_PLAYERS} players, got {self.n}")
        vals = {}
        for s, v in self.values.items():
            if s == 0:
                if Fraction(v) != 0:
                    raise InputError("v(empty) must be 0")
                continue
            if s >> self.n:
                raise InputError(f"coalition {cb.format_coalition(s)} outside player set")
            vals[s] = Fraction(v)
        for s in cb.nonempty_coalitions(self.n):
            if s not in vals:
                raise InputError(f"missing value for coalition {list(cb.members(s))}")
        object.__setattr__(self, "values", vals)

    def __call__(self, coalition: int) -> Fraction:
        # v(empty) = 0 convention
        return self.values[coalition] if coalition else Fraction(0)

    def lift(self) -> PartitionFunctionGame:
        return PartitionFunctionGame(
            self.n, {(s, p): self.values[s] for s, p in cb.embedded_coalitions(self.n)}
        )

    def __eq__(self, other):
        return (isinstance(other, CharacteristicFunctionGame) and self.n == other.n
                and self.values == other.values)

    def __hash__(self):
        return hash((self.n, frozenset(self.values.items())))


def as_pfg(game) -> PartitionFunctionGame:
    if isinstance(game, CharacteristicFunctionGame):
        return game.lift()
    return game


def as_cfg(game) -> CharacteristicFunctionGame:
    if isinstance(game, PartitionFunctionGame):
        return game.to_characteristic()
    return game


@dataclass(frozen=True)
class Merge:
    """Blocks ``s`` and ``t`` of ``partition`` merged into one."""

    s: int
    t: int
    partition: Partition

    def slack(self, g: PartitionFunctionGame) -> Fraction:
        merged = self.partition.merge(self.s, self.t)
        return g(self.s | self.t, merged) - g(self.s, self.partition) - g(self.t, self.partition)

    def to_json(self):
        return {"S": list(cb.members(self.s)), "T": list(cb.members(self.t)),
                "partition": self.partition.to_json()}


@dataclass
class SuperadditivityReport:
    cls: str
    violations: list[Merge] = field(default_factory=list)
    equalities: list[Merge] = field(default_factory=list)


def merges(n: int):
    for p in cb.enumerate_partitions(n):
        for s, t in itertools.combinations(p.blocks, 2):
            yield Merge(s, t, p)


def classify_superadditivity(g) -> SuperadditivityReport:
    g = as_pfg(g)
    report = SuperadditivityReport(STRICT)
    for mg in merges(g.n):
        slack = mg.slack(g)
        if slack < 0:
            report.violations.append(mg)
        elif slack == 0:
            report.equalities.append(mg)
    if report.violations:
        report.cls = NONE
    elif report.equalities:
        report.cls = WEAK_ONLY
    return report


@dataclass(frozen=True)
class ExternalityWitness:
    r: int
    s: int
    t: int
    partition: Partition
    before: Fraction
    after: Fraction

    def to_json(self):
        from .numerics import format_rational

        return {"R": list(cb.members(self.r)), "S": list(cb.members(self.s)),
                "T": list(cb.members(self.t)), "partition": self.partition.to_json(),
                "before": format_rational(self.before), "after": format_rational(self.after)}


@dataclass
class ExternalityReport:
    positive: list[ExternalityWitness] = field(default_factory=list)
    negative: list[ExternalityWitness] = field(default_factory=list)


def externality_report(g) -> ExternalityReport:
    """Compare v(R, pi) with v(R, pi') where pi' merges two other blocks S, T."""
    g = as_pfg(g)
    out = ExternalityReport()
    for p in cb.enumerate_partitions(g.n):
        for r in p.blocks:
            for s, t in itertools.combinations(p.without(r), 2):
                before = g(r, p)
                after = g(r, p.merge(s, t))
                if before < after:
                    out.positive.append(ExternalityWitness(r, s, t, p, before, after))
                elif before > after:
                    out.negative.append(ExternalityWitness(r, s, t, p, before, after))
    return out


# --- random instances -------------------------------------------------------

STRICT_PFG = "strict-pfg"
WEAK_CF = "weak-cf"
WEAK_PFG = "weak-pfg"
GENERATOR_CLASSES = (STRICT_PFG, WEAK_CF, WEAK_PFG)


def squared_weight_game(weights) -> CharacteristicFunctionGame:
    """v(S) = (sum of weights in S)^2."""
    n = len(weights)
    return CharacteristicFunctionGame(
        n, {s: Fraction(sum(weights[i] for i in cb.members(s))) ** 2
            for s in cb.nonempty_coalitions(n)}
    )


def _min_merge_slack(g: PartitionFunctionGame) -> Fraction:
    return min(mg.slack(g) for mg in merges(g.n))


def _perturbed(base: PartitionFunctionGame, rng: random.Random, steps: int = 8):
    # nonnegative per-(S, pi) shifts, each < half the smallest merge slack,
    # so every strict inequality of the base survives
    half = _min_merge_slack(base) / 2
    return PartitionFunctionGame(
        base.n, {key: v + half * Fraction(rng.randrange(steps), steps)
                 for key, v in base.values.items()}
    )


def _flatten_pairs(g: PartitionFunctionGame, rng: random.Random,
                   per_partition: bool) -> PartitionFunctionGame:
    # A two-player block {p, q} can only arise from merging {p} and {q}, so
    # lowering v({p,q}, pi') to v({p}, pi) + v({q}, pi) creates an exact
    # equality without breaking any other merge inequality.
    keys = [(s, p) for s, p in cb.embedded_coalitions(g.n) if cb.size(s) == 2]
    if per_partition:
        groups = [[key] for key in keys]
    else:
        pairs = sorted({s for s, _ in keys})
        groups = [[key for key in keys if key[0] == s] for s in pairs]
    picked = [grp for grp in groups if rng.random() < 0.5] or [rng.choice(groups)]
    values = dict(g.values)
    for grp in picked:
        for s, p in grp:
            a, b = (1 << i for i in cb.members(s))
            finer = Partition.of(g.n, [a, b, *p.without(s)])
            values[(s, p)] = values[(a, finer)] + values[(b, finer)]
    return PartitionFunctionGame(g.n, values)


def generate_random(n: int, cls: str, seed: int, weights=None, perturb: bool = True):
    """Random superadditive game of class ``strict-pfg``, ``weak-cf`` or ``weak-pfg``.

    The result is re-classified before being returned.  ``weak-cf`` returns a
    :class:`CharacteristicFunctionGame`; the other classes return a PFG.
    """
    if not 2 <= n <= 6:
        raise InputError(f"generator supports 2..6 players, got {n}")
    if cls not in GENERATOR_CLASSES:
        raise InputError(f"unknown class {cls!r}; expected one of {GENERATOR_CLASSES}")
    if cls == WEAK_PFG and n < 3:
        raise InputError("two-player games cannot be partition-dependent; use weak-cf")
    rng = random.Random(seed)
    if weights is None:
        weights = [rng.randint(1, 6) for _ in range(n)]
    if len(weights) != n or any(w <= 0 for w in weights):
        raise InputError("weights must be n positive numbers")
    base = squared_weight_game([Fraction(w) for w in weights]).lift()

    if cls == STRICT_PFG:
        game = _perturbed(base, rng) if perturb else base
        want = STRICT
    elif cls == WEAK_CF:
        flat = _flatten_pairs(base, rng, per_partition=False)
        game = flat.to_characteristic()
        want = WEAK_ONLY
    else:
        game = _flatten_pairs(_perturbed(base, rng) if perturb else base, rng, per_partition=True)
        want = WEAK_ONLY
    got = classify_superadditivity(game).cls
    if got != want:
        raise AssertionError(f"generator produced a {got} game, wanted {want}")
    return game
