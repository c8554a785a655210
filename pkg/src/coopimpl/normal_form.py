"""Normal-form games, composite games, and the kappa/rho counters.

A strategy profile is a tuple of per-player strategy *indices* into
``game.strategies``; ``game.labels(profile)`` recovers the labels.  Scans
run on a :class:`PayoffTable`, an integer tensor ``values`` of shape
``(|X_1|, ..., |X_n|, n)`` such that ``payoff = values / scale`` exactly.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from . import combinatorics as cb
from .combinatorics import Partition
from .errors import AmbiguityError, InputError

MAX_DENSE_PROFILES = 4096
_INT64_SAFE = 2**60


@dataclass(frozen=True, order=True)
class StrategyLabel:
    """sigma_i^S: player ``i``'s part of coalition ``tag``'s joint strategy."""

    player: int
    tag: int

    def __post_init__(self):
        if not self.tag >> self.player & 1:
            raise InputError(f"tag {cb.format_coalition(self.tag)} does not contain player {self.player}")

    def __str__(self) -> str:
        # 1-based: "2:{1,2}"
        return f"{self.player + 1}:{cb.format_coalition(self.tag, one_based=True)}"

    _PATTERN = re.compile(r"^\s*(\d+)\s*:\s*\{([\d,\s]*)\}\s*$")

    @classmethod
    def parse(cls, text: str) -> "StrategyLabel":
        m = cls._PATTERN.match(text)
        if not m:
            raise InputError(f"bad strategy label {text!r}; expected 'i:{{members}}'")
        player = int(m.group(1)) - 1
        tag = cb.mask_of(int(t) - 1 for t in m.group(2).split(",") if t.strip())
        return cls(player, tag)


def label_text(label) -> str:
    return str(label)


def parse_label(text: str):
    try:
        return StrategyLabel.parse(text)
    except InputError:
        return text  # opaque strategy name


def _exact_dtype(bound: int):
    return np.int64 if bound < _INT64_SAFE else object


@dataclass(frozen=True)
class PayoffTable:
    values: np.ndarray
    scale: int

    @classmethod
    def from_fractions(cls, arr: np.ndarray) -> "PayoffTable":
        """Object array of Fractions -> integer table with a common scale."""
        flat = arr.ravel()
        scale = 1
        for v in flat:
            scale = math.lcm(scale, Fraction(v).denominator)
        ints = [int(Fraction(v) * scale) for v in flat]
        bound = max((abs(v) for v in ints), default=0) * max(arr.shape[-1], 1)
        return cls(np.array(ints, dtype=_exact_dtype(bound)).reshape(arr.shape), scale)

    def exact(self, index) -> tuple[Fraction, ...]:
        return tuple(Fraction(int(v), self.scale) for v in self.values[tuple(index)])


class NormalFormGame:
    """Base class; subclasses provide ``n``, ``strategies`` and ``payoff``."""

    n: int
    strategies: tuple[tuple, ...]

    def payoff(self, profile: Sequence[int]) -> tuple[Fraction, ...]:
        raise NotImplementedError

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.strategies)

    def profiles(self):
        return itertools.product(*(range(m) for m in self.sizes))

    def labels(self, profile: Sequence[int]) -> tuple:
        return tuple(self.strategies[i][k] for i, k in enumerate(profile))

    def index_of(self, player: int, label) -> int:
        return self.strategies[player].index(label)

    def profile_of(self, labels: Sequence) -> tuple[int, ...]:
        return tuple(self.index_of(i, lab) for i, lab in enumerate(labels))

    def table(self) -> PayoffTable:
        cached = self.__dict__.get("_table")
        if cached is None:
            arr = np.empty(self.sizes + (self.n,), dtype=object)
            for prof in self.profiles():
                arr[prof] = self.payoff(prof)
            cached = self.__dict__["_table"] = PayoffTable.from_fractions(arr)
        return cached

    def to_dense(self) -> "DenseGame":
        if math.prod(self.sizes) > MAX_DENSE_PROFILES:
            raise InputError(f"dense tables are limited to {MAX_DENSE_PROFILES} profiles")
        return DenseGame(self.strategies, {p: self.payoff(p) for p in self.profiles()})


class DenseGame(NormalFormGame):
    def __init__(self, strategies: Sequence[Sequence], payoffs: Mapping[tuple, Sequence]):
        self.strategies = tuple(tuple(s) for s in strategies)
        self.n = len(self.strategies)
        if self.n == 0 or any(len(s) == 0 for s in self.strategies):
            raise InputError("every player needs at least one strategy")
        expected = math.prod(self.sizes)
        if expected > MAX_DENSE_PROFILES:
            raise InputError(f"dense tables are limited to {MAX_DENSE_PROFILES} profiles")
        table = {}
        for prof, u in payoffs.items():
            prof = tuple(prof)
            if len(prof) != self.n or any(not 0 <= k < m for k, m in zip(prof, self.sizes)):
                raise InputError(f"profile {list(prof)} out of range")
            if len(u) != self.n:
                raise InputError(f"profile {list(prof)} needs {self.n} payoffs")
            table[prof] = tuple(Fraction(v) for v in u)
        if len(table) != expected:
            missing = next(p for p in self.profiles() if p not in table)
            raise InputError(f"dense table has {len(table)} rows, expected {expected}; "
                             f"first missing profile {list(missing)}")
        self._payoffs = table

    def payoff(self, profile):
        return self._payoffs[tuple(profile)]

    def __eq__(self, other):
        return (isinstance(other, DenseGame) and self.strategies == other.strategies
                and self._payoffs == other._payoffs)

    __hash__ = None


def coalition_payoff(game: NormalFormGame, coalition: int, profile) -> Fraction:
    """u_S(x): sum of member payoffs."""
    if not coalition:
        raise InputError("coalition payoff needs a nonempty coalition")
    u = game.payoff(profile)
    return sum((u[i] for i in cb.members(coalition)), Fraction(0))


class CompositeGame:
    """The game played by the blocks of ``partition`` with pooled payoffs.

    Block ``b``'s joint strategies are indexed by ravelling its members'
    strategy indices (members ascending).
    """

    def __init__(self, base: NormalFormGame, partition: Partition):
        if partition.n != base.n:
            raise InputError("partition is over a different player set")
        self.base = base
        self.partition = partition
        self.blocks = partition.blocks
        self.members = [cb.members(b) for b in self.blocks]
        sizes = base.sizes
        self.member_sizes = [tuple(sizes[i] for i in mem) for mem in self.members]
        self.joint_sizes = tuple(math.prod(ms) for ms in self.member_sizes)

    def block_index(self, coalition: int) -> int:
        try:
            return self.blocks.index(coalition)
        except ValueError:
            raise InputError(f"{cb.format_coalition(coalition)} is not a block of {self.partition}") from None

    def joint_to_members(self, b: int, j: int) -> tuple[int, ...]:
        return tuple(int(v) for v in np.unravel_index(j, self.member_sizes[b])) if self.member_sizes[b] else ()

    def members_to_joint(self, b: int, strategies: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(strategies), self.member_sizes[b]))

    def to_profile(self, joint: Sequence[int]) -> tuple[int, ...]:
        prof = [0] * self.base.n
        for b, j in enumerate(joint):
            for i, k in zip(self.members[b], self.joint_to_members(b, j)):
                prof[i] = k
        return tuple(prof)

    def to_joint(self, profile: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.members_to_joint(b, [profile[i] for i in mem])
                     for b, mem in enumerate(self.members))

    @cached_property
    def table(self) -> PayoffTable:
        """Block-level table of shape ``joint_sizes + (len(blocks),)``."""
        base = self.base.table()
        order = [i for mem in self.members for i in mem]
        u = np.transpose(base.values, order + [self.base.n])
        u = u.reshape(self.joint_sizes + (self.base.n,))
        cols = [u[..., list(mem)].sum(axis=-1) for mem in self.members]
        return PayoffTable(np.stack(cols, axis=-1), base.scale)

    def block_payoffs(self, profile) -> tuple[Fraction, ...]:
        return self.table.exact(self.to_joint(profile))


# --- kappa / rho ---------------------------------------------------------------


class DominanceRegistry:
    """Each coalition's dominant joint strategy, as ``{coalition: {player: index}}``."""

    def __init__(self, n: int, dominant: Mapping[int, Mapping[int, int]]):
        self.n = n
        self.dominant = {s: dict(j) for s, j in dominant.items()}
        self._by_move: dict[tuple[int, int], list[int]] = {}
        for s, joint in self.dominant.items():
            for i, k in joint.items():
                self._by_move.setdefault((i, k), []).append(s)

    def rho(self, profile: Sequence[int], player: int) -> int:
        hits = [s for s in self._by_move.get((player, profile[player]), ())
                if all(profile[j] == k for j, k in self.dominant[s].items())]
        if len(hits) > 1:
            raise AmbiguityError(hits, player)
        return hits[0] if hits else 0

    def rho_map(self, profile) -> tuple[int, ...]:
        return tuple(self.rho(profile, i) for i in range(self.n))

    def kappa(self, profile, coalition: int) -> int:
        return sum(1 for i in cb.members(coalition) if self.rho(profile, i))


def tag_registry(game: NormalFormGame) -> DominanceRegistry:
    """Registry read from ``i:{S}`` labels: coalition S's joint strategy is every member playing tag S."""
    dominant = {}
    for s in cb.nonempty_coalitions(game.n):
        joint = {}
        for i in cb.members(s):
            label = StrategyLabel(i, s)
            if label not in game.strategies[i]:
                break
            joint[i] = game.index_of(i, label)
        else:
            dominant[s] = joint
    return DominanceRegistry(game.n, dominant)


def rho(registry: DominanceRegistry, profile, player: int) -> int:
    return registry.rho(profile, player)


def kappa(registry: DominanceRegistry, profile, coalition: int) -> int:
    return registry.kappa(profile, coalition)
