"""Coalitions, partitions and partition enumeration.

Coalitions are plain ``int`` bitmasks over players ``0..n-1``.  A
:class:`Partition` stores its blocks as bitmasks in canonical order
(ascending by least member), so equal partitions compare and hash equal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from .errors import InputError

MAX_PLAYERS = 12


def mask_of(members: Iterable[int]) -> int:
    mask = 0
    for i in members:
        if i < 0:
            raise InputError(f"negative player index {i}")
        mask |= 1 << i
    return mask


def members(mask: int) -> tuple[int, ...]:
    """Players in ``mask``, ascending."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def size(mask: int) -> int:
    return bin(mask).count("1")


def least(mask: int) -> int:
    if not mask:
        raise InputError("empty coalition has no least member")
    return (mask & -mask).bit_length() - 1


def full(n: int) -> int:
    return (1 << n) - 1


def subsets(mask: int) -> Iterator[int]:
    """All subsets of ``mask`` including the empty set, ascending."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def nonempty_coalitions(n: int) -> range:
    return range(1, 1 << n)


def format_coalition(mask: int, one_based: bool = False) -> str:
    shift = 1 if one_based else 0
    return "{" + ",".join(str(i + shift) for i in members(mask)) + "}"


@dataclass(frozen=True)
class Partition:
    n: int
    blocks: tuple[int, ...]

    def __post_init__(self):
        seen = 0
        for b in self.blocks:
            if b == 0:
                raise InputError("partition contains an empty block")
            if b & seen:
                raise InputError("partition blocks overlap")
            seen |= b
        if seen != full(self.n):
            raise InputError(f"blocks do not cover players 0..{self.n - 1}")
        if list(self.blocks) != sorted(self.blocks, key=least):
            raise InputError("blocks are not in canonical order; use Partition.of")

    @classmethod
    def of(cls, n: int, blocks: Iterable) -> "Partition":
        """Canonicalize ``blocks`` (bitmasks or iterables of player indices)."""
        masks = [b if isinstance(b, int) else mask_of(b) for b in blocks]
        if any(m >> n for m in masks):
            raise InputError(f"block mentions a player outside 0..{n - 1}")
        return cls(n, tuple(sorted(masks, key=least)))

    @classmethod
    def grand(cls, n: int) -> "Partition":
        return cls(n, (full(n),))

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(n, tuple(1 << i for i in range(n)))

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "Partition":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"bad partition text {text!r}: {exc}") from None
        return cls.from_json(raw, n)

    @classmethod
    def from_json(cls, raw, n: int | None = None) -> "Partition":
        if not isinstance(raw, list) or not all(isinstance(b, list) for b in raw):
            raise InputError(f"partition must be a list of lists, got {raw!r}")
        if n is None:
            n = sum(len(b) for b in raw)
        return cls.of(n, raw)

    def to_json(self) -> list[list[int]]:
        return [list(members(b)) for b in self.blocks]

    def __str__(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __contains__(self, mask) -> bool:
        return mask in self.blocks

    def block_of(self, player: int) -> int:
        for b in self.blocks:
            if b >> player & 1:
                return b
        raise InputError(f"player {player} not in partition")

    def merge(self, s: int, t: int) -> "Partition":
        """The partition with blocks ``s`` and ``t`` replaced by their union."""
        if s not in self.blocks or t not in self.blocks or s == t:
            raise InputError("merge needs two distinct blocks of the partition")
        rest = [b for b in self.blocks if b not in (s, t)]
        return Partition.of(self.n, rest + [s | t])

    def without(self, *blocks: int) -> tuple[int, ...]:
        return tuple(b for b in self.blocks if b not in blocks)


def _rgs(n: int) -> Iterator[list[int]]:
    # restricted growth strings in lexicographic order
    a = [0] * n
    top = [0] * n  # top[i] = max(a[0..i])
    while True:
        yield a
        i = n - 1
        while i > 0 and a[i] > top[i - 1]:
            i -= 1
        if i <= 0:
            return
        a[i] += 1
        top[i] = max(top[i - 1], a[i])
        for j in range(i + 1, n):
            a[j] = 0
            top[j] = top[i]


@lru_cache(maxsize=None)
def enumerate_partitions(n: int) -> tuple[Partition, ...]:
    """All partitions of ``0..n-1`` in restricted-growth-string order.

    The first partition is the grand coalition ``{N}`` and the last is the
    finest partition ``[N]``.
    """
    if not isinstance(n, int) or not 1 <= n <= MAX_PLAYERS:
        raise InputError(f"player count must be in 1..{MAX_PLAYERS}, got {n!r}")
    out = []
    for a in _rgs(n):
        blocks = [0] * (max(a) + 1)
        for player, b in enumerate(a):
            blocks[b] |= 1 << player
        # RGS numbering already orders blocks by least member
        out.append(Partition(n, tuple(blocks)))
    return tuple(out)


def bell(n: int) -> int:
    # Bell triangle
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def is_refinement(fine: Partition, coarse: Partition, strict: bool = False) -> bool:
    """True iff every block of ``coarse`` is a union of blocks of ``fine``.

    With ``strict=True`` the two partitions must additionally differ.
    """
    if fine.n != coarse.n:
        raise InputError("partitions are over different player sets")
    for b in fine.blocks:
        if b & coarse.block_of(least(b)) != b:
            return False
    return not strict or fine != coarse


def partitions_containing(n: int, coalition: int) -> list[Partition]:
    return [p for p in enumerate_partitions(n) if coalition in p.blocks]


def embedded_coalitions(n: int) -> Iterator[tuple[int, Partition]]:
    for p in enumerate_partitions(n):
        for b in p.blocks:
            yield b, p
