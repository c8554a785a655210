import itertools

import pytest
from hypothesis import given, strategies as st

from coopimpl import combinatorics as cb
from coopimpl.combinatorics import Partition, bell, enumerate_partitions, is_refinement
from coopimpl.errors import InputError


@pytest.mark.parametrize("n,count", [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52),
                                     (6, 203), (7, 877), (8, 4140)])
def test_partition_counts_are_bell_numbers(n, count):
    parts = enumerate_partitions(n)
    assert len(parts) == count == bell(n)
    assert len(set(parts)) == count


def test_single_player_has_one_partition():
    assert enumerate_partitions(1) == (Partition(1, (1,)),)


def test_enumeration_order_starts_grand_ends_singletons():
    parts = enumerate_partitions(4)
    assert parts[0] == Partition.grand(4)
    assert parts[-1] == Partition.singletons(4)


def test_refinement_examples():
    fine = Partition.singletons(3)
    a = Partition.of(3, [[0, 1], [2]])
    b = Partition.of(3, [[0, 2], [1]])
    assert is_refinement(fine, a, strict=True)
    assert is_refinement(a, a) and not is_refinement(a, a, strict=True)
    assert not is_refinement(a, b)


def test_refinement_is_a_partial_order():
    for n in range(1, 6):
        parts = enumerate_partitions(n)
        for p in parts:
            assert is_refinement(p, p)
        for p, q in itertools.product(parts, repeat=2):
            if p != q and is_refinement(p, q):
                assert not is_refinement(q, p)
        if n <= 4:
            for p, q, r in itertools.product(parts, repeat=3):
                if is_refinement(p, q) and is_refinement(q, r):
                    assert is_refinement(p, r)


def test_invalid_partitions_rejected():
    with pytest.raises(InputError):
        Partition.of(3, [[0, 1], [1, 2]])
    with pytest.raises(InputError):
        Partition.of(3, [[0, 1]])
    with pytest.raises(InputError):
        Partition(3, (4, 3))
    with pytest.raises(InputError):
        enumerate_partitions(0)


@st.composite
def partitions(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    labels = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    blocks = {}
    for i, lab in enumerate(labels):
        blocks.setdefault(lab, []).append(i)
    return Partition.of(n, list(blocks.values()))


@given(partitions())
def test_print_parse_round_trip(p):
    assert Partition.parse(str(p), p.n) == p
    assert Partition.of(p.n, p.blocks) == p


@given(partitions())
def test_every_drawn_partition_is_enumerated(p):
    assert p in enumerate_partitions(p.n)


@given(partitions(max_n=6))
def test_merge_gives_strictly_coarser_partition(p):
    for s, t in itertools.combinations(p.blocks, 2):
        merged = p.merge(s, t)
        assert is_refinement(p, merged, strict=True)
        assert len(merged) == len(p) - 1


def test_embedded_coalitions_count():
    # each partition contributes one entry per block
    for n in range(1, 6):
        assert sum(1 for _ in cb.embedded_coalitions(n)) == sum(len(p) for p in enumerate_partitions(n))


def test_coalition_text():
    assert cb.format_coalition(0b101, one_based=True) == "{1,3}"
    assert cb.members(0b1010) == (1, 3)
    assert cb.mask_of([0, 2]) == 5
