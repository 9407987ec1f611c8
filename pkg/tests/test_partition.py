import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symlat.partition import (
    PartitionError,
    SetPartition,
    all_partitions,
    bell,
    bell_dobinski,
    is_finer,
    model_count,
    partition_join,
    partition_meet,
)

BELL = [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975, 678570]


def test_bell_numbers():
    assert [bell(d) for d in range(12)] == BELL


@pytest.mark.parametrize("d", range(21))
def test_dobinski_agrees_with_recursion(d):
    assert bell_dobinski(d) == bell(d)


def test_model_counts():
    assert model_count(1) == 1
    assert model_count(4) == 13155
    assert model_count(5) == 35285640


def _model_count_oracle(v):
    # direct sum over edge subsets of size k: C(m, k) * B(k) * B(v)
    m = v * (v - 1) // 2
    return bell(v) * sum(math.comb(m, k) * bell(k) for k in range(m + 1))


@pytest.mark.parametrize("v", range(1, 8))
def test_model_count_formula(v):
    assert model_count(v) == _model_count_oracle(v)


@pytest.mark.parametrize("d", range(7))
def test_all_partitions_count_and_distinct(d):
    parts = list(all_partitions(range(d)))
    assert len(parts) == bell(d)
    assert len(set(parts)) == bell(d)


def test_canonical_form():
    p = SetPartition.from_blocks([[3, 1], [2]])
    q = SetPartition.from_blocks([[2], [1, 3]])
    assert p == q
    assert p.blocks == ((1, 3), (2,))
    assert p.block_of[3] == p.block_of[1] != p.block_of[2]


def test_from_labels():
    p = SetPartition.from_labels("abcd", [0, 1, 0, 2])
    assert p.to_list() == [["a", "c"], ["b"], ["d"]]


def test_invalid_partitions():
    with pytest.raises(PartitionError):
        SetPartition.from_blocks([[1, 2], [2, 3]])
    with pytest.raises(PartitionError):
        SetPartition.from_blocks([[1], []])
    with pytest.raises(PartitionError):
        SetPartition.from_blocks([[1]], ground=[1, 2])


def test_restrict():
    p = SetPartition.from_blocks([[1, 2, 3], [4, 5]])
    assert p.restrict([1, 4, 5]) == SetPartition.from_blocks([[1], [4, 5]])


def test_meet_join_examples():
    p = SetPartition.from_blocks([[1, 2], [3, 4]])
    q = SetPartition.from_blocks([[1], [2, 3], [4]])
    assert partition_meet(p, q) == SetPartition.atomic([1, 2, 3, 4])
    assert partition_join(p, q) == SetPartition.single([1, 2, 3, 4])


GROUND = list(range(5))
ALL5 = list(all_partitions(GROUND))
partitions5 = st.sampled_from(ALL5)


@settings(max_examples=200, deadline=None)
@given(partitions5, partitions5)
def test_meet_join_against_brute_force(p, q):
    lower = [r for r in ALL5 if is_finer(r, p) and is_finer(r, q)]
    upper = [r for r in ALL5 if is_finer(p, r) and is_finer(q, r)]
    m, j = partition_meet(p, q), partition_join(p, q)
    assert m in lower and all(is_finer(r, m) for r in lower)
    assert j in upper and all(is_finer(j, r) for r in upper)


@settings(max_examples=100, deadline=None)
@given(partitions5, partitions5, partitions5)
def test_lattice_laws(p, q, r):
    assert partition_meet(p, q) == partition_meet(q, p)
    assert partition_join(p, partition_meet(p, q)) == p
    assert partition_meet(p, partition_join(p, q)) == p
    assert partition_join(partition_join(p, q), r) == partition_join(p, partition_join(q, r))


def test_finer_is_partial_order():
    ps = list(all_partitions(range(4)))
    for a, b in itertools.product(ps, repeat=2):
        if is_finer(a, b) and is_finer(b, a):
            assert a == b
