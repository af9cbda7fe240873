import itertools
import math
from concurrent.futures import ThreadPoolExecutor

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from immanons import DomainError, RangeError
from immanons.partitions import (
    CharacterTable,
    Partition,
    character,
    character_table,
    class_size,
    cycle_type_of,
    enumerate_partitions,
    hook_dimension,
    majorizes,
    signature,
)
from oracles import TABLE_N2, TABLE_N3, frobenius_character, hook_product_dimension, perm_cycle_type

PARTITION_COUNTS = [1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]


def test_enumerate_small():
    assert enumerate_partitions(1) == [(1,)]
    assert enumerate_partitions(3) == [(3,), (2, 1), (1, 1, 1)]
    assert enumerate_partitions(5) == [(5,), (4, 1), (3, 2), (3, 1, 1), (2, 2, 1), (2, 1, 1, 1), (1, 1, 1, 1, 1)]


@pytest.mark.parametrize("n", range(1, 13))
def test_enumerate_counts(n):
    parts = enumerate_partitions(n)
    assert len(parts) == PARTITION_COUNTS[n - 1]
    assert parts == sorted(parts, reverse=True)
    assert all(p.size == n for p in parts)


@pytest.mark.parametrize("n", [0, 13, -2])
def test_enumerate_range(n):
    with pytest.raises(RangeError):
        enumerate_partitions(n)


def test_partition_validation():
    with pytest.raises(DomainError):
        Partition((1, 2))
    with pytest.raises(DomainError):
        Partition((2, 0))
    assert Partition.parse("3.1.1") == (3, 1, 1)
    assert Partition((3, 1, 1)).label == "3.1.1"
    assert Partition((3, 1)).conjugate() == (2, 1, 1)


def test_majorization_examples():
    assert majorizes((2, 1, 1), (2, 2))
    assert not majorizes((2, 2, 2), (3, 1, 1, 1))
    assert not majorizes((3, 1, 1, 1), (2, 2, 2))
    assert majorizes((3, 1), (3, 1))
    chain = [(1, 1, 1, 1), (2, 1, 1), (2, 2), (3, 1), (4,)]
    assert all(majorizes(a, b) for a, b in zip(chain, chain[1:]))
    with pytest.raises(DomainError):
        majorizes((2, 1), (2, 2))


@pytest.mark.parametrize("n", range(1, 8))
def test_majorization_is_partial_order(n):
    parts = enumerate_partitions(n)
    for a in parts:
        assert majorizes(a, a)
        assert majorizes(a, (n,)) and majorizes((1,) * n, a)
        for b in parts:
            if a != b and majorizes(a, b):
                assert not majorizes(b, a)
            for c in parts:
                if majorizes(a, b) and majorizes(b, c):
                    assert majorizes(a, c)


def test_hook_dimension_examples():
    assert hook_dimension((2, 1)) == 2
    assert hook_dimension((2, 2)) == 2
    for n in range(1, 9):
        assert hook_dimension((n,)) == 1
        assert hook_dimension((1,) * n) == 1


@pytest.mark.parametrize("n", range(1, 9))
def test_hook_dimension_matches_identity_character(n):
    for lam in enumerate_partitions(n):
        assert hook_dimension(lam) == character(lam, (1,) * n) == hook_product_dimension(lam)
    assert sum(hook_dimension(lam) ** 2 for lam in enumerate_partitions(n)) == math.factorial(n)


def test_small_character_tables():
    for n, table in ((2, TABLE_N2), (3, TABLE_N3)):
        identity, transposition = (1,) * n, (2,) + (1,) * (n - 2)
        classes = [identity, transposition] + ([(3,)] if n == 3 else [])
        for lam, row in table.items():
            assert tuple(character(lam, c) for c in classes) == row


def test_character_examples():
    assert character((2, 1), (1, 1, 1)) == 2
    assert character((2, 1), (2, 1)) == 0
    assert character((2, 1), (3,)) == -1
    with pytest.raises(DomainError):
        character((2, 1), (2, 2))


@pytest.mark.parametrize("n", range(1, 8))
def test_character_matches_frobenius(n):
    for lam in enumerate_partitions(n):
        for mu in enumerate_partitions(n):
            assert character(lam, mu) == frobenius_character(tuple(lam), tuple(mu))


@pytest.mark.parametrize("n", range(1, 9))
def test_character_table_invariants(n):
    t = character_table(n)
    fact = math.factorial(n)
    assert sum(t.class_sizes) == fact
    assert t.row((n,)) == (1,) * len(t.classes)
    assert t.row((1,) * n) == tuple(signature(c) for c in t.classes)
    for i, ri in enumerate(t.values):
        for j, rj in enumerate(t.values):
            s = sum(m * a * b for m, a, b in zip(t.class_sizes, ri, rj))
            assert s == (fact if i == j else 0)
    identity = t.classes.index((1,) * n)
    for k in range(len(t.classes)):
        s = sum(row[identity] * row[k] for row in t.values)
        assert s == (fact if k == identity else 0)


def test_character_table_range_and_csv():
    with pytest.raises(RangeError):
        character_table(9)
    t = character_table(2)
    text = t.to_csv()
    assert text.splitlines() == ["lambda,2,1.1", "2,1,1", "1.1,-1,1"]
    assert CharacterTable.from_csv(text) == t
    assert CharacterTable.from_csv(character_table(5).to_csv()) == character_table(5)


@pytest.mark.parametrize("n", range(1, 7))
def test_class_sizes_by_enumeration(n):
    counts = {}
    for p in itertools.permutations(range(n)):
        counts[perm_cycle_type(p)] = counts.get(perm_cycle_type(p), 0) + 1
    for mu in enumerate_partitions(n):
        assert class_size(mu) == counts[tuple(mu)]


def test_cycle_type_of():
    assert cycle_type_of((2, 1, 3)) == (2, 1)
    assert cycle_type_of((1, 0, 2)) == (2, 1)
    assert cycle_type_of((2, 3, 1)) == (3,)
    assert cycle_type_of(range(1, 6)) == (1, 1, 1, 1, 1)
    with pytest.raises(DomainError):
        cycle_type_of((1, 1, 3))


@settings(max_examples=200, deadline=None)
@given(st.permutations(list(range(7))))
def test_cycle_type_is_conjugation_invariant(perm):
    tau = (3, 0, 6, 1, 5, 2, 4)
    tau_inv = [tau.index(i) for i in range(7)]
    conj = [tau[perm[tau_inv[i]]] for i in range(7)]
    assert cycle_type_of(conj) == cycle_type_of(perm)


def test_concurrent_character_calls_agree():
    work = [(lam, mu) for lam in enumerate_partitions(8) for mu in enumerate_partitions(8)]
    serial = [frobenius_character(tuple(l), tuple(m)) for l, m in work]
    with ThreadPoolExecutor(8) as pool:
        threaded = list(pool.map(lambda lm: character(*lm), work))
    assert threaded == serial
