"""Integer partitions, conjugacy classes of S_n and irreducible characters.

Characters are evaluated exactly with the Murnaghan-Nakayama rule.  Rim
hooks are removed on the beta-set (abacus) representation of a shape, and
results are memoised on ``(shape, remaining cycle lengths)``.

Permutations are image tuples.  Public functions accept either one-based
images (``(2, 1, 3)``) or zero-based images (``(1, 0, 2)``); the two sets of
values never coincide, so the convention is detected from the entries.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DomainError, RangeError

MAX_PARTITION_N = 12
MAX_TABLE_N = 8
# permutation tables above this size are streamed in blocks, not cached
MAX_CACHED_PERM_N = 8


class Partition(tuple):
    """A non-increasing tuple of positive integers.

    >>> Partition((2, 1)).size
    3
    >>> Partition.parse("3.1.1")
    Partition(3, 1, 1)
    """

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        if any(p <= 0 for p in parts):
            raise DomainError(f"partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise DomainError(f"partition parts must be non-increasing: {parts}")
        return super().__new__(cls, parts)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse a dot-joined label such as ``"2.1"``."""
        text = text.strip()
        try:
            parts = [int(p) for p in text.split(".")]
        except ValueError:
            raise DomainError(f"malformed partition label {text!r}") from None
        return cls(parts)

    @property
    def size(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    @property
    def label(self) -> str:
        return ".".join(str(p) for p in self)

    def conjugate(self) -> "Partition":
        if not self:
            return Partition()
        return Partition(sum(1 for p in self if p > j) for j in range(self[0]))

    def is_bosonic(self) -> bool:
        return len(self) == 1

    def is_fermionic(self) -> bool:
        return all(p == 1 for p in self)

    def __repr__(self) -> str:
        return f"Partition({', '.join(str(p) for p in self)})"


def as_partition(obj) -> Partition:
    if isinstance(obj, Partition):
        return obj
    if isinstance(obj, str):
        return Partition.parse(obj)
    return Partition(obj)


def bosonic(n: int) -> Partition:
    return Partition((n,))


def fermionic(n: int) -> Partition:
    return Partition((1,) * n)


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def enumerate_partitions(n: int) -> list[Partition]:
    """All partitions of ``n`` in reverse lexicographic order.

    The order starts at the one-row shape ``(n)`` and ends at ``(1,...,1)``.
    It is a linear extension of the majorization order.
    """
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_PARTITION_N:
        raise RangeError(f"n must be an integer in [1, {MAX_PARTITION_N}], got {n!r}")
    return [Partition(p) for p in _partitions(int(n), int(n))]


def majorizes(eta, lam) -> bool:
    """Return True iff ``eta`` is majorized by ``lam`` (``eta <= lam``).

    Prefix sums of ``eta`` must never exceed those of ``lam``; the shorter
    partition is padded with zeros.
    """
    eta, lam = as_partition(eta), as_partition(lam)
    if eta.size != lam.size:
        raise DomainError(f"size mismatch: {eta.size} vs {lam.size}")
    a = b = 0
    for j in range(max(len(eta), len(lam))):
        a += eta[j] if j < len(eta) else 0
        b += lam[j] if j < len(lam) else 0
        if a > b:
            return False
    return True


def hooks(lam) -> list[int]:
    lam = as_partition(lam)
    conj = lam.conjugate()
    return [lam[i] - j + conj[j] - i - 1 for i in range(len(lam)) for j in range(lam[i])]


def hook_dimension(lam) -> int:
    """Dimension of the irreducible representation: n! / prod(hook lengths)."""
    lam = as_partition(lam)
    return math.factorial(lam.size) // math.prod(hooks(lam))


def class_size(mu) -> int:
    """Number of permutations with cycle type ``mu``."""
    mu = as_partition(mu)
    denom = 1
    for length in set(mu):
        m = mu.count(length)
        denom *= length**m * math.factorial(m)
    return math.factorial(mu.size) // denom


def signature(mu) -> int:
    mu = as_partition(mu)
    return -1 if (mu.size - len(mu)) % 2 else 1


@lru_cache(maxsize=None)
def _murnaghan_nakayama(shape: tuple[int, ...], cycles: tuple[int, ...]) -> int:
    if not cycles:
        return 1 if not shape else 0
    r, rest = cycles[0], cycles[1:]
    top = len(shape) - 1
    beta = [part + top - i for i, part in enumerate(shape)]
    occupied = set(beta)
    total = 0
    for b in beta:
        target = b - r
        if target < 0 or target in occupied:
            continue
        height = sum(1 for c in beta if target < c < b)
        new_beta = sorted((occupied - {b}) | {target}, reverse=True)
        new_shape = tuple(v for v in (nb - (top - i) for i, nb in enumerate(new_beta)) if v > 0)
        total += (-1) ** height * _murnaghan_nakayama(new_shape, rest)
    return total


def character(lam, cycle_type) -> int:
    """Character of the irreducible representation ``lam`` on a conjugacy class."""
    lam, mu = as_partition(lam), as_partition(cycle_type)
    if lam.size != mu.size:
        raise DomainError(f"size mismatch: lambda has size {lam.size}, cycle type {mu.size}")
    return _murnaghan_nakayama(tuple(lam), tuple(mu))


def _zero_based(perm: Sequence[int]) -> tuple[int, ...]:
    perm = tuple(int(p) for p in perm)
    n = len(perm)
    values = set(perm)
    if values == set(range(1, n + 1)):
        return tuple(p - 1 for p in perm)
    if values == set(range(n)):
        return perm
    raise DomainError(f"not a permutation: {perm}")


def cycle_type_of(perm: Sequence[int]) -> Partition:
    """Cycle type of a permutation given by its image list."""
    p = _zero_based(perm)
    seen = [False] * len(p)
    lengths = []
    for start in range(len(p)):
        if seen[start]:
            continue
        length, j = 0, start
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        lengths.append(length)
    return Partition(sorted(lengths, reverse=True))


@dataclass(frozen=True)
class CharacterTable:
    """Character values ``values[i][k] = chi_{partitions[i]}(classes[k])``."""

    n: int
    partitions: tuple[Partition, ...]
    classes: tuple[Partition, ...]
    class_sizes: tuple[int, ...]
    values: tuple[tuple[int, ...], ...]

    def value(self, lam, mu) -> int:
        return self.values[self.partitions.index(as_partition(lam))][
            self.classes.index(as_partition(mu))
        ]

    def row(self, lam) -> tuple[int, ...]:
        return self.values[self.partitions.index(as_partition(lam))]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["lambda"] + [c.label for c in self.classes])
        for lam, row in zip(self.partitions, self.values):
            writer.writerow([lam.label] + list(row))
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "CharacterTable":
        rows = list(csv.reader(io.StringIO(text)))
        classes = tuple(Partition.parse(c) for c in rows[0][1:])
        partitions = tuple(Partition.parse(r[0]) for r in rows[1:])
        values = tuple(tuple(int(v) for v in r[1:]) for r in rows[1:])
        return cls(
            n=classes[0].size,
            partitions=partitions,
            classes=classes,
            class_sizes=tuple(class_size(c) for c in classes),
            values=values,
        )


def character_table(n: int) -> CharacterTable:
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_TABLE_N:
        raise RangeError(f"character tables are supported for 1 <= n <= {MAX_TABLE_N}, got {n!r}")
    parts = tuple(enumerate_partitions(n))
    return CharacterTable(
        n=int(n),
        partitions=parts,
        classes=parts,
        class_sizes=tuple(class_size(c) for c in parts),
        values=tuple(tuple(character(lam, mu) for mu in parts) for lam in parts),
    )


# -- permutation tables used by the numeric kernels ------------------------


def _class_keys(perms: np.ndarray, n: int) -> np.ndarray:
    """Integer key encoding the cycle type of every row of ``perms``."""
    k = perms.shape[0]
    offset = (np.arange(k, dtype=np.intp) * n)[:, None]
    flat = (perms.astype(np.intp) + offset).ravel()
    start = np.arange(k * n, dtype=np.intp)
    cur = flat.copy()
    length = np.zeros(k * n, dtype=np.int8)
    for step in range(1, n + 1):
        length[(cur == start) & (length == 0)] = step
        if step < n:
            cur = flat[cur]
    # an element on a cycle of length l contributes lcm/l * (n+1)^(l-1), so
    # each cycle adds (n+1)^(l-1) * lcm and the row sum is injective
    lcm = math.lcm(*range(1, n + 1))
    weight = np.zeros(n + 1, dtype=np.int64)
    for ell in range(1, n + 1):
        weight[ell] = (n + 1) ** (ell - 1) * (lcm // ell)
    return weight[length].reshape(k, n).sum(axis=1)


def _partition_key(mu: Partition, n: int) -> int:
    lcm = math.lcm(*range(1, n + 1))
    return sum(mu.count(ell) * (n + 1) ** (ell - 1) * lcm for ell in set(mu))


def class_indices(perms: np.ndarray, n: int) -> np.ndarray:
    """Index into ``enumerate_partitions(n)`` of the cycle type of each row."""
    classes = enumerate_partitions(n)
    keys = np.array([_partition_key(c, n) for c in classes], dtype=np.int64)
    order = np.argsort(keys)
    pos = np.searchsorted(keys[order], _class_keys(perms, n))
    return order[pos]


@dataclass(frozen=True)
class PermutationTable:
    """All of S_n in lexicographic order with per-row conjugacy class index."""

    n: int
    perms: np.ndarray
    class_index: np.ndarray
    classes: tuple[Partition, ...]

    def characters(self, lam) -> np.ndarray:
        """``chi_lam`` evaluated on every row, as an integer vector."""
        per_class = np.array([character(lam, c) for c in self.classes], dtype=np.int64)
        return per_class[self.class_index]


def _lex_permutations(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.int8).reshape(-1, n)


@lru_cache(maxsize=None)
def permutation_table(n: int) -> PermutationTable:
    if not 1 <= n <= MAX_CACHED_PERM_N:
        raise RangeError(f"permutation tables are cached for n <= {MAX_CACHED_PERM_N}")
    perms = _lex_permutations(n)
    perms.setflags(write=False)
    idx = class_indices(perms, n)
    idx.setflags(write=False)
    return PermutationTable(n, perms, idx, tuple(enumerate_partitions(n)))


def iter_permutation_blocks(n: int) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield ``(perms, class_index)`` blocks covering S_n in lexicographic order."""
    if n <= MAX_CACHED_PERM_N:
        table = permutation_table(n)
        yield table.perms, table.class_index
        return
    tail = MAX_CACHED_PERM_N
    base = permutation_table(tail).perms
    for prefix in itertools.permutations(range(n), n - tail):
        rest = np.array(sorted(set(range(n)) - set(prefix)), dtype=np.int8)
        block = np.empty((base.shape[0], n), dtype=np.int8)
        block[:, : n - tail] = prefix
        block[:, n - tail :] = rest[base]
        yield block, class_indices(block, n)
