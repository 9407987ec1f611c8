"""Set partitions of a finite ground set and their lattice operations.

Partitions are kept in canonical form (members of a block ascending, blocks
ordered by their least member), so equality and hashing are structural.
The refinement order used throughout is "p is finer than q"; ``partition_meet``
is the coarsest common refinement and ``partition_join`` the finest common
coarsening.
"""
from __future__ import annotations

import decimal
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Any, Hashable, Iterable, Iterator, Sequence

__all__ = [
    "SetPartition",
    "PartitionError",
    "is_finer",
    "partition_meet",
    "partition_join",
    "all_partitions",
    "bell",
    "bell_dobinski",
    "model_count",
]


class PartitionError(ValueError):
    """Raised for malformed partitions or mismatched ground sets."""


@dataclass(frozen=True)
class SetPartition:
    """An immutable partition of a finite set of comparable, hashable ids."""

    blocks: tuple[tuple[Any, ...], ...]
    ground: tuple[Any, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        canon = []
        seen: set = set()
        for block in self.blocks:
            b = tuple(sorted(block))
            if not b:
                raise PartitionError("empty block in partition")
            for x in b:
                if x in seen:
                    raise PartitionError(f"element {x!r} occurs in more than one block")
                seen.add(x)
            canon.append(b)
        canon.sort(key=lambda b: b[0])
        object.__setattr__(self, "blocks", tuple(canon))
        object.__setattr__(self, "ground", tuple(sorted(seen)))

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[Hashable]], ground: Iterable[Hashable] | None = None) -> "SetPartition":
        """Build a partition, optionally checking it covers ``ground`` exactly."""
        p = cls(tuple(tuple(b) for b in blocks))
        if ground is not None:
            g = tuple(sorted(ground))
            if len(g) != len(set(g)):
                raise PartitionError("ground set has repeated elements")
            if p.ground != g:
                raise PartitionError(f"blocks cover {list(p.ground)}, expected {list(g)}")
        return p

    @classmethod
    def atomic(cls, ground: Iterable[Hashable]) -> "SetPartition":
        return cls(tuple((x,) for x in ground))

    @classmethod
    def single(cls, ground: Iterable[Hashable]) -> "SetPartition":
        g = tuple(ground)
        return cls((g,) if g else ())

    @classmethod
    def from_labels(cls, ground: Sequence[Hashable], labels: Sequence[Hashable]) -> "SetPartition":
        """Group ``ground[i]`` by ``labels[i]``."""
        groups: dict = {}
        for x, lab in zip(ground, labels, strict=True):
            groups.setdefault(lab, []).append(x)
        return cls(tuple(tuple(v) for v in groups.values()))

    @cached_property
    def block_of(self) -> dict[Any, int]:
        """Map from element to the index of its block."""
        return {x: i for i, b in enumerate(self.blocks) for x in b}

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self) -> Iterator[tuple[Any, ...]]:
        return iter(self.blocks)

    def restrict(self, subset: Iterable[Hashable]) -> "SetPartition":
        """Partition induced on ``subset`` (which must lie in the ground set)."""
        keep = set(subset)
        missing = keep.difference(self.block_of)
        if missing:
            raise PartitionError(f"elements {sorted(missing)} not in ground set")
        return SetPartition(tuple(t for t in (tuple(x for x in b if x in keep) for b in self.blocks) if t))

    def to_list(self) -> list[list[Any]]:
        return [list(b) for b in self.blocks]

    def __str__(self) -> str:
        return "{" + ", ".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"


def _same_ground(p: SetPartition, q: SetPartition) -> None:
    if p.ground != q.ground:
        raise PartitionError("partitions are over different ground sets")


def is_finer(p: SetPartition, q: SetPartition) -> bool:
    """True iff every block of ``q`` is a union of blocks of ``p``."""
    _same_ground(p, q)
    qb = q.block_of
    return all(len({qb[x] for x in b}) == 1 for b in p.blocks)


def partition_meet(p: SetPartition, q: SetPartition) -> SetPartition:
    """Coarsest common refinement: nonempty intersections of blocks."""
    _same_ground(p, q)
    pb, qb = p.block_of, q.block_of
    return SetPartition.from_labels(p.ground, [(pb[x], qb[x]) for x in p.ground])


def partition_join(p: SetPartition, q: SetPartition) -> SetPartition:
    """Finest common coarsening, by union-find over both block systems."""
    _same_ground(p, q)
    parent = {x: x for x in p.ground}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for part in (p, q):
        for b in part.blocks:
            r = find(b[0])
            for x in b[1:]:
                s = find(x)
                if s != r:
                    parent[s] = r
    return SetPartition.from_labels(p.ground, [find(x) for x in p.ground])


def _rgs(n: int) -> Iterator[list[int]]:
    # restricted-growth strings a[0]=0, a[i] <= 1 + max(a[:i]), lexicographic
    if n == 0:
        yield []
        return
    a = [0] * n
    m = [0] * n  # m[i] = max(a[:i+1])
    while True:
        yield a
        i = n - 1
        while i > 0 and a[i] > m[i - 1]:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        m[i] = max(m[i - 1], a[i])
        for j in range(i + 1, n):
            a[j] = 0
            m[j] = m[i]


def all_partitions(ground: Sequence[Hashable]) -> Iterator[SetPartition]:
    """Stream every partition of ``ground`` in restricted-growth order."""
    g = tuple(sorted(ground))
    for a in _rgs(len(g)):
        blocks: list[list] = []
        for x, k in zip(g, a):
            if k == len(blocks):
                blocks.append([x])
            else:
                blocks[k].append(x)
        yield SetPartition(tuple(tuple(b) for b in blocks))


@lru_cache(maxsize=None)
def bell(d: int) -> int:
    """Bell number via B_{d+1} = sum_k C(d,k) B_k."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    row = [1]
    for m in range(d):
        row.append(sum(math.comb(m, k) * row[k] for k in range(m + 1)))
    return row[d]


def bell_dobinski(d: int) -> int:
    """Least integer above the first 2d terms of Dobinski's series.

    Independent of :func:`bell`; used as a cross-check.
    """
    partial = sum((Fraction(k**d, math.factorial(k)) for k in range(2 * d)), Fraction(0))
    ctx = decimal.Context(prec=80)
    value = ctx.divide(decimal.Decimal(partial.numerator), decimal.Decimal(partial.denominator))
    value = ctx.multiply(value, ctx.exp(decimal.Decimal(-1)))
    return int(value.to_integral_value(rounding=decimal.ROUND_FLOOR)) + 1


def model_count(v: int) -> int:
    """Number of vertex- and edge-coloured graphs on ``v`` labelled vertices."""
    if v < 1:
        raise ValueError("v must be positive")
    return bell(v) * bell(v * (v - 1) // 2 + 1)
