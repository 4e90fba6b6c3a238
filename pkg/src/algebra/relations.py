#!/usr/bin/env python3
# coding: utf-8

# plonkalab - relations.py
# Binary relations and partitions on dense index sets 0..n-1

from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Sequence

import numpy as np

from utils.error_handling import ShapeMismatch


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        """Merge the classes of x and y; True when they were distinct."""
        x, y = self.find(x), self.find(y)
        if x == y:
            return False
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x
        return True

    def block_ids(self) -> list[int]:
        return [self.find(x) for x in range(len(self.parent))]


def _canonical_ids(ids: Sequence[Hashable]) -> tuple[int, ...]:
    # restricted growth string: blocks numbered by first occurrence
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(b, len(seen)) for b in ids)


@dataclass(frozen=True)
class Partition:
    """A partition of 0..n-1, stored as a restricted growth string of block ids."""

    ids: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "ids", _canonical_ids(self.ids))

    @classmethod
    def discrete(cls, n: int) -> "Partition":
        return cls(tuple(range(n)))

    @classmethod
    def indiscrete(cls, n: int) -> "Partition":
        return cls((0,) * n)

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "Partition":
        uf = UnionFind(n)
        for a, b in pairs:
            uf.union(a, b)
        return cls(tuple(uf.block_ids()))

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "Partition":
        ids = [-1] * n
        for b, block in enumerate(blocks):
            for x in block:
                if not 0 <= x < n:
                    raise ShapeMismatch(f"element {x} outside 0..{n - 1}")
                if ids[x] != -1:
                    raise ShapeMismatch(f"element {x} occurs in two blocks")
                ids[x] = b
        if -1 in ids:
            raise ShapeMismatch(f"element {ids.index(-1)} is in no block")
        return cls(tuple(ids))

    @property
    def size(self) -> int:
        return len(self.ids)

    @cached_property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.num_blocks)]
        for x, b in enumerate(self.ids):
            out[b].append(x)
        return tuple(tuple(block) for block in out)

    @property
    def num_blocks(self) -> int:
        return max(self.ids) + 1 if self.ids else 0

    def block_of(self, x: int) -> tuple[int, ...]:
        return self.blocks[self.ids[x]]

    def same(self, a: int, b: int) -> bool:
        return self.ids[a] == self.ids[b]

    @cached_property
    def matrix(self) -> np.ndarray:
        ids = np.asarray(self.ids)
        m = ids[:, None] == ids[None, :]
        m.flags.writeable = False
        return m

    def pairs(self) -> frozenset[tuple[int, int]]:
        return frozenset((a, b) for block in self.blocks for a in block for b in block)

    @property
    def pair_count(self) -> int:
        return sum(len(block) ** 2 for block in self.blocks)

    def is_discrete(self) -> bool:
        return self.num_blocks == self.size

    def is_indiscrete(self) -> bool:
        return self.num_blocks <= 1

    def leq(self, other: "Partition") -> bool:
        """True when self refines other."""
        return all(other.same(block[0], x) for block in self.blocks for x in block[1:])

    def meet(self, other: "Partition") -> "Partition":
        return Partition(tuple(zip(self.ids, other.ids)))

    def join(self, other: "Partition") -> "Partition":
        uf = UnionFind(self.size)
        for part in (self, other):
            for block in part.blocks:
                for x in block[1:]:
                    uf.union(block[0], x)
        return Partition(tuple(uf.block_ids()))

    def sort_key(self) -> tuple:
        return (self.pair_count, self.blocks)

    def __len__(self):
        return self.num_blocks


@dataclass(frozen=True)
class Relation:
    """A binary relation on 0..size-1."""

    size: int
    pairs: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        pairs = frozenset((int(a), int(b)) for a, b in self.pairs)
        for a, b in pairs:
            if not (0 <= a < self.size and 0 <= b < self.size):
                raise ShapeMismatch(f"pair {(a, b)} outside 0..{self.size - 1}")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def diagonal(cls, n: int) -> "Relation":
        return cls(n, frozenset((i, i) for i in range(n)))

    @classmethod
    def full(cls, n: int) -> "Relation":
        return cls(n, frozenset((i, j) for i in range(n) for j in range(n)))

    @classmethod
    def of_partition(cls, p: Partition) -> "Relation":
        return cls(p.size, p.pairs())

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> "Relation":
        return cls(m.shape[0], frozenset(zip(*map(lambda a: a.tolist(), np.nonzero(m)))))

    def matrix(self) -> np.ndarray:
        m = np.zeros((self.size, self.size), dtype=bool)
        for a, b in self.pairs:
            m[a, b] = True
        return m

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.pairs

    def __iter__(self):
        return iter(sorted(self.pairs))

    def __len__(self):
        return len(self.pairs)

    def __le__(self, other: "Relation") -> bool:
        return self.pairs <= other.pairs

    def __or__(self, other: "Relation") -> "Relation":
        return Relation(self.size, self.pairs | other.pairs)

    def __and__(self, other: "Relation") -> "Relation":
        return Relation(self.size, self.pairs & other.pairs)

    def inverse(self) -> "Relation":
        return Relation(self.size, frozenset((b, a) for a, b in self.pairs))

    def compose(self, other: "Relation") -> "Relation":
        """{(a,c) : (a,b) in self and (b,c) in other for some b}"""
        product = self.matrix().astype(np.int64) @ other.matrix().astype(np.int64)
        return Relation.from_matrix(product > 0)

    def is_reflexive(self) -> bool:
        return all((i, i) in self.pairs for i in range(self.size))

    def is_symmetric(self) -> bool:
        return all((b, a) in self.pairs for a, b in self.pairs)

    def is_transitive(self) -> bool:
        return self.compose(self) <= self

    def is_equivalence(self) -> bool:
        return self.is_reflexive() and self.is_symmetric() and self.is_transitive()
