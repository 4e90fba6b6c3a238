#!/usr/bin/env python3
# coding: utf-8

# plonkalab - core.py
# Finite algebras as flat operation tables

import itertools
import logging
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from algebra.relations import Partition, UnionFind
from config import ARITY_CAP
from utils.error_handling import (
    ArityMismatch,
    Diagnostic,
    SignatureMismatch,
    UnknownOperation,
    ValidationError,
)

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"^[^\s()≈~=]+$")


@dataclass(frozen=True)
class Operation:
    name: str
    arity: int


@dataclass(frozen=True)
class Signature:
    operations: tuple[Operation, ...]

    def __post_init__(self):
        names = [op.name for op in self.operations]
        for op in self.operations:
            if not op.name or not _TOKEN.match(op.name):
                raise ValidationError(f"signature: operation name {op.name!r} is not a token")
            if not 0 <= op.arity <= ARITY_CAP:
                raise ValidationError(f"signature.{op.name}: arity {op.arity} outside 0..{ARITY_CAP}")
        if len(set(names)) != len(names):
            raise ValidationError(f"signature: duplicate operation names in {names}")

    @classmethod
    def of(cls, *pairs: tuple[str, int]) -> "Signature":
        return cls(tuple(Operation(name, arity) for name, arity in pairs))

    @cached_property
    def _arities(self) -> dict[str, int]:
        return {op.name: op.arity for op in self.operations}

    def arity(self, name: str) -> int:
        try:
            return self._arities[name]
        except KeyError:
            raise UnknownOperation(f"operation {name!r} is not in the signature {self.names}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._arities

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(op.name for op in self.operations)

    @property
    def constants(self) -> tuple[str, ...]:
        return tuple(op.name for op in self.operations if op.arity == 0)

    @property
    def non_nullary(self) -> tuple[Operation, ...]:
        return tuple(op for op in self.operations if op.arity > 0)

    @property
    def plural(self) -> bool:
        return any(op.arity >= 2 for op in self.operations)

    def __str__(self):
        return "(" + ", ".join(f"{op.name}/{op.arity}" for op in self.operations) + ")"


def tuple_grid(n: int, k: int) -> np.ndarray:
    """All k-tuples over 0..n-1 in row-major order, shape (n**k, k)."""
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.indices((n,) * k, dtype=np.int64).reshape(k, -1).T


def flat_index(args: np.ndarray, n: int) -> np.ndarray:
    """Row-major position of each tuple (last axis) in a table over n elements."""
    out = np.zeros(args.shape[:-1], dtype=np.int64)
    for c in range(args.shape[-1]):
        out = out * n + args[..., c]
    return out


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    """A signature plus total operation tables over 0..n-1.

    tables[name] is a read-only flat row-major int array of length n**arity
    (length 1 for constants).
    """

    signature: Signature
    labels: tuple[str, ...]
    tables: Mapping[str, np.ndarray]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        n = len(self.labels)
        if n == 0:
            raise ValidationError("elements: carrier must be nonempty")
        if len(set(self.labels)) != n:
            dup = next(x for x in self.labels if self.labels.count(x) > 1)
            raise ValidationError(f"elements: duplicate label {dup!r}")
        frozen = {}
        for op in self.signature.operations:
            if op.name not in self.tables:
                raise ValidationError(f"tables.{op.name}: missing table")
            table = np.asarray(self.tables[op.name], dtype=np.int64).reshape(-1).copy()
            if table.size != n**op.arity:
                raise ValidationError(f"tables.{op.name}: expected {n ** op.arity} entries, got {table.size}")
            if table.size and (table.min() < 0 or table.max() >= n):
                bad = int(np.nonzero((table < 0) | (table >= n))[0][0])
                raise ValidationError(f"tables.{op.name}[{bad}]: value {table[bad]} outside 0..{n - 1}")
            table.flags.writeable = False
            frozen[op.name] = table
        extra = set(self.tables) - set(frozen)
        if extra:
            raise ValidationError(f"tables: operations {sorted(extra)} are not in the signature")
        object.__setattr__(self, "tables", frozen)
        object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))

    @classmethod
    def from_operations(
        cls,
        signature: Signature,
        labels: Sequence[str],
        operations: Mapping[str, Callable[..., int] | int | Sequence],
        name: str = "",
    ) -> "FiniteAlgebra":
        """Tabulate callables over all tuples; ints give constants, sequences give nested tables."""
        n = len(labels)
        tables = {}
        for op in signature.operations:
            given = operations[op.name]
            if callable(given):
                tables[op.name] = [given(*args) for args in itertools.product(range(n), repeat=op.arity)]
            elif op.arity == 0:
                tables[op.name] = [int(given)]  # type: ignore[arg-type]
            else:
                tables[op.name] = np.asarray(given).reshape(-1)
        return cls(signature, tuple(labels), tables, name)

    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self):
        return self.size

    def __eq__(self, other):
        if not isinstance(other, FiniteAlgebra):
            return NotImplemented
        return (
            self.signature == other.signature
            and self.labels == other.labels
            and all(np.array_equal(self.tables[k], other.tables[k]) for k in self.tables)
        )

    def __hash__(self):
        return hash((self.signature, self.labels))

    def __repr__(self):
        return f"FiniteAlgebra({self.name or '?'}, {self.size} elements, {self.signature})"

    def same_tables(self, other: "FiniteAlgebra") -> bool:
        return self.signature == other.signature and all(
            np.array_equal(self.tables[k], other.tables[k]) for k in self.tables
        )

    def table_nd(self, name: str) -> np.ndarray:
        arity = self.signature.arity(name)
        return self.tables[name].reshape((self.size,) * arity)

    @cached_property
    def _rows(self) -> dict[str, list[int]]:
        return {k: v.tolist() for k, v in self.tables.items()}

    def apply(self, name: str, *args: int) -> int:
        arity = self.signature.arity(name)
        if len(args) != arity:
            raise ArityMismatch(f"{name} takes {arity} argument(s), got {len(args)}")
        idx = 0
        for a in args:
            idx = idx * self.size + a
        return self._rows[name][idx]

    def constant(self, name: str) -> int:
        return self._rows[name][0]

    def constants(self) -> dict[str, int]:
        return {c: self.constant(c) for c in self.signature.constants}

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValidationError(f"no element labelled {label!r} in {self.name or 'algebra'}") from None

    def relabel(self, perm: Sequence[int], labels: Sequence[str] | None = None) -> "FiniteAlgebra":
        """Isomorphic copy in which element a becomes perm[a]."""
        perm_arr = np.asarray(perm, dtype=np.int64)
        inv = np.argsort(perm_arr)
        tables = {}
        for op in self.signature.operations:
            if op.arity == 0:
                tables[op.name] = perm_arr[self.tables[op.name]]
            else:
                table = self.table_nd(op.name)[np.ix_(*[inv] * op.arity)]
                tables[op.name] = perm_arr[table]
        new_labels = list(labels) if labels is not None else [self.labels[i] for i in inv]
        return FiniteAlgebra(self.signature, tuple(new_labels), tables, self.name)


def trivial_algebra(signature: Signature, label: str = "e", name: str = "trivial") -> FiniteAlgebra:
    return FiniteAlgebra(signature, (label,), {op.name: [0] for op in signature.operations}, name)


def require_same_signature(*algs: FiniteAlgebra):
    first = algs[0].signature
    for alg in algs[1:]:
        if alg.signature != first:
            raise SignatureMismatch(f"signature {alg.signature} differs from {first}")


@dataclass(frozen=True)
class Homomorphism:
    source: FiniteAlgebra
    target: FiniteAlgebra
    mapping: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "mapping", tuple(int(x) for x in self.mapping))
        if len(self.mapping) != self.source.size:
            raise ValidationError(f"map: expected {self.source.size} entries, got {len(self.mapping)}")
        if any(not 0 <= x < self.target.size for x in self.mapping):
            raise ValidationError(f"map: values must lie in 0..{self.target.size - 1}")

    def __call__(self, a: int) -> int:
        return self.mapping[a]

    def then(self, other: "Homomorphism") -> "Homomorphism":
        """other ∘ self"""
        return Homomorphism(self.source, other.target, tuple(other.mapping[x] for x in self.mapping))

    def is_injective(self) -> bool:
        return len(set(self.mapping)) == len(self.mapping)

    @classmethod
    def identity(cls, alg: FiniteAlgebra) -> "Homomorphism":
        return cls(alg, alg, tuple(range(alg.size)))


def homomorphism_diagnostics(h: Homomorphism) -> list[Diagnostic]:
    """One diagnostic per operation that the map fails to preserve."""
    src, tgt = h.source, h.target
    if src.signature != tgt.signature:
        return [Diagnostic("signature", f"{src.signature} differs from {tgt.signature}")]
    mapping = np.asarray(h.mapping, dtype=np.int64)
    out = []
    for op in src.signature.operations:
        grid = tuple_grid(src.size, op.arity)
        image_of_value = mapping[src.tables[op.name]]
        value_of_images = tgt.tables[op.name][flat_index(mapping[grid], tgt.size)]
        bad = np.nonzero(image_of_value != value_of_images)[0]
        if bad.size:
            args = tuple(int(x) for x in grid[bad[0]])
            out.append(
                Diagnostic(
                    "homomorphism",
                    f"{op.name} not preserved: h({op.name}{args}) = {int(image_of_value[bad[0]])}, "
                    f"{op.name}(h{args}) = {int(value_of_images[bad[0]])}",
                    (op.name, args),
                )
            )
    return out


def check_homomorphism(h: Homomorphism) -> bool:
    return not homomorphism_diagnostics(h)


def generated_subalgebra(alg: FiniteAlgebra, seed: Iterable[int]) -> frozenset[int]:
    """Least subuniverse containing seed and every constant."""
    current = set(int(x) for x in seed) | set(alg.constants().values())
    ops = [alg.table_nd(op.name) for op in alg.signature.non_nullary]
    while True:
        arr = np.fromiter(sorted(current), dtype=np.int64, count=len(current))
        fresh: set[int] = set()
        if arr.size:
            for table in ops:
                values = table[np.ix_(*[arr] * table.ndim)]
                fresh.update(np.unique(values).tolist())
        fresh -= current
        if not fresh:
            return frozenset(current)
        current |= fresh


def direct_product(algs: Sequence[FiniteAlgebra], name: str = "") -> FiniteAlgebra:
    if not algs:
        raise ValidationError("direct product of an empty family")
    require_same_signature(*algs)
    sizes = [a.size for a in algs]
    total = int(np.prod(sizes))
    coords = np.indices(sizes, dtype=np.int64).reshape(len(algs), -1).T  # (total, m)
    labels = ["(" + ",".join(algs[c].labels[x] for c, x in enumerate(row)) + ")" for row in coords.tolist()]
    tables = {}
    for op in algs[0].signature.operations:
        grid = tuple_grid(total, op.arity)
        components = []
        for c, alg in enumerate(algs):
            comp_args = coords[grid][..., c] if op.arity else np.zeros((1, 0), dtype=np.int64)
            components.append(alg.tables[op.name][flat_index(comp_args, alg.size)])
        tables[op.name] = _mixed_radix(components, sizes)
    return FiniteAlgebra(algs[0].signature, tuple(labels), tables, name or "×".join(a.name for a in algs))


def _mixed_radix(components: list[np.ndarray], sizes: Sequence[int]) -> np.ndarray:
    out = np.zeros_like(components[0])
    for comp, size in zip(components, sizes):
        out = out * size + comp
    return out


def compatibility_witness(alg: FiniteAlgebra, partition: Partition) -> tuple[str, tuple[int, ...]] | None:
    """An operation and tuple whose value changes class when arguments move to class representatives."""
    ids = np.asarray(partition.ids, dtype=np.int64)
    rep = np.asarray([partition.block_of(x)[0] for x in range(alg.size)], dtype=np.int64)
    for op in alg.signature.non_nullary:
        table = alg.table_nd(op.name)
        moved = table[np.ix_(*[rep] * op.arity)]
        bad = np.argwhere(ids[table] != ids[moved])
        if bad.size:
            return op.name, tuple(int(x) for x in bad[0])
    return None


def is_compatible(alg: FiniteAlgebra, partition: Partition) -> bool:
    return partition.size == alg.size and compatibility_witness(alg, partition) is None


def congruence_closure(
    alg: FiniteAlgebra, pairs: Iterable[tuple[int, int]], start: Partition | None = None
) -> Partition:
    """Least congruence containing pairs (and start).

    Every pair that merges two classes is pushed through each basic translation
    f(c_1, .., x, .., c_k); the equivalence generated by the pushed pairs is then closed
    under all translations, hence compatible.
    """
    uf = UnionFind(alg.size)
    queue: deque[tuple[int, int]] = deque()
    seeds = list(pairs)
    if start is not None:
        seeds += [(block[0], x) for block in start.blocks for x in block[1:]]
    for a, b in seeds:
        if uf.union(int(a), int(b)):
            queue.append((int(a), int(b)))
    tables = [alg.table_nd(op.name) for op in alg.signature.non_nullary]
    while queue:
        a, b = queue.popleft()
        for table in tables:
            for axis in range(table.ndim):
                left = np.take(table, a, axis=axis).ravel()
                right = np.take(table, b, axis=axis).ravel()
                diff = np.nonzero(left != right)[0]
                for x, y in zip(left[diff].tolist(), right[diff].tolist()):
                    if uf.union(x, y):
                        queue.append((x, y))
    return Partition(tuple(uf.block_ids()))


def quotient_algebra(alg: FiniteAlgebra, partition: Partition, name: str = "") -> FiniteAlgebra:
    """alg/partition over its classes, ordered by least representative."""
    witness = compatibility_witness(alg, partition)
    if witness is not None:
        raise ValidationError(f"partition is not a congruence: {witness[0]} breaks it at {witness[1]}")
    ids = np.asarray(partition.ids, dtype=np.int64)
    reps = np.asarray([block[0] for block in partition.blocks], dtype=np.int64)
    tables = {}
    for op in alg.signature.operations:
        if op.arity == 0:
            tables[op.name] = ids[alg.tables[op.name]]
        else:
            tables[op.name] = ids[alg.table_nd(op.name)[np.ix_(*[reps] * op.arity)]].reshape(-1)
    labels = tuple(f"[{alg.labels[r]}]" for r in reps.tolist())
    return FiniteAlgebra(alg.signature, labels, tables, name or f"{alg.name}/θ")


def extend_from_generators(
    source: FiniteAlgebra, generators: Sequence[int], target: FiniteAlgebra, images: Sequence[int]
) -> Homomorphism | None:
    """The homomorphism sending generators[r] to images[r], if one exists.

    Images are propagated through the operations; a clash, or a source element the
    generators do not reach, means no (unique) extension exists.
    """
    require_same_signature(source, target)
    image: dict[int, int] = {}
    for g, t in zip(generators, images):
        if image.setdefault(int(g), int(t)) != int(t):
            return None
    for c, value in source.constants().items():
        if image.setdefault(value, target.constant(c)) != target.constant(c):
            return None
    ops = [(source.table_nd(op.name), target.table_nd(op.name)) for op in source.signature.non_nullary]
    changed = True
    while changed:
        changed = False
        known = np.fromiter(sorted(image), dtype=np.int64, count=len(image))
        mapped = np.asarray([image[x] for x in known.tolist()], dtype=np.int64)
        for src_table, tgt_table in ops:
            k = src_table.ndim
            values = src_table[np.ix_(*[known] * k)].ravel().tolist()
            targets = tgt_table[np.ix_(*[mapped] * k)].ravel().tolist()
            for s, t in zip(values, targets):
                have = image.get(s)
                if have is None:
                    image[s] = t
                    changed = True
                elif have != t:
                    return None
    if len(image) != source.size:
        return None
    h = Homomorphism(source, target, tuple(image[x] for x in range(source.size)))
    return h if check_homomorphism(h) else None
