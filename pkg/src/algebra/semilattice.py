#!/usr/bin/env python3
# coding: utf-8

# plonkalab - semilattice.py
# Finite join-semilattices, their congruences and upper transitivity

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import networkx as nx
import numpy as np
from tqdm import tqdm

from algebra.core import FiniteAlgebra, Signature, congruence_closure, is_compatible
from algebra.relations import Partition, Relation
from config import SHOW_PROGRESS
from utils.decorators import size_capped
from utils.error_handling import Diagnostic, ShapeMismatch, ValidationError

logger = logging.getLogger(__name__)

JOIN = Signature.of(("join", 2))

# index relations (S_θ, C_θ, S_C) and index congruences
BinaryIndexRelation = Relation
SemilatticeCongruence = Partition


@dataclass(frozen=True, eq=False)
class JoinSemilattice:
    """A join table over 0..n-1; the order and the least element are derived from it."""

    join: np.ndarray
    labels: tuple[str, ...] = ()
    declared_least: int | None = None

    def __post_init__(self):
        table = np.asarray(self.join, dtype=np.int64)
        n = table.shape[0] if table.ndim else 0
        if table.ndim != 2 or table.shape != (n, n) or n == 0:
            raise ShapeMismatch(f"join: expected a nonempty square table, got shape {table.shape}")
        if table.min() < 0 or table.max() >= n:
            raise ValidationError(f"join: values must lie in 0..{n - 1}")
        table = table.copy()
        table.flags.writeable = False
        object.__setattr__(self, "join", table)
        labels = tuple(str(x) for x in self.labels) or tuple(str(i) for i in range(n))
        if len(labels) != n or len(set(labels)) != n:
            raise ValidationError(f"labels: need {n} distinct labels")
        object.__setattr__(self, "labels", labels)
        if self.declared_least is not None and not 0 <= self.declared_least < n:
            raise ValidationError(f"least: {self.declared_least} outside 0..{n - 1}")

    @property
    def size(self) -> int:
        return self.join.shape[0]

    def __len__(self):
        return self.size

    def __eq__(self, other):
        if not isinstance(other, JoinSemilattice):
            return NotImplemented
        return np.array_equal(self.join, other.join)

    def __hash__(self):
        return hash(self.join.tobytes())

    def __repr__(self):
        return f"JoinSemilattice({self.size} elements, least={self.least})"

    def j(self, i: int, k: int) -> int:
        return self._rows[i][k]

    @cached_property
    def _rows(self) -> list[list[int]]:
        return self.join.tolist()

    @cached_property
    def least(self) -> int | None:
        neutral = np.nonzero((self.join == np.arange(self.size)[None, :]).all(axis=1))[0]
        return int(neutral[0]) if neutral.size else None

    @cached_property
    def order(self) -> np.ndarray:
        """order[i, j] is True iff i <= j."""
        return self.join == np.arange(self.size)[None, :]

    def is_chain(self) -> bool:
        return bool((self.order | self.order.T).all())

    def is_trivial(self) -> bool:
        return self.size == 1


def leq(s: JoinSemilattice, i: int, j: int) -> bool:
    return s.j(i, j) == j


def chain(n: int, labels: Sequence[str] = ()) -> JoinSemilattice:
    idx = np.arange(n)
    return JoinSemilattice(np.maximum.outer(idx, idx), tuple(labels))


def diamond(labels: Sequence[str] = ("0", "i", "j", "1")) -> JoinSemilattice:
    # 0 < i, j < 1
    table = [[0, 1, 2, 3], [1, 1, 3, 3], [2, 3, 2, 3], [3, 3, 3, 3]]
    return JoinSemilattice(np.array(table), tuple(labels))


def from_order(n: int, below: Iterable[tuple[int, int]], labels: Sequence[str] = ()) -> JoinSemilattice:
    """The join-semilattice of a finite order given by (lower, upper) pairs; joins must exist."""
    graph = nx.DiGraph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from(below)
    if not nx.is_directed_acyclic_graph(graph):
        raise ValidationError("order: the given pairs contain a cycle")
    closure = nx.transitive_closure_dag(graph)
    up = [{i} | set(closure.successors(i)) for i in range(n)]
    table = np.zeros((n, n), dtype=np.int64)
    for i, k in itertools.product(range(n), repeat=2):
        bounds = up[i] & up[k]
        least = [b for b in bounds if bounds <= up[b]]
        if not least:
            raise ValidationError(f"order: {i} and {k} have no join")
        table[i, k] = least[0]
    return JoinSemilattice(table, tuple(labels))


def powerset(n: int) -> JoinSemilattice:
    """Subsets of {1..n} as bitmasks under union; labels like {1,3}."""
    size = 1 << n
    idx = np.arange(size)
    labels = ["{" + ",".join(str(b + 1) for b in range(n) if mask >> b & 1) + "}" for mask in range(size)]
    return JoinSemilattice(np.bitwise_or.outer(idx, idx), tuple(labels))


def semilattice_diagnostics(s: JoinSemilattice) -> list[Diagnostic]:
    out = []
    table, n = s.join, s.size
    idx = np.arange(n)
    bad = np.nonzero(table[idx, idx] != idx)[0]
    if bad.size:
        out.append(Diagnostic("idempotence", f"{bad[0]} v {bad[0]} = {table[bad[0], bad[0]]}", (int(bad[0]),)))
    bad = np.argwhere(table != table.T)
    if bad.size:
        i, k = (int(x) for x in bad[0])
        out.append(Diagnostic("commutativity", f"{i} v {k} = {table[i, k]} but {k} v {i} = {table[k, i]}", (i, k)))
    left = table[table[:, :, None], idx[None, None, :]]  # (i v j) v k
    right = table[idx[:, None, None], table[None, :, :]]  # i v (j v k)
    bad = np.argwhere(left != right)
    if bad.size:
        i, j, k = (int(x) for x in bad[0])
        out.append(Diagnostic("associativity", f"({i} v {j}) v {k} != {i} v ({j} v {k})", (i, j, k)))
    if s.declared_least is not None:
        least = s.declared_least
        bad = np.nonzero(table[least] != idx)[0]
        if bad.size:
            out.append(Diagnostic("least", f"declared least {least} is not neutral: {least} v {bad[0]}", (int(bad[0]),)))
    for d in out:
        logger.warning(str(d))
    return out


def validate_semilattice(s: JoinSemilattice) -> bool:
    return not semilattice_diagnostics(s)


def as_algebra(s: JoinSemilattice) -> FiniteAlgebra:
    return FiniteAlgebra(JOIN, s.labels, {"join": s.join}, "index")


def hasse_covers(s: JoinSemilattice) -> list[tuple[int, int]]:
    """Cover pairs (lower, upper), sorted."""
    graph = nx.DiGraph()
    graph.add_nodes_from(range(s.size))
    graph.add_edges_from((int(i), int(j)) for i, j in np.argwhere(s.order) if i != j)
    return sorted(nx.transitive_reduction(graph).edges())


def restricted_growth_strings(n: int) -> Iterator[tuple[int, ...]]:
    """Every partition of 0..n-1, each once, in lexicographic order."""
    if n == 0:
        yield ()
        return
    ids = [0] * n

    def extend(pos: int, top: int):
        if pos == n:
            yield tuple(ids)
            return
        for b in range(top + 2):
            ids[pos] = b
            yield from extend(pos + 1, max(top, b))

    yield from extend(1, 0)


@size_capped("semilattice")
def all_semilattice_congruences(s: JoinSemilattice, cap: int | None = None) -> list[SemilatticeCongruence]:
    alg = as_algebra(s)
    found = [
        Partition(ids)
        for ids in tqdm(restricted_growth_strings(s.size), disable=not SHOW_PROGRESS, desc="Con(I)")
        if is_compatible(alg, Partition(ids))
    ]
    logger.debug(f"index of size {s.size} has {len(found)} congruences")
    return found


def _pairs(relation: Relation | Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    return sorted(relation.pairs) if isinstance(relation, Relation) else [tuple(p) for p in relation]


def cg_semilattice(s: JoinSemilattice, relation: Relation | Iterable[tuple[int, int]]) -> SemilatticeCongruence:
    return congruence_closure(as_algebra(s), _pairs(relation))


def is_join_closed(s: JoinSemilattice, relation: Relation) -> bool:
    if not relation.pairs:
        return True
    pairs = np.array(sorted(relation.pairs), dtype=np.int64)
    left = s.join[pairs[:, 0][:, None], pairs[:, 0][None, :]]
    right = s.join[pairs[:, 1][:, None], pairs[:, 1][None, :]]
    return bool(relation.matrix()[left, right].all())


def is_upper_transitive(s: JoinSemilattice, relation: Relation) -> bool:
    """(i,j), (j,k) in S imply (i, i v k) in S."""
    m = relation.matrix()
    linked = (m.astype(np.int64) @ m.astype(np.int64)) > 0
    ii, kk = np.nonzero(linked)
    return bool(m[ii, s.join[ii, kk]].all())


def closure_refl_symm_join_ut(s: JoinSemilattice, relation: Relation | Iterable[tuple[int, int]]) -> Relation:
    """Least reflexive, symmetric, join-closed, upper transitive relation containing the given pairs."""
    n = s.size
    m = np.eye(n, dtype=bool)
    for a, b in _pairs(relation):
        m[a, b] = True
    while True:
        before = int(m.sum())
        m |= m.T
        pairs = np.argwhere(m)
        m[s.join[pairs[:, 0][:, None], pairs[:, 0][None, :]], s.join[pairs[:, 1][:, None], pairs[:, 1][None, :]]] = True
        linked = (m.astype(np.int64) @ m.astype(np.int64)) > 0
        ii, kk = np.nonzero(linked)
        m[ii, s.join[ii, kk]] = True
        if int(m.sum()) == before:
            return Relation.from_matrix(m)
