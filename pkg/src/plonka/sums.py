#!/usr/bin/env python3
# coding: utf-8

# plonkalab - sums.py
# Płonka sums: composition, partition functions and decomposition

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from algebra.core import FiniteAlgebra, Homomorphism, flat_index, tuple_grid
from algebra.relations import Partition
from algebra.semilattice import JoinSemilattice, semilattice_diagnostics
from algebra.terms import Term, render_term, term_operation
from plonka.system import DirectSystem, require_valid, star, system_diagnostics
from utils.error_handling import (
    Diagnostic,
    InconsistentTransitions,
    IndexOutOfRange,
    InvalidSystem,
    NotAPartitionFunction,
    ShapeMismatch,
    TermError,
    error_handler,
    raise_on_errors,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PlonkaSum:
    """An algebra together with its representation over a direct system.

    locate[g] = (fiber index, local index) of global element g; place is the inverse.
    """

    algebra: FiniteAlgebra
    origin: DirectSystem
    locate: tuple[tuple[int, int], ...]

    @cached_property
    def place(self) -> dict[tuple[int, int], int]:
        return {loc: g for g, loc in enumerate(self.locate)}

    @cached_property
    def fiber_of(self) -> np.ndarray:
        return np.asarray([i for i, _ in self.locate], dtype=np.int64)

    @cached_property
    def local_of(self) -> np.ndarray:
        return np.asarray([a for _, a in self.locate], dtype=np.int64)

    @cached_property
    def route(self) -> np.ndarray:
        """route[g, j] is the global image of g in fiber j, or -1 when fiber(g) is not below j."""
        d = self.origin
        out = np.full((self.algebra.size, d.index.size), -1, dtype=np.int64)
        for g, (i, a) in enumerate(self.locate):
            for j in range(d.index.size):
                if (i, j) in d.transitions:
                    out[g, j] = self.place[(j, d.transitions[(i, j)][a])]
        return out

    @property
    def index(self) -> JoinSemilattice:
        return self.origin.index

    def block(self, i: int) -> list[int]:
        """Global elements of fiber i in local order."""
        return [self.place[(i, a)] for a in range(self.origin.fibers[i].size)]

    def element(self, i: int, a: int) -> int:
        return self.place[(i, a)]

    def label(self, g: int) -> str:
        return self.algebra.labels[g]


def _sum_labels(d: DirectSystem) -> list[str]:
    plain = [label for fiber in d.fibers for label in fiber.labels]
    if len(set(plain)) == len(plain):
        return plain
    return [f"{label}@{d.index.labels[i]}" for i, fiber in enumerate(d.fibers) for label in fiber.labels]


@error_handler
def compose(d: DirectSystem) -> PlonkaSum:
    """The Płonka sum of d, ordered by (fiber, local index)."""
    raise_on_errors(system_diagnostics(d), InvalidSystem, "compose")
    sizes = [f.size for f in d.fibers]
    offsets = np.concatenate([[0], np.cumsum(sizes)[:-1]]).astype(np.int64)
    locate = tuple((i, a) for i, size in enumerate(sizes) for a in range(size))
    total = len(locate)
    fiber_of = np.asarray([i for i, _ in locate], dtype=np.int64)
    local_of = np.asarray([a for _, a in locate], dtype=np.int64)
    route = np.full((total, d.index.size), -1, dtype=np.int64)
    for (i, j), p in d.maps.items():
        route[offsets[i] : offsets[i] + sizes[i], j] = offsets[j] + p
    tables = {}
    for op in d.signature.operations:
        if op.arity == 0:
            least = d.index.least
            tables[op.name] = [int(offsets[least]) + d.fibers[least].constant(op.name)]
            continue
        grid = tuple_grid(total, op.arity)
        target = _join_all(d.index.join, fiber_of[grid])
        moved = route[grid, target[:, None]]
        local = local_of[moved]
        out = np.empty(grid.shape[0], dtype=np.int64)
        for j, fiber in enumerate(d.fibers):
            mask = target == j
            if mask.any():
                out[mask] = offsets[j] + fiber.tables[op.name][flat_index(local[mask], fiber.size)]
        tables[op.name] = out
    alg = FiniteAlgebra(d.signature, tuple(_sum_labels(d)), tables, f"Pł({d.name})" if d.name else "Pł")
    logger.debug(f"composed {d!r} into {total} elements")
    return PlonkaSum(alg, d, locate)


def _join_all(join: np.ndarray, fibers: np.ndarray) -> np.ndarray:
    """Row-wise join of the fiber indices in each row."""
    out = fibers[:, 0]
    for c in range(1, fibers.shape[1]):
        out = join[out, fibers[:, c]]
    return out


@dataclass(frozen=True, eq=False)
class PartitionFunction:
    algebra: FiniteAlgebra
    table: np.ndarray
    source: str = ""

    def __post_init__(self):
        table = np.asarray(self.table, dtype=np.int64)
        n = self.algebra.size
        if table.shape != (n, n):
            raise ShapeMismatch(f"partition function: expected an {n}x{n} table, got {table.shape}")
        if table.min() < 0 or table.max() >= n:
            raise ShapeMismatch(f"partition function: values must lie in 0..{n - 1}")
        table = table.copy()
        table.flags.writeable = False
        object.__setattr__(self, "table", table)

    def __call__(self, a: int, b: int) -> int:
        return int(self.table[a, b])


def _first(mask: np.ndarray) -> tuple[int, ...] | None:
    bad = np.argwhere(mask)
    return tuple(int(x) for x in bad[0]) if bad.size else None


def partition_function_diagnostics(pf: PartitionFunction) -> list[Diagnostic]:
    alg, o = pf.algebra, pf.table
    n = alg.size
    idx = np.arange(n)
    out = []

    def report(law: str, message: str, witness):
        if witness is not None:
            out.append(Diagnostic(law, message, witness))

    report("idempotent", "a ⊙ a != a", _first(o[idx, idx] != idx))
    left = o[o[:, :, None], idx[None, None, :]]
    right = o[idx[:, None, None], o[None, :, :]]
    report("associative", "a ⊙ (b ⊙ c) != (a ⊙ b) ⊙ c", _first(left != right))
    swapped = o[idx[:, None, None], o.T[None, :, :]]
    report("left-normal", "a ⊙ (b ⊙ c) != a ⊙ (c ⊙ b)", _first(right != swapped))
    for op in alg.signature.non_nullary:
        grid = tuple_grid(n, op.arity)
        value = alg.tables[op.name]
        lhs = o[value[:, None], idx[None, :]]  # g(a..) ⊙ b
        shifted = o[grid[:, :, None], idx[None, None, :]]  # a_r ⊙ b, shape (tuples, k, b)
        rhs = alg.tables[op.name][flat_index(np.moveaxis(shifted, 1, 2), n)]
        bad = _first(lhs != rhs)
        if bad is not None:
            report("distributive", f"{op.name}(a..) ⊙ b != {op.name}(a ⊙ b..)", (op.name, tuple(int(x) for x in grid[bad[0]]), bad[1]))
        lhs = o[idx[None, :], value[:, None]]  # b ⊙ g(a..)
        rhs = np.broadcast_to(idx[None, :], lhs.shape)
        for c in range(op.arity):
            rhs = o[rhs, grid[:, c][:, None]]
        bad = _first(lhs != rhs)
        if bad is not None:
            report("operations", f"b ⊙ {op.name}(a..) != b ⊙ a_1 ⊙ .. ⊙ a_n", (op.name, tuple(int(x) for x in grid[bad[0]]), bad[1]))
    for name, c in alg.constants().items():
        report("constants", f"a ⊙ {name} != a", _first(o[:, c] != idx))
    return out


def check_partition_function(pf: PartitionFunction) -> list[Diagnostic]:
    return partition_function_diagnostics(pf)


def partition_function_from_term(alg: FiniteAlgebra, term: Term, first: str = "x", second: str = "y") -> PartitionFunction:
    return PartitionFunction(alg, term_operation(alg, term, first, second), render_term(term))


def induced_partition_function(ps: PlonkaSum) -> PartitionFunction:
    """a ⊙ b = p_{i, i v j}(a) for a in A_i and b in A_j."""
    fibers = ps.fiber_of
    target = ps.index.join[fibers[:, None], fibers[None, :]]
    table = ps.route[np.arange(ps.algebra.size)[:, None], target]
    return PartitionFunction(ps.algebra, table, "induced")


def _block_algebra(alg: FiniteAlgebra, block: Sequence[int], constants: Mapping[str, int], name: str) -> FiniteAlgebra:
    local = {g: r for r, g in enumerate(block)}
    arr = np.asarray(block, dtype=np.int64)
    tables = {}
    for op in alg.signature.operations:
        if op.arity == 0:
            if constants[op.name] not in local:
                raise InconsistentTransitions(f"block {name} has no image of the constant {op.name}")
            tables[op.name] = [local[constants[op.name]]]
        else:
            values = alg.table_nd(op.name)[np.ix_(*[arr] * op.arity)].ravel().tolist()
            if any(v not in local for v in values):
                raise InconsistentTransitions(f"block {name} is not closed under {op.name}")
            tables[op.name] = [local[v] for v in values]
    return FiniteAlgebra(alg.signature, tuple(alg.labels[g] for g in block), tables, name)


@error_handler
def decompose(alg: FiniteAlgebra, pf: PartitionFunction) -> PlonkaSum:
    raise_on_errors(partition_function_diagnostics(pf), NotAPartitionFunction, "decompose")
    o = pf.table
    n = alg.size
    idx = np.arange(n)
    similar = (o == idx[:, None]) & (o.T == idx[None, :])
    blocks = Partition.from_pairs(n, (tuple(p) for p in np.argwhere(similar).tolist())).blocks
    ids = np.empty(n, dtype=np.int64)
    for b, block in enumerate(blocks):
        ids[list(block)] = b
    reps = np.asarray([block[0] for block in blocks], dtype=np.int64)
    join = ids[o[reps[:, None], reps[None, :]]]
    index = JoinSemilattice(join)
    problems = semilattice_diagnostics(index)
    if problems:
        raise InconsistentTransitions(f"blocks do not form a semilattice: {problems[0]}", diagnostics=problems)
    # i <= j iff b ⊙ a = b for some a in A_i, b in A_j
    below = np.zeros((len(blocks),) * 2, dtype=bool)
    fixed = o == idx[:, None]
    for b_el, a_el in np.argwhere(fixed).tolist():
        below[ids[a_el], ids[b_el]] = True
    if not np.array_equal(below, index.order):
        raise InconsistentTransitions("the order read off ⊙ differs from the order of the block joins")
    transitions = {}
    for i, block_i in enumerate(blocks):
        for j, block_j in enumerate(blocks):
            if not below[i, j]:
                continue
            images = o[np.ix_(block_i, block_j)]
            if not (images == images[:, :1]).all():
                r, c = np.argwhere(images != images[:, :1])[0]
                raise InconsistentTransitions(
                    f"p_{i}{j}({alg.labels[block_i[r]]}) depends on the chosen element of block {j}",
                    diagnostics=[Diagnostic("transition", "x ⊙ b depends on b", (i, j, int(block_i[r]), int(block_j[c])))],
                )
            position = {g: r for r, g in enumerate(block_j)}
            transitions[(i, j)] = tuple(position[int(g)] for g in images[:, 0])
    constants = {}
    fibers = []
    for j, block in enumerate(blocks):
        for name, c in alg.constants().items():
            constants[name] = int(o[c, block[0]])
        fibers.append(_block_algebra(alg, block, constants, f"A{j}"))
    system = DirectSystem(index, tuple(fibers), transitions, f"{alg.name}/⊙" if alg.name else "")
    raise_on_errors(system_diagnostics(system), InconsistentTransitions, "decompose")
    locate = tuple((int(ids[g]), blocks[ids[g]].index(g)) for g in range(n))
    result = PlonkaSum(alg, system, locate)
    recomposed = compose(system)
    perm = [recomposed.place[loc] for loc in locate]
    if not alg.relabel(perm).same_tables(recomposed.algebra):
        raise InconsistentTransitions("recomposition differs from the decomposed algebra")
    logger.info(f"decomposed {alg.name or 'algebra'} into {len(blocks)} fiber(s)")
    return result


def semilattice_of_subalgebras_diagnostics(
    alg: FiniteAlgebra, blocks: Partition, order: JoinSemilattice, least_block: int | None = None
) -> list[Diagnostic]:
    if blocks.size != alg.size:
        raise ShapeMismatch(f"partition covers {blocks.size} elements, algebra has {alg.size}")
    if order.size != blocks.num_blocks:
        raise ShapeMismatch(f"order has {order.size} elements for {blocks.num_blocks} blocks")
    if least_block is not None and not 0 <= least_block < order.size:
        raise IndexOutOfRange(f"least block {least_block} outside 0..{order.size - 1}")
    out = []
    ids = np.asarray(blocks.ids, dtype=np.int64)
    for op in alg.signature.non_nullary:
        grid = tuple_grid(alg.size, op.arity)
        expected = _join_all(order.join, ids[grid])
        bad = np.nonzero(ids[alg.tables[op.name]] != expected)[0]
        if bad.size:
            args = tuple(int(x) for x in grid[bad[0]])
            law = "closure" if len(set(ids[list(args)].tolist())) == 1 else "join"
            out.append(Diagnostic(law, f"{op.name}{args} leaves block {int(expected[bad[0]])}", (op.name, args)))
    if least_block is not None and any(order.j(least_block, i) != i for i in range(order.size)):
        out.append(Diagnostic("least", f"block {least_block} is not the least index"))
    for name, c in alg.constants().items():
        if least_block is None:
            out.append(Diagnostic("least", f"constant {name} needs a least block"))
        elif ids[c] != least_block:
            out.append(Diagnostic("least", f"constant {name} lies outside the least block", (name, c)))
    return out


def check_semilattice_of_subalgebras(
    alg: FiniteAlgebra, blocks: Partition, order: JoinSemilattice, least_block: int | None = None
) -> bool:
    return not semilattice_of_subalgebras_diagnostics(alg, blocks, order, least_block)


def find_partition_function(
    alg: FiniteAlgebra, candidates: Sequence[Term], first: str = "x", second: str = "y"
) -> tuple[Term, PartitionFunction] | None:
    """The first candidate binary term whose term operation is a partition function."""
    for term in candidates:
        try:
            pf = partition_function_from_term(alg, term, first, second)
        except TermError as e:
            logger.debug(f"skipping candidate {render_term(term)}: {e}")
            continue
        if not partition_function_diagnostics(pf):
            return term, pf
    return None


def fiber_algebra(ps: PlonkaSum, i: int) -> FiniteAlgebra:
    if not 0 <= i < ps.index.size:
        raise IndexOutOfRange(f"no fiber {i}")
    return ps.origin.fibers[i]


def same_system(d1: DirectSystem, d2: DirectSystem) -> bool:
    """Equal index tables, fiber tables and transition maps."""
    return (
        d1.index == d2.index
        and len(d1.fibers) == len(d2.fibers)
        and all(a.same_tables(b) for a, b in zip(d1.fibers, d2.fibers))
        and d1.transitions == d2.transitions
    )


def extend_hom(d: DirectSystem, i: int, g: Homomorphism) -> Homomorphism:
    """h_g from the sum of d into the sum of star(g.target).

    h_g(a) = g(p_ji(a)) for a in a fiber j <= i, and ∞ otherwise.
    """
    if not 0 <= i < d.index.size:
        raise IndexOutOfRange(f"index {i} outside 0..{d.index.size - 1}")
    if not g.source.same_tables(d.fibers[i]) or g.source.size != d.fibers[i].size:
        raise IndexOutOfRange(f"g does not start at fiber {i}")
    require_valid(d)
    source = compose(d)
    target = compose(star(g.target))
    infinity = g.target.size
    mapping = []
    for j, a in source.locate:
        if (j, i) in d.transitions:
            mapping.append(g.mapping[d.transitions[(j, i)][a]])
        else:
            mapping.append(infinity)
    return Homomorphism(source.algebra, target.algebra, tuple(mapping))
