#!/usr/bin/env python3
# coding: utf-8

# plonkalab - free.py
# Free algebras in the regularization of a locally finite variety

import functools
import itertools
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from math import comb
from typing import Mapping, Sequence

import numpy as np

from algebra.core import FiniteAlgebra, Homomorphism, extend_from_generators, generated_subalgebra
from algebra.semilattice import JoinSemilattice, from_order, powerset
from config import BOOLEAN_PROVIDER_LIMIT, FREE_INDEX_CAP
from plonka.sums import PlonkaSum, compose
from plonka.system import DirectSystem
from plonka.varieties import CLIFFORD, IBSL
from utils.error_handling import (
    Diagnostic,
    InjectivityViolation,
    ProviderFailure,
    SizeCapExceeded,
    ValidationError,
)

logger = logging.getLogger(__name__)


class FreeFiberProvider(ABC):
    """Free algebras B_k of a locally finite variety V, with their universal property."""

    name = "V"

    def __init__(self):
        self._cache: dict[int, tuple[FiniteAlgebra, tuple[int, ...]]] = {}

    @abstractmethod
    def _build(self, k: int) -> tuple[FiniteAlgebra, tuple[int, ...]]:
        pass

    @abstractmethod
    def _extend(self, k: int, target: FiniteAlgebra, images: Sequence[int]) -> Homomorphism:
        pass

    def free(self, k: int) -> tuple[FiniteAlgebra, tuple[int, ...]]:
        """B_k and its k free generators."""
        if k not in self._cache:
            try:
                alg, gens = self._build(k)
            except (SizeCapExceeded, ValidationError):
                raise
            except Exception as e:
                raise ProviderFailure(f"{self.name} provider failed to build B_{k}: {e}") from e
            if len(gens) != k:
                raise ProviderFailure(f"{self.name} provider returned {len(gens)} generators for B_{k}")
            self._cache[k] = (alg, tuple(gens))
            logger.debug(f"{self.name}: B_{k} has {alg.size} elements")
        return self._cache[k]

    def extend(self, k: int, target: FiniteAlgebra, images: Sequence[int]) -> Homomorphism:
        """The unique homomorphism B_k -> target sending the r-th generator to images[r]."""
        if len(images) != k:
            raise ProviderFailure(f"{self.name} provider needs {k} images, got {len(images)}")
        return self._extend(k, target, images)


class BooleanFreeProvider(FreeFiberProvider):
    """B_k as the truth tables {0,1}^k -> {0,1}, element t being the table with bit r = value on row r."""

    name = "boolean"

    def _build(self, k: int) -> tuple[FiniteAlgebra, tuple[int, ...]]:
        if k > BOOLEAN_PROVIDER_LIMIT:
            raise SizeCapExceeded(f"boolean provider: B_{k} has {2 ** 2 ** k} elements, limit is k <= {BOOLEAN_PROVIDER_LIMIT}")
        rows = 1 << k
        size = 1 << rows
        full = size - 1
        idx = np.arange(size, dtype=np.int64)
        tables = {
            "join": np.bitwise_or.outer(idx, idx),
            "meet": np.bitwise_and.outer(idx, idx),
            "neg": full ^ idx,
            "zero": [0],
            "one": [full],
        }
        labels = tuple(format(t, f"0{rows}b")[::-1] for t in range(size))
        gens = tuple(sum(1 << row for row in range(rows) if row >> r & 1) for r in range(k))
        return FiniteAlgebra(IBSL, labels, tables, f"B{k}"), gens

    def _extend(self, k: int, target: FiniteAlgebra, images: Sequence[int]) -> Homomorphism:
        source, _ = self.free(k)
        rows = 1 << k
        zero, one = target.constant("zero"), target.constant("one")
        # minterm of each row of the truth table
        minterms = []
        for row in range(rows):
            value = one
            for r, image in enumerate(images):
                literal = image if row >> r & 1 else target.apply("neg", image)
                value = target.apply("meet", value, literal)
            minterms.append(value)
        mapping = []
        for t in range(source.size):
            value = zero
            for row in range(rows):
                if t >> row & 1:
                    value = target.apply("join", value, minterms[row])
            mapping.append(value)
        return Homomorphism(source, target, tuple(mapping))


def boolean_free_provider() -> BooleanFreeProvider:
    return BooleanFreeProvider()


def _canonical_table(table: np.ndarray) -> bytes:
    n = table.shape[0]
    best = None
    for perm in itertools.permutations(range(n)):
        p = np.asarray(perm)
        inverse = np.argsort(p)
        image = p[table[inverse[:, None], inverse[None, :]]].tobytes()
        best = image if best is None or image < best else best
    return best


@functools.cache
def small_semilattices(max_size: int) -> tuple[JoinSemilattice, ...]:
    """Every join-semilattice with at most max_size elements, one per isomorphism type."""
    found = []
    for n in range(1, max_size + 1):
        seen = set()
        upper = [(i, k) for i in range(n) for k in range(i + 1, n)]
        idx = np.arange(n)
        for values in itertools.product(range(n), repeat=len(upper)):
            table = np.diag(idx).astype(np.int64)
            for (i, k), v in zip(upper, values):
                table[i, k] = table[k, i] = v
            left = table[table[:, :, None], idx[None, None, :]]
            right = table[idx[:, None, None], table[None, :, :]]
            if not np.array_equal(left, right):
                continue
            key = _canonical_table(table)
            if key not in seen:
                seen.add(key)
                found.append(JoinSemilattice(table))
    return tuple(found)


def check_free_with_zero(s: JoinSemilattice, atoms: Sequence[int], max_target: int = 4) -> list[Diagnostic]:
    """Whether s is free over atoms (free with zero when s has a least element outside atoms).

    Every map of the atoms into a small semilattice must extend to a join homomorphism
    that also keeps the least element.
    """
    atoms = [int(a) for a in atoms]
    if len(set(atoms)) != len(atoms):
        return [Diagnostic("free", "generators are not distinct", tuple(atoms))]
    zero = s.least if s.least is not None and s.least not in atoms else None
    below = s.order[atoms, :]  # below[r, x]: atom r <= x
    for x in range(s.size):
        gens = np.nonzero(below[:, x])[0]
        expected = zero if gens.size == 0 else functools.reduce(s.j, (atoms[r] for r in gens))
        if expected != x:
            return [Diagnostic("free", f"{s.labels[x]} is not the join of the generators below it", (x,))]
    for target in small_semilattices(max_target):
        if zero is not None and target.least is None:
            continue
        for images in itertools.product(range(target.size), repeat=len(atoms)):
            f = np.empty(s.size, dtype=np.int64)
            for x in range(s.size):
                gens = np.nonzero(below[:, x])[0]
                f[x] = target.least if gens.size == 0 else functools.reduce(target.j, (images[r] for r in gens))
            moved = any(f[a] != images[r] for r, a in enumerate(atoms))
            if moved or not np.array_equal(f[s.join], target.join[f[:, None], f[None, :]]):
                return [Diagnostic("free", f"generator images {images} do not extend to a homomorphism", images)]
    return []


def finite_subsets_semilattice(n: int, verify: bool = True) -> JoinSemilattice:
    if not 0 <= n <= FREE_INDEX_CAP:
        raise SizeCapExceeded(f"finite_subsets_semilattice: n={n} outside 0..{FREE_INDEX_CAP}")
    s = powerset(n)
    if verify:
        problems = check_free_with_zero(s, [1 << r for r in range(n)], max_target=4 if n <= 3 else 3)
        if problems:
            raise ValidationError(f"subsets of {n} are not free with zero: {problems[0]}", diagnostics=problems)
    return s


def _members(mask: int) -> list[int]:
    return [r for r in range(mask.bit_length()) if mask >> r & 1]


def free_count(n: int, sizes: Sequence[int]) -> int:
    if len(sizes) < n + 1 or any(x <= 0 for x in sizes[: n + 1]):
        raise ValidationError(f"free_count needs {n + 1} positive sizes")
    return sum(comb(n, j) * sizes[j] for j in range(n + 1))


@dataclass(frozen=True)
class FreeReport:
    system: DirectSystem
    generator_locations: Mapping[str, int]
    predicted: int
    actual: int
    generators: Mapping[int, tuple[int, ...]]

    @property
    def size_check(self) -> tuple[int, int]:
        return self.predicted, self.actual


def free_plonka(n: int, provider: FreeFiberProvider) -> FreeReport:
    """The n-generated free algebra of R(V) as a system over the subsets of {1..n}."""
    index = finite_subsets_semilattice(n)
    fibers, generators = [], {}
    for mask in range(index.size):
        alg, gens = provider.free(len(_members(mask)))
        fibers.append(alg)
        generators[mask] = gens
    transitions = {}
    for small, large in zip(*np.nonzero(index.order)):
        small, large = int(small), int(large)
        inner, outer = _members(small), _members(large)
        images = [generators[large][outer.index(r)] for r in inner]
        h = provider.extend(len(inner), fibers[large], images)
        if not h.is_injective():
            raise InjectivityViolation(f"transition {index.labels[small]} -> {index.labels[large]} is not injective")
        transitions[(small, large)] = h.mapping
    system = DirectSystem(index, tuple(fibers), transitions, f"F{n}({provider.name})")
    ps = compose(system)
    locations = {f"x{r + 1}": ps.element(1 << r, generators[1 << r][0]) for r in range(n)}
    predicted = free_count(n, [provider.free(k)[0].size for k in range(n + 1)])
    if predicted != ps.algebra.size:
        raise ValidationError(f"free algebra has {ps.algebra.size} elements, expected {predicted}")
    logger.info(f"free algebra on {n} generator(s) over {provider.name}: {predicted} elements")
    return FreeReport(system, locations, predicted, ps.algebra.size, generators)


def check_freeness_conditions(d: DirectSystem, claimed_gens: Mapping[int, Sequence[int]]) -> list[Diagnostic]:
    """claimed_gens[i] lists the designated generators of fiber i; one-generator indices are the index generators.

    Laws: free-index (the index is free, with zero, on its generators), generated (each fiber
    is generated by its designated generators) and generator-maps (transitions are injective
    and send generators to generators positionally).
    """
    out = []
    n = d.index.size
    atoms = sorted(i for i in range(n) if len(claimed_gens.get(i, ())) == 1)
    out += [Diagnostic("free-index", x.message, x.witness) for x in check_free_with_zero(d.index, atoms)]
    order = d.index.order
    support = {i: [a for a in atoms if order[a, i]] for i in range(n)}
    for i, fiber in enumerate(d.fibers):
        gens = [int(x) for x in claimed_gens.get(i, ())]
        if len(gens) != len(support[i]):
            out.append(Diagnostic("generated", f"fiber {i} has {len(gens)} generators for {len(support[i])} index generators", (i,)))
            continue
        if len(generated_subalgebra(fiber, gens)) != fiber.size:
            out.append(Diagnostic("generated", f"fiber {i} is not generated by {gens}", (i,)))
    if out:
        return out
    for k in range(n):
        gens = list(claimed_gens.get(k, ()))
        if len(set(gens)) != len(gens):
            out.append(Diagnostic("generator-maps", f"distinct index generators share a generator in fiber {k}", (k,)))
    for (i, k), p in d.transitions.items():
        if i == k:
            continue
        if len(set(p)) != len(p):
            a = next(x for x in range(len(p)) if p.index(p[x]) != x)
            out.append(Diagnostic("generator-maps", f"p_{i}{k} is not injective", (i, k, a)))
            continue
        for r, atom in enumerate(support[i]):
            expected = claimed_gens[k][support[k].index(atom)]
            if p[claimed_gens[i][r]] != expected:
                out.append(Diagnostic("generator-maps", f"p_{i}{k} sends generator {r} to {p[claimed_gens[i][r]]}, not {expected}", (i, k, r)))
                break
    for x in out:
        logger.warning(str(x))
    return out


def merged_generators_system() -> tuple[DirectSystem, dict[int, tuple[int, ...]]]:
    """Two one-generated groups over the free semilattice on two generators, both sent onto one generator on top."""
    index = from_order(3, [(0, 2), (1, 2)], ("{1}", "{2}", "{1,2}"))
    z2 = FiniteAlgebra.from_operations(CLIFFORD, ("e", "x"), {"mul": lambda a, b: a ^ b, "inv": lambda a: a}, "Z2")
    transitions = {(0, 2): (0, 1), (1, 2): (0, 1)}
    system = DirectSystem(index, (z2, z2, z2), transitions, "merged-generators")
    return system, {0: (1,), 1: (1,), 2: (1, 1)}


def subset_generators(alg: FiniteAlgebra, dot: np.ndarray, generators: Sequence[int], subset: Sequence[int]) -> list[int]:
    """g_i = a_{k_i} ⊙ a_{k_2} ⊙ .. a_{k_1} .. ⊙ a_{k_n}: the subset's elements with the first and i-th swapped, left-associated."""
    keys = [generators[k] for k in subset]
    out = []
    for i in range(len(keys)):
        order = list(keys)
        order[0], order[i] = order[i], order[0]
        value = order[0]
        for b in order[1:]:
            value = int(dot[value, b])
        out.append(value)
    return out


def universal_mapping_count(free_alg: FiniteAlgebra, generators: Sequence[int], target: FiniteAlgebra) -> dict[tuple[int, ...], int]:
    """Homomorphisms free_alg -> target extending each assignment of the generators.

    A homomorphism is fixed by the images of a generating set, so each count is 0 or 1
    once the generators generate; otherwise no assignment has a unique extension.
    """
    if len(generated_subalgebra(free_alg, generators)) != free_alg.size:
        raise ValidationError("the given elements do not generate the algebra")
    counts = {}
    for images in itertools.product(range(target.size), repeat=len(generators)):
        counts[images] = int(extend_from_generators(free_alg, generators, target, images) is not None)
    return counts


def free_sum(report: FreeReport) -> PlonkaSum:
    return compose(report.system)
