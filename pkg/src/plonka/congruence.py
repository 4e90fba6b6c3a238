#!/usr/bin/env python3
# coding: utf-8

# plonkalab - congruence.py
# Congruences of Płonka sums through the index and the fibers

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import networkx as nx
import numpy as np
from tqdm import tqdm

from algebra.core import FiniteAlgebra, compatibility_witness, congruence_closure, quotient_algebra
from algebra.relations import Partition, Relation
from algebra.semilattice import (
    JoinSemilattice,
    all_semilattice_congruences,
    as_algebra,
    cg_semilattice,
    is_join_closed,
    is_upper_transitive,
)
from config import SHOW_PROGRESS, SYSTEM_CAP, SYSTEM_INDEX_CAP
from plonka.sums import PlonkaSum, compose
from plonka.system import DirectSystem, star
from utils.decorators import size_capped
from utils.error_handling import (
    Diagnostic,
    InconsistentTransitions,
    InvalidSystemCongruence,
    PrematureRelation,
    SizeCapExceeded,
    TrivialAlgebra,
    ValidationError,
    raise_on_errors,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AlgebraCongruence:
    algebra: FiniteAlgebra = field(compare=False, repr=False)
    partition: Partition

    def __post_init__(self):
        if self.partition.size != self.algebra.size:
            raise ValidationError(f"congruence on {self.partition.size} elements for an algebra of {self.algebra.size}")
        witness = compatibility_witness(self.algebra, self.partition)
        if witness is not None:
            raise ValidationError(f"partition is not compatible with {witness[0]} at {witness[1]}")

    @classmethod
    def identity(cls, alg: FiniteAlgebra) -> "AlgebraCongruence":
        return cls(alg, Partition.discrete(alg.size))

    @classmethod
    def total(cls, alg: FiniteAlgebra) -> "AlgebraCongruence":
        return cls(alg, Partition.indiscrete(alg.size))

    @property
    def blocks(self):
        return self.partition.blocks

    @property
    def matrix(self) -> np.ndarray:
        return self.partition.matrix

    def same(self, a: int, b: int) -> bool:
        return self.partition.same(a, b)

    def leq(self, other: "AlgebraCongruence") -> bool:
        return self.partition.leq(other.partition)

    def meet(self, other: "AlgebraCongruence") -> "AlgebraCongruence":
        return AlgebraCongruence(self.algebra, self.partition.meet(other.partition))

    def join(self, other: "AlgebraCongruence") -> "AlgebraCongruence":
        return AlgebraCongruence(self.algebra, self.partition.join(other.partition))

    def is_identity(self) -> bool:
        return self.partition.is_discrete()

    def is_total(self) -> bool:
        return self.partition.is_indiscrete()


def cg(alg: FiniteAlgebra, pairs: Iterable[tuple[int, int]]) -> AlgebraCongruence:
    return AlgebraCongruence(alg, congruence_closure(alg, pairs))


@size_capped("algebra")
def all_congruences(alg: FiniteAlgebra, cap: int | None = None) -> list[AlgebraCongruence]:
    """Con(alg): Δ plus every join of principal congruences."""
    principals = sorted(
        {congruence_closure(alg, [(a, b)]) for a, b in itertools.combinations(range(alg.size), 2)},
        key=Partition.sort_key,
    )
    found = {Partition.discrete(alg.size)} | set(principals)
    frontier = list(principals)
    with tqdm(total=None, disable=not SHOW_PROGRESS, desc="Con(A)") as bar:
        while frontier:
            fresh = []
            for x in frontier:
                for p in principals:
                    y = x.join(p)
                    if y not in found:
                        found.add(y)
                        fresh.append(y)
            bar.update(len(fresh))
            frontier = fresh
    logger.debug(f"{alg.name or 'algebra'} of size {alg.size} has {len(found)} congruences")
    return [AlgebraCongruence(alg, p) for p in sorted(found, key=Partition.sort_key)]


def lattice_covers(items: Sequence[Partition]) -> list[tuple[int, int]]:
    """Cover pairs (lower, upper) of a list of partitions ordered by refinement."""
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(items)))
    graph.add_edges_from(
        (a, b) for a, b in itertools.permutations(range(len(items)), 2) if items[a].leq(items[b])
    )
    return sorted(nx.transitive_reduction(graph).edges())


def relation_product(m1: np.ndarray, m2: np.ndarray) -> np.ndarray:
    return (m1.astype(np.int64) @ m2.astype(np.int64)) > 0


def permutable(th1: AlgebraCongruence, th2: AlgebraCongruence) -> bool:
    return bool(np.array_equal(relation_product(th1.matrix, th2.matrix), relation_product(th2.matrix, th1.matrix)))


def is_factor_pair(alg: FiniteAlgebra, th1: AlgebraCongruence, th2: AlgebraCongruence) -> bool:
    if th1.partition.size != alg.size or th2.partition.size != alg.size:
        raise ValidationError("congruences do not live on the given algebra")
    return (
        th1.partition.meet(th2.partition).is_discrete()
        and th1.partition.join(th2.partition).is_indiscrete()
        and permutable(th1, th2)
    )


# S_θ, C_θ and the fibers θ_ij


def _blocks(ps: PlonkaSum) -> list[np.ndarray]:
    return [np.asarray(ps.block(i), dtype=np.int64) for i in range(ps.index.size)]


def _index_links(ps: PlonkaSum, m: np.ndarray) -> np.ndarray:
    """S[i, j] iff the relation m links some element of A_i to some element of A_j."""
    onehot = np.zeros((ps.algebra.size, ps.index.size), dtype=np.int64)
    onehot[np.arange(ps.algebra.size), ps.fiber_of] = 1
    return (onehot.T @ m.astype(np.int64) @ onehot) > 0


def _upper_links(index: JoinSemilattice, s: np.ndarray) -> np.ndarray:
    """C[i, j] iff (i, i v j) and (j, i v j) are in S."""
    n = index.size
    idx = np.arange(n)
    top = index.join
    return s[idx[:, None], top] & s[idx[None, :], top]


def fibers_of(ps: PlonkaSum, th: AlgebraCongruence) -> tuple[Relation, Partition, dict[tuple[int, int], frozenset]]:
    """S_θ, C_θ and the nonempty θ_ij (pairs of local indices)."""
    m = th.matrix
    s = _index_links(ps, m)
    c = _upper_links(ps.index, s)
    blocks = _blocks(ps)
    theta_blocks = {}
    for i, j in zip(*np.nonzero(s)):
        local = m[np.ix_(blocks[i], blocks[j])]
        theta_blocks[(int(i), int(j))] = frozenset((int(a), int(b)) for a, b in np.argwhere(local).tolist())
    return Relation.from_matrix(s), Partition.from_pairs(ps.index.size, np.argwhere(c).tolist()), theta_blocks


def s_theta(ps: PlonkaSum, th: AlgebraCongruence) -> Relation:
    return Relation.from_matrix(_index_links(ps, th.matrix))


@dataclass(frozen=True, eq=False)
class SystemCongruence:
    """A pair (C, {θ_ii}) of an index congruence and one congruence per fiber."""

    system: DirectSystem
    C: Partition
    theta: tuple[Partition, ...]

    def __post_init__(self):
        object.__setattr__(self, "theta", tuple(self.theta))
        if self.C.size != self.system.index.size or len(self.theta) != self.system.index.size:
            raise InvalidSystemCongruence("one index partition and one fiber partition per index are required")
        for i, (p, fiber) in enumerate(zip(self.theta, self.system.fibers)):
            if p.size != fiber.size:
                raise InvalidSystemCongruence(f"theta[{i}] has {p.size} elements, fiber has {fiber.size}")

    def key(self) -> tuple:
        return (self.C.ids, tuple(p.ids for p in self.theta))

    def __eq__(self, other):
        if not isinstance(other, SystemCongruence):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def leq(self, other: "SystemCongruence") -> bool:
        return self.C.leq(other.C) and all(a.leq(b) for a, b in zip(self.theta, other.theta))

    def pullback(self, i: int, j: int) -> np.ndarray:
        """(p_{i,i v j} x p_{j,i v j})^-1(θ_{i v j}) as a |A_i| x |A_j| boolean matrix."""
        d = self.system
        k = d.index.j(i, j)
        return self.theta[k].matrix[d.maps[(i, k)][:, None], d.maps[(j, k)][None, :]]

    @property
    def s_c(self) -> Relation:
        n = self.system.index.size
        return Relation(
            n, frozenset((i, j) for i, j in itertools.product(range(n), repeat=2) if self.C.same(i, j) and self.pullback(i, j).any())
        )

    def diagnostics(self) -> list[Diagnostic]:
        d = self.system
        out = []
        witness = compatibility_witness(as_algebra(d.index), self.C)
        if witness is not None:
            out.append(Diagnostic("C", f"C is not a congruence of the index: {witness}", witness[1]))
        for i, (p, fiber) in enumerate(zip(self.theta, d.fibers)):
            witness = compatibility_witness(fiber, p)
            if witness is not None:
                out.append(Diagnostic("theta", f"theta_{i}{i} is not a congruence: {witness}", (i, *witness[1])))
        if out:
            return out
        s_c = self.s_c
        n = d.index.size
        for i, j in itertools.product(range(n), repeat=2):
            k = d.index.j(i, j)
            pulled = self.theta[k].matrix[d.maps[(i, k)][:, None], d.maps[(i, k)][None, :]]
            mine = self.theta[i].matrix
            if (mine & ~pulled).any():
                a, b = (int(x) for x in np.argwhere(mine & ~pulled)[0])
                out.append(Diagnostic("pullback", f"theta_{i}{i} is not inside the pullback from {k}", (i, j, a, b)))
            elif (i, j) in s_c and not np.array_equal(mine, pulled):
                a, b = (int(x) for x in np.argwhere(mine != pulled)[0])
                out.append(Diagnostic("pullback-equal", f"theta_{i}{i} differs from the pullback from {k}", (i, j, a, b)))
        return out


def to_system_congruence(ps: PlonkaSum, th: AlgebraCongruence) -> SystemCongruence:
    _, c, _ = fibers_of(ps, th)
    m = th.matrix
    theta = []
    for block in _blocks(ps):
        local = m[np.ix_(block, block)]
        theta.append(Partition.from_pairs(len(block), np.argwhere(local).tolist()))
    return SystemCongruence(ps.origin, c, tuple(theta))


def from_system_congruence(sc: SystemCongruence, ps: PlonkaSum | None = None) -> AlgebraCongruence:
    """θ = union of the pullbacks θ_ij over (i, j) in S_C."""
    raise_on_errors(sc.diagnostics(), InvalidSystemCongruence, "system congruence")
    ps = ps if ps is not None else compose(sc.system)
    if ps.origin is not sc.system:
        raise InvalidSystemCongruence("the Płonka sum does not come from this system")
    m = np.zeros((ps.algebra.size,) * 2, dtype=bool)
    blocks = _blocks(ps)
    for i, j in sc.s_c:
        m[np.ix_(blocks[i], blocks[j])] |= sc.pullback(i, j)
    partition = Partition.from_pairs(ps.algebra.size, np.argwhere(m).tolist())
    if not np.array_equal(partition.matrix, m):
        raise InvalidSystemCongruence("the union of the pullbacks is not an equivalence")
    return AlgebraCongruence(ps.algebra, partition)


def relation_links(ps: PlonkaSum, pairs: Iterable[tuple[int, int]]) -> set[tuple[int, int]]:
    """S_R: the index pairs (i, j) with R meeting A_i x A_j."""
    return {(int(ps.fiber_of[a]), int(ps.fiber_of[b])) for a, b in pairs}


def generated_system_congruence(ps: PlonkaSum, pairs: Iterable[tuple[int, int]], C: Partition) -> SystemCongruence:
    pairs = [(int(a), int(b)) for a, b in pairs]
    d = ps.origin
    premature = sorted((i, j) for i, j in relation_links(ps, pairs) if not C.same(i, j))
    if premature:
        raise PrematureRelation(f"S_R contains {premature[0]}, which C does not relate")
    n = d.index.size
    order = d.index.order
    # Ψ_i = Cg(⋃_{u,v <= i} (p_ui x p_vi)(R_uv)), all computed before S_C
    psi = []
    for i in range(n):
        generators = []
        for a, b in pairs:
            (u, x), (v, y) = ps.locate[a], ps.locate[b]
            if order[u, i] and order[v, i]:
                generators.append((d.transitions[(u, i)][x], d.transitions[(v, i)][y]))
        psi.append(congruence_closure(d.fibers[i], generators))
    psi_system = SystemCongruence(d, C, tuple(psi))
    s_c = psi_system.s_c
    theta = []
    for i in range(n):
        m = np.zeros((d.fibers[i].size,) * 2, dtype=bool)
        for k in range(n):
            if order[i, k] and (i, k) in s_c:
                p = d.maps[(i, k)]
                m |= psi[k].matrix[p[:, None], p[None, :]]
        theta.append(Partition.from_pairs(d.fibers[i].size, np.argwhere(m).tolist()))
    return SystemCongruence(d, C, tuple(theta))


def cg_plonka(ps: PlonkaSum, pairs: Iterable[tuple[int, int]]) -> AlgebraCongruence:
    """Cg(R) computed fiberwise from C = Cg(S_R) on the index."""
    pairs = [(int(a), int(b)) for a, b in pairs]
    C = cg_semilattice(ps.index, sorted(relation_links(ps, pairs)))
    return from_system_congruence(generated_system_congruence(ps, pairs, C), ps)


def _on_index(index: JoinSemilattice, p: Partition) -> AlgebraCongruence:
    return AlgebraCongruence(as_algebra(index), p)


def check_factor_theorem(ps: PlonkaSum, th1: AlgebraCongruence, th2: AlgebraCongruence) -> bool:
    """Factor pair on the sum iff permutable, factor pair on the index and on every fiber."""
    left = is_factor_pair(ps.algebra, th1, th2)
    sc1, sc2 = to_system_congruence(ps, th1), to_system_congruence(ps, th2)
    right = (
        permutable(th1, th2)
        and is_factor_pair(as_algebra(ps.index), _on_index(ps.index, sc1.C), _on_index(ps.index, sc2.C))
        and all(
            is_factor_pair(fiber, AlgebraCongruence(fiber, a), AlgebraCongruence(fiber, b))
            for fiber, a, b in zip(ps.origin.fibers, sc1.theta, sc2.theta)
        )
    )
    if left != right:
        logger.warning(f"factor theorem fails: sum side {left}, index/fiber side {right}")
    return left == right


def quotient_plonka(ps: PlonkaSum, th: AlgebraCongruence) -> DirectSystem:
    """The system over I/C_θ whose sum is isomorphic to ps.algebra/θ."""
    d = ps.origin
    _, c, _ = fibers_of(ps, th)
    index_quotient = quotient_algebra(as_algebra(d.index), c)
    index = JoinSemilattice(index_quotient.table_nd("join"), index_quotient.labels)
    whole = quotient_algebra(ps.algebra, th.partition)
    class_of = th.partition.ids
    members = [[] for _ in c.blocks]  # θ-classes per index block, by least representative
    for cls, block in enumerate(th.partition.blocks):
        members[c.ids[ps.fiber_of[block[0]]]].append(cls)
    fibers = []
    for b, classes in enumerate(members):
        local = {cls: r for r, cls in enumerate(classes)}
        tables = {}
        for op in ps.algebra.signature.operations:
            if op.arity == 0:
                # constant of this fiber: the image of the global constant in any member index
                j = c.blocks[b][0]
                image = ps.route[ps.algebra.constant(op.name), j]
                tables[op.name] = [local[class_of[image]]]
                continue
            arr = np.asarray(classes, dtype=np.int64)
            values = whole.table_nd(op.name)[np.ix_(*[arr] * op.arity)].ravel().tolist()
            if any(v not in local for v in values):
                raise InconsistentTransitions(f"fiber [{b}] of the quotient is not closed under {op.name}")
            tables[op.name] = [local[v] for v in values]
        fibers.append(FiniteAlgebra(ps.algebra.signature, tuple(whole.labels[x] for x in classes), tables, f"A[{b}]"))
    transitions = {}
    for b, k in itertools.product(range(len(members)), repeat=2):
        if not index.order[b, k]:
            continue
        target_local = {cls: r for r, cls in enumerate(members[k])}
        images = {}
        for j in c.blocks[b]:
            for g in ps.block(j):
                for k_rep in c.blocks[k]:
                    img = class_of[ps.route[g, d.index.j(j, k_rep)]]
                    if images.setdefault(class_of[g], img) != img:
                        raise InconsistentTransitions(f"transition [{b}]->[{k}] depends on representatives at {g}")
        transitions[(b, k)] = tuple(target_local[images[cls]] for cls in members[b])
    system = DirectSystem(index, tuple(fibers), transitions, f"{d.name}/θ" if d.name else "")
    recomposed = compose(system)
    perm = [recomposed.place[(b, r)] for b, classes in enumerate(members) for r, _ in enumerate(classes)]
    order = [cls for classes in members for cls in classes]
    bijection = [0] * whole.size
    for cls, g in zip(order, perm):
        bijection[cls] = g
    if not whole.relabel(bijection).same_tables(recomposed.algebra):
        raise InconsistentTransitions("the quotient system does not recompose to A/θ")
    return system


def monolith(alg: FiniteAlgebra, cap: int | None = None) -> AlgebraCongruence | None:
    """The least non-identity congruence, when there is one; never for a trivial algebra."""
    if alg.size == 1:
        return None
    nontrivial = [x for x in all_congruences(alg, cap=cap) if not x.is_identity()]
    meet = nontrivial[0].partition
    for x in nontrivial[1:]:
        meet = meet.meet(x.partition)
    return None if meet.is_discrete() else AlgebraCongruence(alg, meet)


def is_subdirectly_irreducible(alg: FiniteAlgebra, cap: int | None = None) -> bool:
    return monolith(alg, cap=cap) is not None


def has_absorbing_element(alg: FiniteAlgebra) -> int | None:
    if alg.size == 1:
        raise TrivialAlgebra("absorbing elements are only defined for nontrivial algebras")
    for a in range(alg.size):
        absorbing = True
        for op in alg.signature.non_nullary:
            table = alg.table_nd(op.name)
            for axis in range(op.arity):
                if (np.take(table, a, axis=axis) != a).any():
                    absorbing = False
                    break
            if not absorbing:
                break
        if absorbing:
            return a
    return None


def _si_sides(b: FiniteAlgebra, admit_trivial: bool, cap: int | None) -> tuple[bool, bool]:
    star_si = is_subdirectly_irreducible(compose(star(b)).algebra, cap=cap)
    if b.size == 1:
        return star_si, admit_trivial
    return star_si, is_subdirectly_irreducible(b, cap=cap) and has_absorbing_element(b) is None


def check_si_theorem(b: FiniteAlgebra, admit_trivial: bool = True, cap: int | None = None) -> bool:
    """star(b) is SI iff b is SI without an absorbing element.

    With admit_trivial the one-element b counts on the right-hand side, matching the
    two-element semilattice star(trivial).
    """
    left, right = _si_sides(b, admit_trivial, cap)
    if left != right:
        logger.info(f"SI equivalence fails for {b.name or 'algebra'}: star SI {left}, right side {right}")
    return left == right


def si_convention_report(algebras: Sequence[FiniteAlgebra], cap: int | None = None) -> dict[str, list[str]]:
    """Algebras on which each reading of the trivial case disagrees with brute force."""
    report = {"admit_trivial": [], "nontrivial_only": []}
    for b in algebras:
        if not check_si_theorem(b, admit_trivial=True, cap=cap):
            report["admit_trivial"].append(b.name)
        if not check_si_theorem(b, admit_trivial=False, cap=cap):
            report["nontrivial_only"].append(b.name)
    return report


def lifted_index_congruence(ps: PlonkaSum, C: Partition) -> AlgebraCongruence:
    """(a, b) related iff p_ik(a) = p_jk(b) for some k above i and j with (i,k), (j,k) in C."""
    n = ps.index.size
    links = []
    seen: dict[int, int] = {}
    for g in range(ps.algebra.size):
        i = int(ps.fiber_of[g])
        for k in range(n):
            if ps.index.order[i, k] and C.same(i, k):
                image = int(ps.route[g, k])
                links.append((seen.setdefault(image, g), g))
    return AlgebraCongruence(ps.algebra, Partition.from_pairs(ps.algebra.size, links))


def _s_and_c(ps: PlonkaSum, m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    s = _index_links(ps, m)
    return s, _upper_links(ps.index, s)


def audit_congruence(ps: PlonkaSum, th: AlgebraCongruence) -> list[Diagnostic]:
    """Check the structure of S_θ, C_θ and the fibers θ_ij on one congruence."""
    d, m = ps.origin, th.matrix
    out = []
    s, c_matrix = _s_and_c(ps, m)
    S = Relation.from_matrix(s)
    n = d.index.size
    if not s[np.arange(n), np.arange(n)].all():
        out.append(Diagnostic("S.reflexive", "S_θ is not reflexive"))
    if not np.array_equal(s, s.T):
        out.append(Diagnostic("S.symmetric", "S_θ is not symmetric"))
    if not is_join_closed(d.index, S):
        out.append(Diagnostic("S.join", "S_θ is not closed under joins"))
    if not is_upper_transitive(d.index, S):
        out.append(Diagnostic("S.upper", "S_θ is not upper transitive"))
    for i, j in S:
        k = d.index.j(i, j)
        bad = [g for g in ps.block(i) if not m[g, ps.route[g, k]]]
        if bad:
            out.append(Diagnostic("S.image", f"a and p_{i}{k}(a) are not related", (i, j, bad[0])))
    C = Partition.from_pairs(n, np.argwhere(c_matrix).tolist())
    if not np.array_equal(C.matrix, c_matrix):
        out.append(Diagnostic("C.equivalence", "C_θ is not an equivalence"))
    elif C != cg_semilattice(d.index, S):
        out.append(Diagnostic("C.generated", "C_θ differs from Cg(S_θ)"))
    sc = to_system_congruence(ps, th)
    blocks = _blocks(ps)
    for i, j, k in itertools.product(range(n), repeat=3):
        if s[i, j] and s[j, k] and s[i, k] != sc_pullback_nonempty(sc, i, k):
            out.append(Diagnostic("S.link", "(i,k) in S_θ disagrees with a nonempty pullback", (i, j, k)))
    for i, j in itertools.product(range(n), repeat=2):
        mine = sc.theta[i].matrix
        pulled = _pure_pullback(sc, i, j)
        if (mine & ~pulled).any():
            out.append(Diagnostic("fiber.inside", f"θ_{i}{i} is not inside its pullback from {d.index.j(i, j)}", (i, j)))
        if s[i, j]:
            if not np.array_equal(mine, pulled):
                out.append(Diagnostic("fiber.pure", f"θ_{i}{i} differs from its pullback along ({i},{j})", (i, j)))
            if not np.array_equal(m[np.ix_(blocks[i], blocks[j])], sc.pullback(i, j)):
                out.append(Diagnostic("fiber.mixed", f"θ_{i}{j} differs from the pullback", (i, j)))
        if s[i, j] != (c_matrix[i, j] and sc.pullback(i, j).any()):
            out.append(Diagnostic("S.from_C", "(i,j) in S_θ disagrees with C_θ and the pullback", (i, j)))
    if d.signature.constants or d.index.is_chain():
        linked = (s.astype(np.int64) @ s.astype(np.int64)) > 0
        if (linked & ~s).any():
            i, k = (int(x) for x in np.argwhere(linked & ~s)[0])
            out.append(Diagnostic("S.transitive", "S_θ is not transitive", (i, k)))
    return out


def sc_pullback_nonempty(sc: SystemCongruence, i: int, k: int) -> bool:
    return bool(sc.pullback(i, k).any())


def _pure_pullback(sc: SystemCongruence, i: int, j: int) -> np.ndarray:
    d = sc.system
    k = d.index.j(i, j)
    p = d.maps[(i, k)]
    return sc.theta[k].matrix[p[:, None], p[None, :]]


def audit_pair(ps: PlonkaSum, th1: AlgebraCongruence, th2: AlgebraCongruence) -> list[Diagnostic]:
    """Intersections fiberwise, and for permutable pairs the behaviour of θ1 ∘ θ2."""
    out = []
    meet = th1.meet(th2)
    sc1, sc2, sc_meet = (to_system_congruence(ps, x) for x in (th1, th2, meet))
    if sc_meet.C != sc1.C.meet(sc2.C):
        out.append(Diagnostic("meet.C", "C of the meet differs from the meet of the Cs"))
    for i in range(ps.index.size):
        if sc_meet.theta[i] != sc1.theta[i].meet(sc2.theta[i]):
            out.append(Diagnostic("meet.fiber", f"fiber {i} of the meet differs from the meet of the fibers", (i,)))
    if not permutable(th1, th2):
        return out
    m1, m2 = th1.matrix, th2.matrix
    product = relation_product(m1, m2)
    s1, c1 = _s_and_c(ps, m1)
    s2, c2 = _s_and_c(ps, m2)
    s12, c12 = _s_and_c(ps, product)
    if (s12 & ~relation_product(s1, s2)).any():
        out.append(Diagnostic("compose.S", "S of θ1∘θ2 is not inside S_θ1 ∘ S_θ2"))
    if (relation_product(c1, c2) & ~c12).any():
        out.append(Diagnostic("compose.C", "C_θ1 ∘ C_θ2 is not inside C of θ1∘θ2"))
    blocks = _blocks(ps)
    both = s1 & s2
    for i in range(ps.index.size):
        expected = np.zeros((len(blocks[i]),) * 2, dtype=bool)
        for j in np.nonzero(both[i])[0]:
            expected |= relation_product(m1[np.ix_(blocks[i], blocks[j])], m2[np.ix_(blocks[j], blocks[i])])
        if not np.array_equal(product[np.ix_(blocks[i], blocks[i])], expected):
            out.append(Diagnostic("compose.fiber", f"(θ1∘θ2)_{i}{i} differs from the union over S_θ1 ∩ S_θ2", (i,)))
    return out


def all_system_congruences(d: DirectSystem, cap: int | None = None, index_cap: int | None = None) -> list[SystemCongruence]:
    """Every valid (C, {θ_ii}) by brute force over index and fiber congruences."""
    limit = cap if cap is not None else SYSTEM_CAP
    index_limit = index_cap if index_cap is not None else SYSTEM_INDEX_CAP
    if d.size > limit or d.index.size > index_limit:
        raise SizeCapExceeded(
            f"all_system_congruences: system has {d.size} elements over {d.index.size} indices, caps are {limit}/{index_limit}"
        )
    index_congruences = all_semilattice_congruences(d.index, cap=index_limit)
    fiber_congruences = [[x.partition for x in all_congruences(f, cap=max(f.size, 1))] for f in d.fibers]
    found = []
    candidates = itertools.product(index_congruences, *fiber_congruences)
    for C, *theta in tqdm(candidates, disable=not SHOW_PROGRESS, desc="Con(system)"):
        sc = SystemCongruence(d, C, tuple(theta))
        if not sc.diagnostics():
            found.append(sc)
    logger.debug(f"{d!r} has {len(found)} system congruences")
    return sorted(found, key=SystemCongruence.key)
