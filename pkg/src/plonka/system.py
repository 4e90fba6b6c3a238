#!/usr/bin/env python3
# coding: utf-8

# plonkalab - system.py
# Semilattice direct systems and their morphisms

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

import networkx as nx
import numpy as np

from algebra.core import FiniteAlgebra, Homomorphism, homomorphism_diagnostics, trivial_algebra
from algebra.semilattice import JoinSemilattice, chain, hasse_covers, semilattice_diagnostics
from utils.error_handling import (
    Diagnostic,
    IndexOutOfRange,
    InvalidSystem,
    ShapeMismatch,
    SignatureMismatch,
    raise_on_errors,
)

logger = logging.getLogger(__name__)

Pair = tuple[int, int]


@dataclass(frozen=True, eq=False)
class DirectSystem:
    """Fibers indexed by a join-semilattice with maps p_ij for every i <= j.

    transitions[(i, j)] is the tuple of images of the local elements of fiber i.
    Missing diagonal entries are filled with identities.
    """

    index: JoinSemilattice
    fibers: tuple[FiniteAlgebra, ...]
    transitions: Mapping[Pair, tuple[int, ...]]
    name: str = ""

    def __post_init__(self):
        fibers = tuple(self.fibers)
        if len(fibers) != self.index.size:
            raise ShapeMismatch(f"fibers: {len(fibers)} fibers for {self.index.size} indices")
        for i, fiber in enumerate(fibers[1:], start=1):
            if fiber.signature != fibers[0].signature:
                raise SignatureMismatch(f"fibers[{i}]: signature {fiber.signature} differs from {fibers[0].signature}")
        order = self.index.order
        maps: dict[Pair, tuple[int, ...]] = {}
        for (i, j), values in self.transitions.items():
            i, j = int(i), int(j)
            if not (0 <= i < len(fibers) and 0 <= j < len(fibers)):
                raise ShapeMismatch(f"transitions: ({i},{j}) names an index outside 0..{len(fibers) - 1}")
            if not order[i, j]:
                raise ShapeMismatch(f"transitions: ({i},{j}) is not a comparable pair i <= j")
            values = tuple(int(x) for x in values)
            if len(values) != fibers[i].size or any(not 0 <= x < fibers[j].size for x in values):
                raise ShapeMismatch(f"transitions ({i},{j}): map must send {fibers[i].size} elements into 0..{fibers[j].size - 1}")
            maps[(i, j)] = values
        for i, j in zip(*np.nonzero(order)):
            i, j = int(i), int(j)
            if (i, j) not in maps:
                if i != j:
                    raise ShapeMismatch(f"transitions: missing map for ({i},{j})")
                maps[(i, i)] = tuple(range(fibers[i].size))
        object.__setattr__(self, "fibers", fibers)
        object.__setattr__(self, "transitions", dict(sorted(maps.items())))

    @classmethod
    def from_covers(
        cls,
        index: JoinSemilattice,
        fibers: Sequence[FiniteAlgebra],
        cover_maps: Mapping[Pair, Sequence[int]],
        name: str = "",
    ) -> "DirectSystem":
        """Build every p_ij by composing the given cover maps along a shortest cover path."""
        graph = nx.DiGraph()
        graph.add_nodes_from(range(index.size))
        graph.add_edges_from(hasse_covers(index))
        transitions = {}
        for i, j in zip(*np.nonzero(index.order)):
            i, j = int(i), int(j)
            path = nx.shortest_path(graph, i, j)
            current = list(range(fibers[i].size))
            for u, v in zip(path, path[1:]):
                if (u, v) not in cover_maps:
                    raise ShapeMismatch(f"cover map ({u},{v}) is missing")
                step = cover_maps[(u, v)]
                current = [step[x] for x in current]
            transitions[(i, j)] = tuple(current)
        return cls(index, tuple(fibers), transitions, name)

    @property
    def signature(self):
        return self.fibers[0].signature

    @property
    def size(self) -> int:
        return sum(f.size for f in self.fibers)

    def __len__(self):
        return self.size

    def __repr__(self):
        sizes = ",".join(str(f.size) for f in self.fibers)
        return f"DirectSystem({self.name or '?'}, index {self.index.size}, fibers [{sizes}])"

    @cached_property
    def maps(self) -> dict[Pair, np.ndarray]:
        out = {}
        for key, values in self.transitions.items():
            arr = np.asarray(values, dtype=np.int64)
            arr.flags.writeable = False
            out[key] = arr
        return out

    def _check_pair(self, i: int, j: int):
        n = self.index.size
        if not (0 <= i < n and 0 <= j < n):
            raise IndexOutOfRange(f"index pair ({i},{j}) outside 0..{n - 1}")
        if (i, j) not in self.transitions:
            raise IndexOutOfRange(f"no transition p_{i}{j}: {i} is not below {j}")

    def p(self, i: int, j: int, a: int) -> int:
        self._check_pair(i, j)
        return self.transitions[(i, j)][a]

    def transition(self, i: int, j: int) -> Homomorphism:
        self._check_pair(i, j)
        return Homomorphism(self.fibers[i], self.fibers[j], self.transitions[(i, j)])


def system_diagnostics(d: DirectSystem) -> list[Diagnostic]:
    out = [Diagnostic(f"index.{x.law}", x.message, x.witness) for x in semilattice_diagnostics(d.index)]
    if out:
        return out
    n = d.index.size
    for i in range(n):
        if d.transitions[(i, i)] != tuple(range(d.fibers[i].size)):
            bad = next(a for a, b in enumerate(d.transitions[(i, i)]) if a != b)
            out.append(Diagnostic("identity", f"p_{i}{i} moves {bad}", (i, i, bad)))
    for (i, j) in d.transitions:
        for x in homomorphism_diagnostics(d.transition(i, j)):
            out.append(Diagnostic("preservation", f"p_{i}{j}: {x.message}", (i, j, *x.witness)))
    order = d.index.order
    for i, j, k in itertools.product(range(n), repeat=3):
        if order[i, j] and order[j, k]:
            direct = d.maps[(i, k)]
            through = d.maps[(j, k)][d.maps[(i, j)]]
            bad = np.nonzero(direct != through)[0]
            if bad.size:
                out.append(
                    Diagnostic("composition", f"p_{i}{k} != p_{j}{k} o p_{i}{j} at element {bad[0]}", (i, j, k))
                )
    if d.signature.constants and d.index.least is None:
        out.append(Diagnostic("least", "the signature has constants but the index has no least element"))
    for x in out:
        logger.warning(str(x))
    return out


def validate_system(d: DirectSystem) -> list[Diagnostic]:
    return system_diagnostics(d)


def require_valid(d: DirectSystem) -> DirectSystem:
    raise_on_errors(system_diagnostics(d), InvalidSystem, f"system {d.name or ''}".strip())
    return d


@dataclass(frozen=True)
class SystemMorphism:
    source: DirectSystem
    target: DirectSystem
    phi: tuple[int, ...]
    components: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "phi", tuple(int(x) for x in self.phi))
        object.__setattr__(self, "components", tuple(tuple(int(x) for x in c) for c in self.components))
        if len(self.phi) != self.source.index.size or len(self.components) != self.source.index.size:
            raise ShapeMismatch("morphism: need one index image and one component per source index")

    def component(self, i: int) -> Homomorphism:
        return Homomorphism(self.source.fibers[i], self.target.fibers[self.phi[i]], self.components[i])


def validate_morphism(m: SystemMorphism) -> list[Diagnostic]:
    out = []
    src, tgt = m.source, m.target
    if src.signature != tgt.signature:
        return [Diagnostic("signature", f"{src.signature} differs from {tgt.signature}")]
    n = src.index.size
    if any(not 0 <= x < tgt.index.size for x in m.phi):
        return [Diagnostic("phi", f"index images must lie in 0..{tgt.index.size - 1}")]
    for i, j in itertools.product(range(n), repeat=2):
        if m.phi[src.index.j(i, j)] != tgt.index.j(m.phi[i], m.phi[j]):
            out.append(Diagnostic("phi", f"phi({i} v {j}) != phi({i}) v phi({j})", (i, j)))
            break
    if src.index.least is not None and tgt.index.least is not None and m.phi[src.index.least] != tgt.index.least:
        out.append(Diagnostic("least", f"phi sends the least index {src.index.least} to {m.phi[src.index.least]}"))
    for i in range(n):
        if len(m.components[i]) != src.fibers[i].size:
            out.append(Diagnostic("component", f"f_{i} has the wrong length", (i,)))
            continue
        for x in homomorphism_diagnostics(m.component(i)):
            out.append(Diagnostic("component", f"f_{i}: {x.message}", (i, *x.witness)))
    if out:
        return out
    for (i, j), p in src.transitions.items():
        q = tgt.transitions.get((m.phi[i], m.phi[j]))
        if q is None:
            out.append(Diagnostic("square", f"no target transition for ({m.phi[i]},{m.phi[j]})", (i, j)))
            continue
        for a in range(src.fibers[i].size):
            if q[m.components[i][a]] != m.components[j][p[a]]:
                out.append(Diagnostic("square", f"q o f_{i} != f_{j} o p_{i}{j} at {a}", (i, j, a)))
                break
    for x in out:
        logger.warning(str(x))
    return out


def identity_morphism(d: DirectSystem) -> SystemMorphism:
    return SystemMorphism(d, d, tuple(range(d.index.size)), tuple(tuple(range(f.size)) for f in d.fibers))


def trivial_system(signature) -> DirectSystem:
    return DirectSystem(chain(1), (trivial_algebra(signature),), {}, "terminal")


def terminal_morphism(d: DirectSystem) -> SystemMorphism:
    """The collapse of d onto the one-element system."""
    target = trivial_system(d.signature)
    return SystemMorphism(d, target, (0,) * d.index.size, tuple((0,) * f.size for f in d.fibers))


def compose_morphisms(first: SystemMorphism, second: SystemMorphism) -> SystemMorphism:
    """second after first"""
    if first.target is not second.source:
        raise ShapeMismatch("morphisms do not compose: target and source differ")
    phi = tuple(second.phi[x] for x in first.phi)
    components = tuple(
        tuple(second.components[first.phi[i]][x] for x in first.components[i]) for i in range(len(first.phi))
    )
    return SystemMorphism(first.source, second.target, phi, components)


def star(b: FiniteAlgebra) -> DirectSystem:
    """b at the bottom of a 2-chain with a one-element fiber {∞} on top."""
    top = trivial_algebra(b.signature, "∞", "∞")
    return DirectSystem(chain(2), (b, top), {(0, 1): (0,) * b.size}, f"{b.name or 'B'}*")
