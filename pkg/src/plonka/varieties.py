#!/usr/bin/env python3
# coding: utf-8

# plonkalab - varieties.py
# Axiom suites for regularized varieties and a catalog of small algebras and systems

import logging
from dataclasses import dataclass, field
from functools import cache
from typing import Sequence

import numpy as np

from algebra.core import FiniteAlgebra, Signature, direct_product, trivial_algebra
from algebra.semilattice import chain, diamond, from_order
from algebra.terms import Identity, check_well_formed, identity_counterexample, is_regular, parse_identity
from plonka.sums import compose
from plonka.system import DirectSystem, star
from utils.error_handling import SignatureMismatch, ValidationError

logger = logging.getLogger(__name__)

IBSL = Signature.of(("join", 2), ("meet", 2), ("neg", 1), ("zero", 0), ("one", 0))
CLIFFORD = Signature.of(("mul", 2), ("inv", 1))
DWB = Signature.of(("mul", 2), ("circ", 2), ("inv", 1), ("prime", 1))
LATTICE = Signature.of(("join", 2), ("meet", 2))


@dataclass(frozen=True)
class AxiomSuite:
    name: str
    signature: Signature
    identities: tuple[Identity, ...]
    irregular_witness: Identity | None = None

    def __post_init__(self):
        for ident in self.identities + ((self.irregular_witness,) if self.irregular_witness else ()):
            check_well_formed(ident.lhs, self.signature)
            check_well_formed(ident.rhs, self.signature)
        if self.irregular_witness is not None and is_regular(self.irregular_witness):
            raise ValidationError(f"{self.name}: witness {self.irregular_witness} is regular")


def _suite(name: str, signature: Signature, lines: Sequence[tuple[str, str]], witness: str) -> AxiomSuite:
    identities = tuple(parse_identity(text, label) for label, text in lines)
    return AxiomSuite(name, signature, identities, parse_identity(witness, "witness"))


@cache
def builtin_suites() -> tuple[AxiomSuite, ...]:
    ibsl = _suite(
        "ibsl",
        IBSL,
        [
            ("join-idempotent", "x ∨ x ≈ x"),
            ("join-commutative", "x ∨ y ≈ y ∨ x"),
            ("join-associative", "x ∨ (y ∨ z) ≈ (x ∨ y) ∨ z"),
            ("double-negation", "¬¬x ≈ x"),
            ("de-morgan", "x ∧ y ≈ ¬(¬x ∨ ¬y)"),
            ("meet-negation", "x ∧ (¬x ∨ y) ≈ x ∧ y"),
            ("zero", "(zero) ∨ x ≈ x"),
            ("one", "(one) ≈ ¬(zero)"),
        ],
        "x ∨ (x ∧ y) ≈ x",
    )
    clifford = _suite(
        "clifford",
        CLIFFORD,
        [
            ("mul-associative", "x·(y·z) ≈ (x·y)·z"),
            ("inverse-involution", "(x⁻¹)⁻¹ ≈ x"),
            ("regular", "x·(x⁻¹·x) ≈ x"),
            ("idempotents-commute", "(x·x⁻¹)·(y·y⁻¹) ≈ (y·y⁻¹)·(x·x⁻¹)"),
            ("central-idempotent", "x·x⁻¹ ≈ x⁻¹·x"),
        ],
        "x·(y·y⁻¹) ≈ x",
    )
    dwb = _suite(
        "dwb",
        DWB,
        [
            ("mul-associative", "x·(y·z) ≈ (x·y)·z"),
            ("inverse-involution", "(x⁻¹)⁻¹ ≈ x"),
            ("regular", "x·(x⁻¹·x) ≈ x"),
            ("idempotents-commute", "(x·x⁻¹)·(y·y⁻¹) ≈ (y·y⁻¹)·(x·x⁻¹)"),
            ("central-idempotent", "x·x⁻¹ ≈ x⁻¹·x"),
            ("circ-associative", "x∘(y∘z) ≈ (x∘y)∘z"),
            ("prime-involution", "(prime (prime x)) ≈ x"),
            ("circ-regular", "x∘((prime x)∘x) ≈ x"),
            ("circ-idempotents-commute", "(x∘(prime x))∘(y∘(prime y)) ≈ (y∘(prime y))∘(x∘(prime x))"),
            ("brace", "x∘(y·z) ≈ (x∘y)·x⁻¹·(x∘z)"),
            ("shared-idempotents", "x·x⁻¹ ≈ x∘(prime x)"),
        ],
        "x·(y·y⁻¹) ≈ x",
    )
    return ibsl, clifford, dwb


def suite_for(signature: Signature) -> AxiomSuite | None:
    return next((s for s in builtin_suites() if s.signature == signature), None)


def suite_by_name(name: str) -> AxiomSuite:
    for suite in builtin_suites():
        if suite.name == name.lower():
            return suite
    raise ValidationError(f"unknown suite {name!r}; choose from {[s.name for s in builtin_suites()]}")


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    algebra: str
    results: tuple[tuple[str, str, dict | None], ...]
    witness: tuple[str, str, dict | None] | None = field(default=None)

    @property
    def passes_suite(self) -> bool:
        return all(cex is None for _, _, cex in self.results)

    @property
    def passes_witness(self) -> bool | None:
        return None if self.witness is None else self.witness[2] is None

    def as_dict(self) -> dict:
        def row(label, text, cex):
            return {"label": label, "identity": text, "holds": cex is None, "counterexample": cex}

        out = {"suite": self.suite, "algebra": self.algebra, "identities": [row(*r) for r in self.results]}
        if self.witness is not None:
            out["witness"] = row(*self.witness)
        return out


def check_suite(alg: FiniteAlgebra, suite: AxiomSuite, include_witness: bool = False) -> SuiteReport:
    if alg.signature != suite.signature:
        raise SignatureMismatch(f"{alg.name or 'algebra'} has signature {alg.signature}, suite {suite.name} needs {suite.signature}")
    results = tuple((ident.label, str(ident), identity_counterexample(alg, ident)) for ident in suite.identities)
    witness = None
    if include_witness and suite.irregular_witness is not None:
        w = suite.irregular_witness
        witness = (w.label, str(w), identity_counterexample(alg, w))
    for label, text, cex in results:
        if cex is not None:
            logger.info(f"{alg.name or 'algebra'} fails {suite.name} {label} {text} at {cex}")
    return SuiteReport(suite.name, alg.name, results, witness)


# algebras


def cyclic_group(n: int) -> FiniteAlgebra:
    return FiniteAlgebra.from_operations(
        CLIFFORD, tuple(str(i) for i in range(n)), {"mul": lambda a, b: (a + b) % n, "inv": lambda a: (-a) % n}, f"Z{n}"
    )


def boolean_algebra(atoms: int, labels: Sequence[str] = ()) -> FiniteAlgebra:
    """The Boolean algebra of subsets of an atoms-element set, as bitmasks."""
    size = 1 << atoms
    idx = np.arange(size, dtype=np.int64)
    labels = tuple(labels) or tuple(format(t, f"0{atoms}b") for t in range(size))
    tables = {
        "join": np.bitwise_or.outer(idx, idx),
        "meet": np.bitwise_and.outer(idx, idx),
        "neg": (size - 1) ^ idx,
        "zero": [0],
        "one": [size - 1],
    }
    return FiniteAlgebra(IBSL, labels, tables, f"B{size}")


def two_element_lattice(labels: Sequence[str] = ("0", "1")) -> FiniteAlgebra:
    return FiniteAlgebra.from_operations(LATTICE, tuple(labels), {"join": max, "meet": min}, "L2")


def trivial_brace(group: FiniteAlgebra) -> FiniteAlgebra:
    """A group seen as a skew brace with ∘ = ·."""
    tables = {"mul": group.tables["mul"], "circ": group.tables["mul"], "inv": group.tables["inv"], "prime": group.tables["inv"]}
    return FiniteAlgebra(DWB, group.labels, tables, f"brace({group.name})")


def b2() -> FiniteAlgebra:
    return boolean_algebra(1, ("0", "1"))


def b4(suffix: str = "") -> FiniteAlgebra:
    return boolean_algebra(2, tuple(x + suffix for x in ("0", "a", "a'", "1")))


def diamond_ibsl() -> DirectSystem:
    """B4, B2, B4, B4 over the diamond 0 < i, j < 1; p_0j is the identity and B_i sees only the atom a."""
    fibers = (
        boolean_algebra(2, ("0a", "a", "a'", "1a")),
        boolean_algebra(1, ("⊥", "⊤")),
        boolean_algebra(2, ("0b", "b", "b'", "1b")),
        boolean_algebra(2, ("0c", "c", "c'", "1c")),
    )
    to_bit = (0, 1, 0, 1)  # 0, a, a', 1 -> ⊥, ⊤, ⊥, ⊤
    transitions = {
        (0, 1): to_bit,
        (0, 2): (0, 1, 2, 3),
        (1, 3): (0, 3),
        (2, 3): (0, 3, 0, 3),
        (0, 3): (0, 3, 0, 3),
    }
    return DirectSystem(diamond(), fibers, transitions, "diamond-ibsl")


def nontransitive_lattices() -> DirectSystem:
    """Trivial lattices 0 at i and 1 at j below a two-element lattice 2 < 3 at k, with p_ik(0) = 3 and p_jk(1) = 2."""
    index = from_order(3, [(0, 2), (1, 2)], ("i", "j", "k"))
    fibers = (
        FiniteAlgebra.from_operations(LATTICE, ("0",), {"join": max, "meet": min}, "L1"),
        FiniteAlgebra.from_operations(LATTICE, ("1",), {"join": max, "meet": min}, "L1"),
        two_element_lattice(("2", "3")),
    )
    return DirectSystem(index, fibers, {(0, 2): (1,), (1, 2): (0,)}, "nontransitive")


@cache
def catalog_algebras() -> tuple[FiniteAlgebra, ...]:
    z2 = cyclic_group(2)
    klein = direct_product([z2, z2], "Z2×Z2")
    wk3 = compose(star(b2())).algebra
    return (
        trivial_algebra(IBSL, "e", "trivial-ibsl"),
        trivial_algebra(CLIFFORD, "e", "trivial-group"),
        trivial_algebra(LATTICE, "e", "trivial-lattice"),
        z2,
        cyclic_group(3),
        cyclic_group(4),
        klein,
        b2(),
        b4(),
        FiniteAlgebra(IBSL, wk3.labels, wk3.tables, "WK3"),
        compose(diamond_ibsl()).algebra,
        compose(nontransitive_lattices()).algebra,
        two_element_lattice(),
        trivial_brace(z2),
        trivial_brace(cyclic_group(3)),
    )


def _constant_map(n: int, value: int = 0) -> tuple[int, ...]:
    return (value,) * n


def _identity_map(n: int) -> tuple[int, ...]:
    return tuple(range(n))


def _chain_system(name: str, fibers: Sequence[FiniteAlgebra], covers: Sequence[Sequence[int]]) -> DirectSystem:
    cover_maps = {(r, r + 1): tuple(m) for r, m in enumerate(covers)}
    return DirectSystem.from_covers(chain(len(fibers)), tuple(fibers), cover_maps, name)


def _point(name: str, fiber: FiniteAlgebra) -> DirectSystem:
    return DirectSystem(chain(1), (fiber,), {}, name)


@cache
def catalog_systems() -> tuple[DirectSystem, ...]:
    z2, z3, z4 = cyclic_group(2), cyclic_group(3), cyclic_group(4)
    klein = direct_product([z2, z2], "Z2×Z2")
    one = trivial_algebra(CLIFFORD, "e", "Z1")
    bool1 = trivial_algebra(IBSL, "e", "B1")
    l1 = trivial_algebra(LATTICE, "e", "L1")
    systems = [
        _point("point-Z2", z2),
        _point("point-B2", b2()),
        _point("point-B4", b4()),
        star(z2),
        star(z3),
        star(b2()),
        star(b4()),
        star(klein),
        star(trivial_brace(z2)),
        _chain_system("chain-Z2-Z2", [z2, z2], [_identity_map(2)]),
        _chain_system("chain-Z4-Z2", [z4, z2], [(0, 1, 0, 1)]),
        _chain_system("chain-Z2-Z4", [z2, z4], [(0, 2)]),
        _chain_system("chain-Z3-Z1", [z3, one], [_constant_map(3)]),
        _chain_system("chain-Klein-Z2", [klein, z2], [(0, 0, 1, 1)]),
        _chain_system("chain-B4-B2", [b4(), b2()], [(0, 1, 0, 1)]),
        _chain_system("chain-B2-B4", [b2(), b4()], [(0, 3)]),
        _chain_system("chain-B2-B2-B2", [b2(), b2(), b2()], [_identity_map(2), _identity_map(2)]),
        _chain_system("chain-Z2-Z2-Z1", [z2, z2, one], [_identity_map(2), _constant_map(2)]),
        _chain_system("chain-L2-L1-L2", [two_element_lattice(), l1, two_element_lattice()], [_constant_map(2), _constant_map(1)]),
        _chain_system("chain-brace-Z3-Z1", [trivial_brace(z3), trivial_algebra(DWB, "e", "brace(Z1)")], [_constant_map(3)]),
        DirectSystem.from_covers(
            diamond(), (one, one, one, one), {(0, 1): (0,), (0, 2): (0,), (1, 3): (0,), (2, 3): (0,)}, "diamond-Z1"
        ),
        DirectSystem.from_covers(
            diamond(), (b2(), b2(), b2(), b2()), {c: _identity_map(2) for c in [(0, 1), (0, 2), (1, 3), (2, 3)]}, "diamond-B2"
        ),
        DirectSystem.from_covers(
            diamond(), (z2, one, one, one), {(0, 1): (0, 0), (0, 2): (0, 0), (1, 3): (0,), (2, 3): (0,)}, "diamond-Z2-Z1"
        ),
        DirectSystem.from_covers(
            diamond(),
            (b2(), b2(), b2(), bool1),
            {(0, 1): (0, 1), (0, 2): (0, 1), (1, 3): (0, 0), (2, 3): (0, 0)},
            "diamond-B2-B1",
        ),
        DirectSystem(from_order(3, [(0, 2), (1, 2)], ("i", "j", "k")), (z2, z2, z2), {(0, 2): (0, 1), (1, 2): (0, 1)}, "vee-Z2"),
        nontransitive_lattices(),
        diamond_ibsl(),
    ]
    logger.debug(f"catalog holds {len(systems)} systems")
    return tuple(systems)


def catalog_entry(name: str) -> DirectSystem:
    for d in catalog_systems():
        if d.name == name:
            return d
    raise ValidationError(f"no catalog system named {name!r}")
