#!/usr/bin/env python3
# coding: utf-8

import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from algebra.core import congruence_closure
from algebra.relations import Partition
from algebra.semilattice import as_algebra
from config import PLONKA_SEED
from plonka.congruence import (
    AlgebraCongruence,
    SystemCongruence,
    all_congruences,
    all_system_congruences,
    audit_congruence,
    audit_pair,
    cg,
    cg_plonka,
    check_factor_theorem,
    check_si_theorem,
    fibers_of,
    from_system_congruence,
    generated_system_congruence,
    has_absorbing_element,
    is_factor_pair,
    is_subdirectly_irreducible,
    lattice_covers,
    lifted_index_congruence,
    monolith,
    permutable,
    quotient_plonka,
    relation_product,
    s_theta,
    si_convention_report,
    to_system_congruence,
)
from plonka.sums import compose
from plonka.varieties import catalog_algebras, catalog_entry, catalog_systems, cyclic_group
from utils.error_handling import InvalidSystemCongruence, PrematureRelation, SizeCapExceeded, TrivialAlgebra, ValidationError

SMALL = [d for d in catalog_systems() if d.size <= 10]
ALL_CONGRUENCE_CAP = 16


def _ids(systems):
    return [d.name for d in systems]


def test_con_z4_is_a_chain():
    con = all_congruences(cyclic_group(4))
    assert [c.partition.num_blocks for c in con] == [4, 2, 1]
    assert lattice_covers([c.partition for c in con]) == [(0, 1), (1, 2)]


def test_all_congruences_respects_the_cap():
    with pytest.raises(SizeCapExceeded):
        all_congruences(cyclic_group(4), cap=3)


def test_incompatible_partition_is_rejected():
    with pytest.raises(ValidationError):
        AlgebraCongruence(cyclic_group(4), Partition.from_blocks(4, [[0, 1], [2], [3]]))


@pytest.mark.parametrize("d", SMALL, ids=_ids(SMALL))
def test_congruence_lattices_correspond(d):
    ps = compose(d)
    con = all_congruences(ps.algebra)
    system_cons = all_system_congruences(d)
    assert len(con) == len(system_cons)
    images = [to_system_congruence(ps, th) for th in con]
    assert set(images) == set(system_cons)
    for th, sc in zip(con, images):
        assert from_system_congruence(sc, ps).partition == th.partition
    for sc in system_cons:
        assert to_system_congruence(ps, from_system_congruence(sc, ps)) == sc
    for (a, sa), (b, sb) in itertools.combinations(zip(con, images), 2):
        assert a.leq(b) == sa.leq(sb)
        assert b.leq(a) == sb.leq(sa)


def test_invalid_system_congruence_is_rejected():
    d = catalog_entry("chain-Z2-Z2")
    sc = SystemCongruence(d, Partition.discrete(2), (Partition.indiscrete(2), Partition.discrete(2)))
    assert "pullback" in {x.law for x in sc.diagnostics()}
    with pytest.raises(InvalidSystemCongruence):
        from_system_congruence(sc)


def test_generated_congruence_needs_related_indices():
    ps = compose(catalog_entry("chain-Z2-Z2"))
    with pytest.raises(PrematureRelation):
        generated_system_congruence(ps, [(0, 2)], Partition.discrete(2))


def test_generated_congruence_matches_direct_closure_on_random_relations():
    rng = random.Random(PLONKA_SEED)
    sums = [compose(d) for d in SMALL]
    for trial in range(200):
        ps = sums[trial % len(sums)]
        n = ps.algebra.size
        pairs = [(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(1, 3))]
        assert cg_plonka(ps, pairs).partition == cg(ps.algebra, pairs).partition, (ps.origin.name, pairs)


@settings(derandomize=True, max_examples=50)
@given(st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7)), min_size=1, max_size=3))
def test_generated_congruence_on_diamond_b2(pairs):
    ps = compose(catalog_entry("diamond-B2"))
    assert cg_plonka(ps, pairs).partition == congruence_closure(ps.algebra, pairs)


def _congruences(d):
    return all_congruences(compose(d).algebra, cap=ALL_CONGRUENCE_CAP)


SYSTEMS = catalog_systems()


@pytest.mark.parametrize("d", SYSTEMS, ids=_ids(SYSTEMS))
def test_audit_every_congruence(d):
    ps = compose(d)
    for th in _congruences(d):
        assert audit_congruence(ps, th) == [], (d.name, th.blocks)


@pytest.mark.parametrize("d", SMALL, ids=_ids(SMALL))
def test_audit_every_pair(d):
    ps = compose(d)
    con = _congruences(d)
    for th1, th2 in itertools.product(con, repeat=2):
        assert audit_pair(ps, th1, th2) == [], (d.name, th1.blocks, th2.blocks)


@pytest.mark.parametrize("d", SMALL, ids=_ids(SMALL))
def test_factor_theorem(d):
    ps = compose(d)
    con = _congruences(d)
    for th1, th2 in itertools.product(con, repeat=2):
        assert check_factor_theorem(ps, th1, th2), (d.name, th1.blocks, th2.blocks)


def test_total_and_identity_are_a_factor_pair():
    ps = compose(catalog_entry("chain-B4-B2"))
    top, bottom = AlgebraCongruence.total(ps.algebra), AlgebraCongruence.identity(ps.algebra)
    assert is_factor_pair(ps.algebra, top, bottom)
    assert check_factor_theorem(ps, top, bottom)


def _diamond_ibsl_pair():
    d = catalog_entry("diamond-ibsl")
    ps = compose(d)
    f = d.fibers
    a, b = f[0], f[2]
    theta1 = SystemCongruence(
        d,
        Partition.from_blocks(4, [[0, 2], [1, 3]]),
        (
            congruence_closure(a, [(a.index_of("a'"), a.index_of("1a"))]),
            Partition.indiscrete(2),
            congruence_closure(b, [(b.index_of("b'"), b.index_of("1b"))]),
            Partition.indiscrete(4),
        ),
    )
    theta2 = SystemCongruence(
        d,
        Partition.from_blocks(4, [[0, 1], [2, 3]]),
        (
            congruence_closure(a, [(a.index_of("a"), a.index_of("1a"))]),
            Partition.discrete(2),
            congruence_closure(b, [(b.index_of("b"), b.index_of("1b"))]),
            Partition.discrete(4),
        ),
    )
    assert theta1.diagnostics() == [] and theta2.diagnostics() == []
    return ps, theta1, theta2, from_system_congruence(theta1, ps), from_system_congruence(theta2, ps)


def _class_of(th, label):
    alg = th.algebra
    return sorted(alg.labels[x] for x in th.partition.block_of(alg.index_of(label)))


def test_diamond_ibsl_pair_classes():
    ps, _, _, th1, th2 = _diamond_ibsl_pair()
    assert fibers_of(ps, th1)[1].blocks == ((0, 2), (1, 3))
    assert fibers_of(ps, th2)[1].blocks == ((0, 1), (2, 3))
    assert _class_of(th1, "0a") == sorted(["0a", "0b", "a", "b"])
    assert _class_of(th1, "1a") == sorted(["a'", "1a", "b'", "1b"])
    assert _class_of(th1, "0c") == sorted(["⊥", "⊤", "0c", "c", "c'", "1c"])
    assert _class_of(th2, "0a") == sorted(["a'", "0a", "⊥"])
    assert _class_of(th2, "1a") == sorted(["a", "1a", "⊤"])
    assert _class_of(th2, "1b") == sorted(["b", "1b", "1c"])
    assert _class_of(th2, "0b") == sorted(["0b", "0c", "b'"])
    assert _class_of(th2, "c") == ["c"]
    assert _class_of(th2, "c'") == ["c'"]


def test_diamond_ibsl_pair_is_factor_on_index_and_fibers():
    ps, sc1, sc2, _, _ = _diamond_ibsl_pair()
    index = as_algebra(ps.index)
    assert is_factor_pair(index, AlgebraCongruence(index, sc1.C), AlgebraCongruence(index, sc2.C))
    for fiber, t1, t2 in zip(ps.origin.fibers, sc1.theta, sc2.theta):
        assert is_factor_pair(fiber, AlgebraCongruence(fiber, t1), AlgebraCongruence(fiber, t2)), fiber.name


def test_diamond_ibsl_pair_does_not_permute():
    ps, _, _, th1, th2 = _diamond_ibsl_pair()
    c, b = ps.algebra.index_of("c"), ps.algebra.index_of("b")
    assert not permutable(th1, th2)
    assert relation_product(th1.matrix, th2.matrix)[c, b]
    assert not relation_product(th2.matrix, th1.matrix)[c, b]
    assert not is_factor_pair(ps.algebra, th1, th2)
    assert check_factor_theorem(ps, th1, th2)


def test_diamond_ibsl_quotient_by_first_congruence():
    ps, _, _, th1, _ = _diamond_ibsl_pair()
    q = quotient_plonka(ps, th1)
    assert q.index.size == 2
    assert sorted(fiber.size for fiber in q.fibers) == [1, 2]


def test_s_theta_is_transitive_with_constants_or_a_chain():
    for d in SYSTEMS:
        if not (d.signature.constants or d.index.is_chain()):
            continue
        ps = compose(d)
        for th in _congruences(d):
            s = s_theta(ps, th)
            assert s.is_transitive(), (d.name, th.blocks)


def test_s_theta_can_fail_transitivity():
    ps = compose(catalog_entry("nontransitive"))
    th = cg(ps.algebra, [(0, 3), (1, 2)])
    assert th.blocks == ((0, 3), (1, 2))
    s = s_theta(ps, th)
    assert (0, 2) in s and (2, 1) in s
    assert (0, 1) not in s
    assert audit_congruence(ps, th) == []


@pytest.mark.parametrize("d", SMALL[:12], ids=_ids(SMALL[:12]))
def test_quotients_recompose(d):
    ps = compose(d)
    for th in _congruences(d):
        q = quotient_plonka(ps, th)
        assert compose(q).algebra.size == th.partition.num_blocks


def test_quotient_by_total_and_identity():
    ps = compose(catalog_entry("chain-Z2-Z2"))
    assert quotient_plonka(ps, AlgebraCongruence.total(ps.algebra)).size == 1
    q = quotient_plonka(ps, AlgebraCongruence.identity(ps.algebra))
    assert q.index.size == 2 and q.size == 4


def test_monolith():
    z4 = cyclic_group(4)
    assert monolith(z4).blocks == ((0, 2), (1, 3))
    assert is_subdirectly_irreducible(z4)
    klein = next(a for a in catalog_algebras() if a.name == "Z2×Z2")
    assert not is_subdirectly_irreducible(klein)
    assert monolith(next(a for a in catalog_algebras() if a.name == "trivial-group")) is None


def test_absorbing_element():
    wk3 = next(a for a in catalog_algebras() if a.name == "WK3")
    assert has_absorbing_element(wk3) == wk3.index_of("∞")
    assert has_absorbing_element(cyclic_group(3)) is None
    with pytest.raises(TrivialAlgebra):
        has_absorbing_element(next(a for a in catalog_algebras() if a.name == "trivial-group"))


SMALL_ALGEBRAS = [a for a in catalog_algebras() if a.size <= 8]


@pytest.mark.parametrize("b", SMALL_ALGEBRAS, ids=[a.name for a in SMALL_ALGEBRAS])
def test_si_theorem(b):
    assert check_si_theorem(b)


def test_si_convention_for_trivial_algebras():
    report = si_convention_report(SMALL_ALGEBRAS)
    assert report["admit_trivial"] == []
    assert set(report["nontrivial_only"]) == {"trivial-ibsl", "trivial-group", "trivial-lattice"}


def test_lifted_index_congruence():
    ps = compose(catalog_entry("chain-Z2-Z2"))
    lifted = lifted_index_congruence(ps, Partition.indiscrete(2))
    assert lifted.blocks == ((0, 2), (1, 3))
    assert lifted_index_congruence(ps, Partition.discrete(2)).is_identity()
    sc = to_system_congruence(ps, lifted)
    assert sc.C.is_indiscrete()
    assert np.array_equal(sc.pullback(0, 1), np.eye(2, dtype=bool))
