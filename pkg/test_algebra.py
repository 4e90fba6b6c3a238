#!/usr/bin/env python3
# coding: utf-8

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from algebra.core import (
    FiniteAlgebra,
    Homomorphism,
    Signature,
    check_homomorphism,
    congruence_closure,
    direct_product,
    extend_from_generators,
    generated_subalgebra,
    is_compatible,
    quotient_algebra,
    trivial_algebra,
)
from algebra.relations import Partition, Relation
from algebra.terms import (
    App,
    Var,
    eval_term,
    identity_counterexample,
    is_regular,
    parse_identity,
    parse_term,
    render_term,
    satisfies_identity,
)
from plonka.varieties import CLIFFORD, b4, cyclic_group
from utils.error_handling import ParseError, ShapeMismatch, UnboundVariable, UnknownOperation, ValidationError


def test_cyclic_group_tables():
    z4 = cyclic_group(4)
    assert z4.size == 4
    assert z4.apply("mul", 3, 2) == 1
    assert z4.apply("inv", 1) == 3
    assert z4.table_nd("mul").shape == (4, 4)


def test_signature_rejects_duplicates_and_bad_arity():
    with pytest.raises(ValidationError):
        Signature.of(("mul", 2), ("mul", 1))
    with pytest.raises(ValidationError):
        Signature.of(("big", 9))


def test_algebra_rejects_out_of_range_values():
    with pytest.raises(ValidationError, match="tables.mul"):
        FiniteAlgebra(Signature.of(("mul", 2)), ("a", "b"), {"mul": [0, 1, 1, 2]})


def test_congruence_closure_of_z4():
    z4 = cyclic_group(4)
    p = congruence_closure(z4, [(0, 2)])
    assert p.blocks == ((0, 2), (1, 3))
    q = quotient_algebra(z4, p)
    assert q.labels == ("[0]", "[1]")
    assert q.apply("mul", 1, 1) == 0


def test_quotient_rejects_non_congruence():
    with pytest.raises(ValidationError):
        quotient_algebra(cyclic_group(4), Partition.from_blocks(4, [[0, 1], [2], [3]]))


def test_direct_product_and_generated_subalgebra():
    z2 = cyclic_group(2)
    klein = direct_product([z2, z2])
    assert klein.size == 4
    assert klein.labels[1] == "(0,1)"
    assert generated_subalgebra(cyclic_group(4), [2]) == frozenset({0, 2})
    # constants are always included
    assert generated_subalgebra(b4(), []) == frozenset({0, 3})


def test_extend_from_generators():
    z4, z2 = cyclic_group(4), cyclic_group(2)
    h = extend_from_generators(z4, [1], z2, [1])
    assert h is not None and h.mapping == (0, 1, 0, 1)
    assert extend_from_generators(z2, [1], z4, [1]) is None


def test_relabel_is_an_isomorphism():
    z4 = cyclic_group(4)
    perm = (2, 0, 3, 1)
    assert check_homomorphism(Homomorphism(z4, z4.relabel(perm), perm))


def test_homomorphism_failure_is_reported():
    z2 = cyclic_group(2)
    assert not check_homomorphism(Homomorphism(z2, z2, (1, 0)))
    assert check_homomorphism(Homomorphism(z2, trivial_algebra(CLIFFORD), (0, 0)))


def test_partition_operations():
    p = Partition.from_blocks(4, [[0, 1], [2, 3]])
    q = Partition.from_blocks(4, [[0], [1, 2], [3]])
    assert p.join(q).is_indiscrete()
    assert p.meet(q).is_discrete()
    assert not q.leq(p)
    assert Partition.discrete(4).leq(p)
    with pytest.raises(ShapeMismatch):
        Partition.from_blocks(3, [[0, 1], [1, 2]])


def test_relation_compose():
    r = Relation(3, frozenset({(0, 1)}))
    s = Relation(3, frozenset({(1, 2)}))
    assert set(r.compose(s)) == {(0, 2)}
    assert not (r | s).is_transitive()
    assert Relation.of_partition(Partition.from_blocks(3, [[0, 1], [2]])).is_equivalence()


def test_parse_prefix_and_infix_terms():
    t = parse_term("(join x (meet x y))")
    assert t == App("join", (Var("x"), App("meet", (Var("x"), Var("y")))))
    assert parse_term(render_term(t)) == t
    assert parse_term("x.y") == App("mul", (Var("x"), Var("y")))
    assert parse_term("x·y⁻¹") == App("mul", (Var("x"), App("inv", (Var("y"),))))
    assert parse_term("x ∨ y ∧ z") == App("join", (Var("x"), App("meet", (Var("y"), Var("z")))))


@pytest.mark.parametrize("text", ["", "(x", "x ∨", "x ) y"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_term(text)


def test_identities():
    assert not is_regular(parse_identity("x.y ≈ x"))
    assert is_regular(parse_identity("x·y = y·x"))
    with pytest.raises(ParseError):
        parse_identity("x ≈ y ≈ z")
    z2 = cyclic_group(2)
    assert satisfies_identity(z2, parse_identity("x·(y·y⁻¹) ≈ x"))
    assert identity_counterexample(z2, parse_identity("x·y ≈ x")) == {"x": 0, "y": 1}


def test_term_errors():
    z2 = cyclic_group(2)
    with pytest.raises(UnboundVariable):
        eval_term(z2, parse_term("x·y"), {"x": 0})
    with pytest.raises(UnknownOperation):
        satisfies_identity(z2, parse_identity("x ∨ y ≈ x"))


pairs = st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)), max_size=4)


@settings(derandomize=True, max_examples=60)
@given(pairs)
def test_congruence_closure_is_a_closure(seed):
    z6 = cyclic_group(6)
    p = congruence_closure(z6, seed)
    assert all(p.same(a, b) for a, b in seed)
    assert is_compatible(z6, p)
    assert congruence_closure(z6, sorted(p.pairs())) == p


@settings(derandomize=True, max_examples=40)
@given(st.permutations(range(4)))
def test_relabel_preserves_identities(perm):
    alg = b4()
    copy = alg.relabel(perm)
    ident = parse_identity("x ∧ (¬x ∨ y) ≈ x ∧ y")
    assert satisfies_identity(copy, ident)
    assert np.array_equal(copy.tables["neg"][list(perm)], np.asarray(perm)[alg.tables["neg"]])
