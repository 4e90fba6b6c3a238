#!/usr/bin/env python3
# coding: utf-8

import numpy as np
import pytest

from algebra.relations import Partition, Relation
from algebra.semilattice import (
    JoinSemilattice,
    all_semilattice_congruences,
    cg_semilattice,
    chain,
    closure_refl_symm_join_ut,
    diamond,
    from_order,
    hasse_covers,
    is_join_closed,
    is_upper_transitive,
    leq,
    powerset,
    restricted_growth_strings,
    semilattice_diagnostics,
    validate_semilattice,
)
from utils.error_handling import SizeCapExceeded, ValidationError


def test_chain_and_diamond():
    c = chain(3)
    assert c.least == 0 and c.is_chain()
    d = diamond()
    assert d.least == 0 and not d.is_chain()
    assert leq(d, 1, 3) and not leq(d, 1, 2)
    assert d.j(1, 2) == 3
    assert hasse_covers(d) == [(0, 1), (0, 2), (1, 3), (2, 3)]


def test_from_order_without_least():
    v = from_order(3, [(0, 2), (1, 2)], ("i", "j", "k"))
    assert v.least is None
    assert v.j(0, 1) == 2
    with pytest.raises(ValidationError):
        from_order(2, [])


def test_powerset_labels():
    s = powerset(2)
    assert s.labels == ("{}", "{1}", "{2}", "{1,2}")
    assert s.j(1, 2) == 3


def test_diagnostics_name_the_broken_law():
    laws = {d.law for d in semilattice_diagnostics(JoinSemilattice(np.array([[0, 1], [0, 1]])))}
    assert "commutativity" in laws
    declared = JoinSemilattice(chain(2).join, (), 1)
    assert [d.law for d in semilattice_diagnostics(declared)] == ["least"]
    assert semilattice_diagnostics(diamond()) == []
    assert validate_semilattice(powerset(3))
    assert not validate_semilattice(declared)


def test_restricted_growth_strings_count_partitions():
    assert [len(list(restricted_growth_strings(n))) for n in range(6)] == [1, 1, 2, 5, 15, 52]


def test_semilattice_congruences():
    assert len(all_semilattice_congruences(chain(2))) == 2
    assert len(all_semilattice_congruences(chain(3))) == 4
    with pytest.raises(SizeCapExceeded):
        all_semilattice_congruences(chain(4), cap=3)


def test_cg_semilattice_propagates_joins():
    d = diamond()
    # i ~ j forces i ~ i v j = 1
    assert cg_semilattice(d, [(1, 2)]) == Partition.from_blocks(4, [[0], [1, 2, 3]])
    assert cg_semilattice(d, [(0, 3)]).is_indiscrete()


def test_upper_transitivity_and_closure():
    d = diamond()
    s = Relation(4, frozenset({(0, 1), (1, 0), (1, 2), (2, 1)} | {(i, i) for i in range(4)}))
    assert not is_upper_transitive(d, s)
    closed = closure_refl_symm_join_ut(d, [(0, 1), (1, 2)])
    assert is_upper_transitive(d, closed)
    assert is_join_closed(d, closed)
    assert closed.is_symmetric() and closed.is_reflexive()
    assert s <= closed
