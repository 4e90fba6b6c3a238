#!/usr/bin/env python3
# coding: utf-8

import pytest

from algebra.semilattice import chain, diamond
from formats.json_io import parse_system, system_to_dict
from plonka.system import (
    DirectSystem,
    SystemMorphism,
    compose_morphisms,
    identity_morphism,
    star,
    terminal_morphism,
    validate_morphism,
    validate_system,
)
from plonka.varieties import b2, catalog_entry, catalog_systems, cyclic_group
from utils.error_handling import IndexOutOfRange, InvalidSystem, ShapeMismatch


def _broken_chain():
    z2 = cyclic_group(2)
    transitions = {(0, 1): (0, 1), (1, 2): (0, 1), (0, 2): (0, 0)}
    return DirectSystem(chain(3), (z2, z2, z2), transitions, "broken")


def test_catalog_systems_are_valid():
    systems = catalog_systems()
    assert len(systems) >= 20
    assert len({d.name for d in systems}) == len(systems)
    for d in systems:
        assert validate_system(d) == [], d.name


def test_star_places_infinity_on_top():
    d = star(b2())
    assert d.index.size == 2
    assert d.fibers[1].labels == ("∞",)
    assert d.transitions[(0, 1)] == (0, 0)
    assert d.name == "B2*"


def test_broken_composition_names_the_triple():
    diagnostics = validate_system(_broken_chain())
    assert [d.law for d in diagnostics] == ["composition"]
    assert diagnostics[0].witness == (0, 1, 2)


def test_parse_system_raises_on_broken_composition():
    with pytest.raises(InvalidSystem) as info:
        parse_system(system_to_dict(_broken_chain()))
    assert info.value.exit_code == 2
    assert info.value.diagnostics[0].witness == (0, 1, 2)


def test_non_homomorphic_transition():
    z2 = cyclic_group(2)
    d = DirectSystem(chain(2), (z2, z2), {(0, 1): (1, 0)})
    assert {x.law for x in validate_system(d)} == {"preservation"}


def test_structural_errors_are_raised_at_construction():
    z2 = cyclic_group(2)
    with pytest.raises(ShapeMismatch):
        DirectSystem(chain(2), (z2, z2), {})
    with pytest.raises(ShapeMismatch):
        DirectSystem(chain(2), (z2,), {})
    with pytest.raises(ShapeMismatch):
        DirectSystem(chain(2), (z2, z2), {(1, 0): (0, 1)})


def test_from_covers_composes_along_paths():
    d = catalog_entry("diamond-B2-B1")
    assert d.transitions[(0, 3)] == (0, 0)
    assert d.p(1, 3, 1) == 0
    with pytest.raises(IndexOutOfRange):
        d.p(1, 2, 0)
    z2 = cyclic_group(2)
    full = DirectSystem.from_covers(diamond(), (z2,) * 4, {c: (0, 1) for c in [(0, 1), (0, 2), (1, 3), (2, 3)]})
    assert full.transitions[(0, 3)] == (0, 1)


def test_morphisms():
    d = catalog_entry("chain-Z2-Z2")
    assert validate_morphism(identity_morphism(d)) == []
    assert validate_morphism(terminal_morphism(d)) == []
    both = compose_morphisms(identity_morphism(d), terminal_morphism(d))
    assert validate_morphism(both) == []
    assert both.phi == (0, 0)


def test_morphism_must_keep_the_least_index():
    d = catalog_entry("chain-Z2-Z2")
    m = SystemMorphism(d, d, (1, 1), ((0, 1), (0, 1)))
    assert [x.law for x in validate_morphism(m)] == ["least"]
