#!/usr/bin/env python3
# coding: utf-8

import pytest

from algebra.semilattice import chain, powerset
from plonka.free import (
    boolean_free_provider,
    check_free_with_zero,
    check_freeness_conditions,
    finite_subsets_semilattice,
    free_count,
    free_plonka,
    free_sum,
    merged_generators_system,
    small_semilattices,
    subset_generators,
    universal_mapping_count,
)
from plonka.sums import induced_partition_function
from plonka.system import DirectSystem
from plonka.varieties import IBSL, b2, catalog_algebras, check_suite, suite_by_name
from utils.error_handling import SizeCapExceeded, ValidationError


@pytest.fixture(scope="module")
def provider():
    return boolean_free_provider()


@pytest.mark.parametrize("n, expected", [(0, 2), (1, 6), (2, 26)])
def test_free_algebra_sizes(provider, n, expected):
    report = free_plonka(n, provider)
    assert report.size_check == (expected, expected)
    assert report.system.index.size == 2**n
    assert sorted(report.generator_locations) == [f"x{r + 1}" for r in range(n)]


def test_free_count_formula():
    assert free_count(2, [2, 4, 16]) == 26
    assert free_count(3, [2, 4, 16, 256]) == 2 + 12 + 48 + 256
    with pytest.raises(ValidationError):
        free_count(2, [2, 4])
    with pytest.raises(ValidationError):
        free_count(2, [2, 0, 16])


def test_boolean_provider(provider):
    alg, gens = provider.free(2)
    assert alg.size == 16
    assert gens == (0b1010, 0b1100)
    with pytest.raises(SizeCapExceeded):
        provider.free(4)


def test_finite_subsets_cap():
    assert finite_subsets_semilattice(3).size == 8
    with pytest.raises(SizeCapExceeded):
        finite_subsets_semilattice(7)


def test_small_semilattice_counts():
    assert [s.size for s in small_semilattices(4)].count(4) == 5
    assert len(small_semilattices(4)) == 1 + 1 + 2 + 5


def test_free_with_zero():
    assert check_free_with_zero(powerset(2), [1, 2]) == []
    # the chain 0 < 1 < 2 forces the image of 2 above the image of 1
    problems = check_free_with_zero(chain(3), [1, 2])
    assert problems and problems[0].law == "free"
    assert check_free_with_zero(powerset(2), [1, 1])


def test_free_system_satisfies_freeness_conditions(provider):
    report = free_plonka(2, provider)
    assert check_freeness_conditions(report.system, report.generators) == []


def test_swapped_generators_break_generator_maps(provider):
    report = free_plonka(2, provider)
    claimed = dict(report.generators)
    claimed[3] = claimed[3][::-1]
    problems = check_freeness_conditions(report.system, claimed)
    assert problems
    assert {x.law for x in problems} == {"generator-maps"}


def test_merged_generators_fail_only_generator_maps():
    system, claimed = merged_generators_system()
    problems = check_freeness_conditions(system, claimed)
    assert problems
    assert {x.law for x in problems} == {"generator-maps"}


def test_redirected_transition_breaks_generator_maps(provider):
    report = free_plonka(2, provider)
    d = report.system
    fiber = d.fibers[1]
    g = report.generators[1][0]
    g_neg = int(fiber.tables["neg"][g])
    p = list(d.transitions[(1, 3)])
    # swap the images of g and its complement; p_13 stays injective
    p[g], p[g_neg] = p[g_neg], p[g]
    assert p[g] not in report.generators[3]
    redirected = DirectSystem(d.index, d.fibers, {**d.transitions, (1, 3): tuple(p)}, "redirected")
    problems = check_freeness_conditions(redirected, report.generators)
    assert problems
    assert {x.law for x in problems} == {"generator-maps"}
    assert any(x.witness[:2] == (1, 3) for x in problems)


def test_subset_generators_land_in_the_top_fiber(provider):
    report = free_plonka(2, provider)
    ps = free_sum(report)
    dot = induced_partition_function(ps).table
    generators = [report.generator_locations["x1"], report.generator_locations["x2"]]
    top = report.generators[3]
    assert subset_generators(ps.algebra, dot, generators, [0, 1]) == [ps.element(3, top[0]), ps.element(3, top[1])]
    assert subset_generators(ps.algebra, dot, generators, [1]) == [generators[1]]


def test_universal_mapping_from_one_generated_fiber(provider):
    alg, gens = provider.free(1)
    assert universal_mapping_count(alg, gens, b2()) == {(0,): 1, (1,): 1}


SMALL_IBSL = [a for a in catalog_algebras() if a.signature == IBSL and a.size <= 8]


@pytest.mark.parametrize("target", SMALL_IBSL, ids=lambda a: a.name)
def test_universal_mapping_from_free_sum(provider, target):
    report = free_plonka(2, provider)
    ps = free_sum(report)
    generators = [report.generator_locations["x1"], report.generator_locations["x2"]]
    counts = universal_mapping_count(ps.algebra, generators, target)
    assert len(counts) == target.size**2
    assert set(counts.values()) == {1}


def test_free_sum_is_an_involutive_bisemilattice(provider):
    ps = free_sum(free_plonka(2, provider))
    report = check_suite(ps.algebra, suite_by_name("ibsl"), include_witness=True)
    assert report.passes_suite
    assert report.passes_witness is False


def test_universal_mapping_needs_generators(provider):
    alg, _ = provider.free(1)
    with pytest.raises(ValidationError):
        universal_mapping_count(alg, [0], b2())
