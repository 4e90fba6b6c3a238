#!/usr/bin/env python3
# coding: utf-8

import pytest

from algebra.terms import is_regular
from plonka.sums import compose
from plonka.varieties import (
    builtin_suites,
    catalog_algebras,
    catalog_systems,
    check_suite,
    cyclic_group,
    suite_by_name,
    suite_for,
    trivial_brace,
)
from utils.error_handling import SignatureMismatch, ValidationError

ALGEBRAS = {a.name: a for a in catalog_algebras()}
SUITED = [d for d in catalog_systems() if suite_for(d.signature) is not None]


@pytest.mark.parametrize("suite", builtin_suites(), ids=lambda s: s.name)
def test_suites_are_regular_with_irregular_witness(suite):
    assert suite.identities
    assert all(is_regular(ident) for ident in suite.identities)
    assert not is_regular(suite.irregular_witness)


def test_suite_sizes():
    assert [len(s.identities) for s in builtin_suites()] == [8, 5, 11]
    for suite in builtin_suites():
        labels = [ident.label for ident in suite.identities]
        assert len(set(labels)) == len(labels)


def test_suite_lookup():
    assert suite_by_name("IBSL").name == "ibsl"
    assert suite_for(ALGEBRAS["Z4"].signature).name == "clifford"
    assert suite_for(ALGEBRAS["L2"].signature) is None
    with pytest.raises(ValidationError):
        suite_by_name("groups")


def test_group_passes_clifford():
    report = check_suite(ALGEBRAS["Z4"], suite_by_name("clifford"), include_witness=True)
    assert report.passes_suite
    assert report.passes_witness is True
    assert report.as_dict()["witness"]["holds"] is True


def test_signature_mismatch():
    with pytest.raises(SignatureMismatch):
        check_suite(ALGEBRAS["B4"], suite_by_name("clifford"))


def test_weak_kleene_is_regular_but_not_boolean():
    report = check_suite(ALGEBRAS["WK3"], suite_by_name("ibsl"), include_witness=True)
    assert report.passes_suite
    assert report.passes_witness is False
    assert report.as_dict()["witness"]["counterexample"] is not None


@pytest.mark.parametrize("group", [cyclic_group(2), cyclic_group(3)], ids=lambda g: g.name)
def test_trivial_brace_passes_dwb(group):
    report = check_suite(trivial_brace(group), suite_by_name("dwb"), include_witness=True)
    assert report.passes_suite
    assert report.passes_witness


@pytest.mark.parametrize("d", SUITED, ids=lambda d: d.name)
def test_sums_satisfy_regular_suite_and_fail_witness_off_a_point(d):
    report = check_suite(compose(d).algebra, suite_for(d.signature), include_witness=True)
    assert report.passes_suite
    assert report.passes_witness is (d.index.size == 1)


def test_without_witness_report_has_none():
    report = check_suite(ALGEBRAS["Z2"], suite_by_name("clifford"))
    assert report.witness is None
    assert report.passes_witness is None
    assert "witness" not in report.as_dict()
