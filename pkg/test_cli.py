#!/usr/bin/env python3
# coding: utf-8

import io
import json

import pytest

from algebra.semilattice import diamond
from formats.dot import semilattice_dot
from formats.json_io import parse_algebra, parse_system, system_to_dict
from main import run
from plonka.sums import same_system
from plonka.varieties import catalog_entry
from utils.error_handling import ParseError


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def invoke_json(*argv):
    code, out, err = invoke("--json", *argv)
    return code, json.loads(out)


def test_free_on_two_generators():
    code, data = invoke_json("free", "--generators", "2")
    assert code == 0
    assert data["predicted"] == data["actual"] == 26
    assert data["fiber_sizes"] == [2, 4, 4, 16]


def test_free_emits_system(tmp_path):
    target = tmp_path / "f1.json"
    code, _ = invoke_json("free", "--generators", "1", "--emit", str(target))
    assert code == 0
    assert parse_system(str(target)).size == 6


def test_check_id_regularity():
    code, data = invoke_json("check-id", "x·y ≈ x")
    assert code == 0
    assert data["regular"] is False
    code, data = invoke_json("check-id", "x·y ≈ y·x", "--algebra", "@Z3")
    assert code == 0
    assert data["regular"] and data["holds"]


def test_check_id_fails_on_algebra():
    code, data = invoke_json("check-id", "x·y ≈ x", "--algebra", "@Z2")
    assert code == 2
    assert data["counterexample"] is not None


def test_catalog_listing_and_emit():
    code, data = invoke_json("catalog", "--list")
    assert code == 0
    assert "WK3" in [e["name"] for e in data["algebras"]]
    code, data = invoke_json("catalog", "--systems")
    assert len(data["systems"]) >= 20
    code, data = invoke_json("catalog", "--emit", "chain-Z2-Z2")
    assert same_system(parse_system(data), catalog_entry("chain-Z2-Z2"))


def test_validate_broken_system(tmp_path):
    data = system_to_dict(catalog_entry("chain-Z2-Z2"))
    data["transitions"][0]["map"] = [1, 1]
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    code, report = invoke_json("validate", str(path))
    assert code == 2
    assert report["valid"] is False
    assert {d["law"] for d in report["diagnostics"]} >= {"preservation"}


def test_validate_catalog_system():
    code, data = invoke_json("validate", "@diamond-ibsl")
    assert code == 0
    assert data["valid"]


def test_export_congruence_lattice_of_z4():
    code, out, _ = invoke("export-dot", "@Z4", "--kind", "con")
    assert code == 0
    assert "n0 -> n1;" in out
    assert "n1 -> n2;" in out
    assert "n0 -> n2;" not in out


def test_export_index_needs_a_system():
    code, _, err = invoke("export-dot", "@Z4", "--kind", "index")
    assert code == 2
    assert "needs a system" in err


def test_semilattice_dot_of_diamond():
    text = semilattice_dot(diamond())
    assert text.count("[label=") == 4
    assert text.count("->") == 4


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["compose", "{not json"], 3),
        (["--cap", "2", "si", "@Z4"], 4),
        (["frobnicate"], 3),
        (["compose", "@no-such-system"], 2),
    ],
)
def test_exit_codes(argv, expected):
    code, _, err = invoke(*argv)
    assert code == expected
    assert err


def test_congruences_correspond():
    code, data = invoke_json("congruences", "@chain-Z2-Z2")
    assert code == 0
    assert data["bijection"] is True
    assert len(data["congruences"]) == len(data["system_congruences"])


def test_random_cg_agrees():
    code, data = invoke_json("--seed", "7", "cg", "@diamond-B2", "--random", "20")
    assert code == 0
    assert data["trials"] == 20
    assert data["mismatches"] == []


def test_cg_with_pairs():
    code, data = invoke_json("cg", "@chain-Z2-Z2", "--pairs", "[[0, 2]]")
    assert code == 0
    assert data["agrees"]
    assert data["cg"] == [[0, 2], [1, 3]]


def test_decompose_weak_kleene():
    code, data = invoke_json("decompose", "@WK3", "--pf", "x ∧ (x ∨ y)")
    assert code == 0
    assert data["system"]["index"]["size"] == 2
    assert [f["elements"] for f in data["system"]["fibers"]][1] == ["∞"]


def test_check_pf_rejects_projection():
    code, data = invoke_json("check-pf", "@WK3", "--pf", "y")
    assert code == 2
    assert data["partition_function"] is False


def test_star_si_of_z2():
    code, data = invoke_json("star-si", "@Z2")
    assert code == 0
    assert data == {"star_si": True, "si_without_absorbing": True, "theorem_holds": True}


def test_check_suite_with_witness():
    code, data = invoke_json("check-suite", "@B4", "--suite", "ibsl", "--with-witness")
    assert code == 0
    assert all(row["holds"] for row in data["identities"])
    assert data["witness"]["holds"]


def test_quotient_by_total_relation():
    code, data = invoke_json("quotient", "@chain-Z2-Z2", "--theta", "[[0,1,2,3]]")
    assert code == 0
    assert data["system"]["index"]["size"] == 1


def test_human_output_ends_with_machine_section():
    code, out, _ = invoke("si", "@Z4")
    assert code == 0
    assert out.splitlines()[0].strip()
    assert '"si": true' in out


def test_parse_algebra_error_path():
    with pytest.raises(ParseError, match=r"signature\[0\]\.arity"):
        parse_algebra({"signature": [{"name": "mul"}], "elements": ["e"], "tables": {}})


CHAIN_ORDER = '{"size": 2, "join": [[0, 1], [1, 1]]}'


def test_check_sos_on_fibers():
    code, data = invoke_json("check-sos", "@chain-Z2-Z2", "--blocks", "[[0, 1], [2, 3]]", "--order", CHAIN_ORDER, "--least", "0")
    assert code == 0
    assert data["semilattice_of_subalgebras"] is True


def test_check_sos_rejects_crossed_blocks():
    code, data = invoke_json("check-sos", "@chain-Z2-Z2", "--blocks", "[[0, 2], [1, 3]]", "--order", CHAIN_ORDER)
    assert code == 2
    assert data["semilattice_of_subalgebras"] is False
    assert data["diagnostics"]


@pytest.mark.parametrize("least", ["5", "-1"])
def test_check_sos_least_out_of_range(least):
    code, _, err = invoke(
        "check-sos", "@chain-Z2-Z2", "--blocks", "[[0, 1], [2, 3]]", "--order", CHAIN_ORDER, f"--least={least}"
    )
    assert code == 2
    assert "least block" in err


def test_parse_algebra_rejects_fractional_cells():
    doc = {
        "signature": [{"name": "mul", "arity": 2}],
        "elements": ["0", "1"],
        "tables": {"mul": [[0, 1], [1, 0.7]]},
    }
    with pytest.raises(ParseError, match=r"tables\.mul"):
        parse_algebra(doc)
    code, _, err = invoke("compose", json.dumps({"index": {"size": 1, "join": [[0.5]]}, "fibers": [], "transitions": []}))
    assert code == 3
    assert "join" in err
