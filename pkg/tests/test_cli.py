import json

import pytest

from src.cli import execute, main, parse_group_option, parse_ring_option
from src.base_ring import BaseRing
from src.errors import FormatError
from src.group_core import cyclic, direct_product


def run(*argv):
    code, report = execute(list(argv))
    return code, report.to_document()


def test_validate_gaussian():
    code, doc = run("validate", "gaussian")
    assert code == 0
    assert doc["summary"]["crystalline"] is True
    assert all(c["passed"] for c in doc["checks"])
    assert len(doc["fingerprint"]) == 64


def test_validate_reports_regularity_witness():
    code, doc = run("validate", "z4-alpha2")
    assert code == 0
    assert doc["summary"]["crystalline"] is False
    assert doc["summary"]["regularity_witness"]["indices"] == [1, 1]


def test_torsion_disagreement_is_still_exit_zero():
    code, doc = run("torsion", "z4-alpha2")
    assert code == 0
    assert doc["summary"]["agreement"] is False


def test_mul():
    code, doc = run("mul", "gaussian", "[[1,1]]", "[[1,1]]")
    assert code == 0
    assert doc["summary"]["product"] == [[0, -1]]


def test_inverse():
    code, doc = run("inverse", "gaussian", "1")
    assert code == 0
    assert doc["summary"]["inverse"] == [[1, -1]]


def test_identities():
    code, doc = run("identities", "skew-conjugation", "--samples", "[[0,1]]")
    assert code == 0
    assert doc["summary"]["passed"] is True


def test_ore_under_conjugation():
    code, doc = run("ore", "skew-conjugation", "[[1,[0,1]]]", "[1,1]")
    assert code == 0
    assert doc["summary"]["r_prime"] == [[1, [-1, 1]]]
    assert doc["summary"]["s_prime"] == [2, 0]


def test_maschke_projection():
    code, doc = run("maschke", "f3c2", "f3c2-regular-module", "--projection", "[[1,1],[0,0]]")
    assert code == 0
    assert doc["summary"]["valid"] is True
    assert doc["summary"]["lambda"] == [[2, 2], [2, 2]]
    assert doc["summary"]["projection_a_linear"] is False
    assert doc["summary"]["projection_witness"] == [1, 0]


def test_maschke_submodule():
    code, doc = run("maschke", "f3c2", "f3c2-regular-module", "--submodule", "[[1,1]]")
    assert code == 0
    assert doc["summary"]["projection"] == [[2, 2], [2, 2]]


def test_maschke_in_characteristic_two_fails_cleanly():
    code, doc = run("maschke", "f2c2", "f2c2-regular-module", "--projection", "[[1,1],[0,0]]")
    assert code == 2
    assert "not invertible" in doc["summary"]["error"]


def test_semiprime():
    code, doc = run("semiprime", "f2c2")
    assert code == 0
    assert doc["summary"]["semiprime"] is False
    assert doc["summary"]["witness"] == [[0, 1], [1, 1]]
    assert doc["checks"][0]["passed"] is True


def test_fuzz_sweep_and_mutate():
    code, doc = run("fuzz", "--ring", "modular:4", "--group", "cyclic:2", "--seed", "1", "--trials", "10")
    assert code == 0
    assert doc["summary"]["trials"] == 10
    assert len(doc["tables"]["trials"]) == 10

    code, doc = run("sweep", "--primes", "2,3", "--orders", "2,3")
    assert code == 0
    assert doc["summary"] == {"cells": 4, "agreeing": 4}

    code, doc = run("mutate", "quaternion", "--seed", "7", "--trials", "20")
    assert code == 0
    assert doc["summary"]["replayed"] == doc["summary"]["detected"]


def test_fixtures():
    code, doc = run("fixtures")
    assert code == 0
    assert doc["summary"]["count"] == len(doc["tables"]["fixtures"])


@pytest.mark.parametrize("argv", [
    ["validate", "no-such-datum"],
    ["mul", "gaussian", "[[5,1]]", "[[0,1]]"],
    ["mul", "gaussian", "not json", "[[0,1]]"],
    ["inverse", "gaussian", "9"],
    ["semiprime", "gaussian"],
    ["fuzz", "--ring", "modular:x"],
    ["validate", "gaussian", "--log-level", "chatty"],
    ["frobnicate"],
    ["mul", "gaussian"],
])
def test_errors_exit_with_two(argv):
    code, _ = execute(argv)
    assert code == 2


def test_json_output_is_reproducible(capsys):
    assert main(["validate", "quaternion", "--json"]) == 0
    first = capsys.readouterr().out
    assert main(["validate", "quaternion", "--json"]) == 0
    second = capsys.readouterr().out
    assert first == second
    assert json.loads(first)["exit_status"] == 0


def test_text_output(capsys):
    assert main(["semiprime", "f3c2"]) == 0
    out = capsys.readouterr().out
    assert "semiprime: true" in out
    assert "exit status: 0" in out


def test_out_directory(tmp_path):
    code, _ = execute(["validate", "gaussian", "--out", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "validate.json").is_file()
    assert (tmp_path / "validate.csv").is_file()


def test_option_parsers():
    assert parse_ring_option("modular:4") == BaseRing.modular(4)
    assert parse_ring_option("quadratic:-1:rational") == BaseRing.quadratic(-1, "rational")
    assert parse_ring_option("integer") == BaseRing.integer()
    assert parse_group_option("cyclic:3") == cyclic(3)
    assert parse_group_option("product:2,2") == direct_product(cyclic(2), cyclic(2))
    with pytest.raises(FormatError):
        parse_group_option("dihedral:4")
    with pytest.raises(FormatError):
        parse_ring_option("pair:")


def test_lemma14_is_the_documented_command():
    code, doc = run("lemma14", "gaussian")
    assert code == 0
    assert doc["summary"]["passed"] is True
    assert run("identities", "gaussian")[1]["summary"] == doc["summary"]


def test_maschke_reports_hypotheses():
    _, doc = run("maschke", "f3c2", "f3c2-regular-module", "--submodule", "[[1,1]]")
    assert doc["summary"]["hypotheses"] == {"group_order_unit": True, "basis_units": True}


def test_mutate_with_zero_trials():
    code, doc = run("mutate", "quaternion", "--trials", "0")
    assert code == 0
    assert doc["summary"]["count"] == 0


GAUSSIAN_SHAPE = {"group": {"type": "cyclic", "order": 2},
                  "sigma": ["identity", "identity"], "alpha": [[1, 1], [1, -1]]}


@pytest.mark.parametrize("content", [
    json.dumps({"ring": {"kind": "modular", "n": "four"}, **GAUSSIAN_SHAPE}).encode(),
    json.dumps({"ring": {"kind": "quadratic", "d": -1, "base": "complex"}, **GAUSSIAN_SHAPE}).encode(),
    b"\xff\xfe{\x00}\x00",
], ids=["non-integer-modulus", "unknown-base", "not-utf8"])
def test_malformed_files_exit_with_two(tmp_path, content):
    path = tmp_path / "datum.json"
    path.write_bytes(content)
    code, report = execute(["validate", str(path)])
    assert code == 2
    assert report.to_document()["summary"]["error"]
