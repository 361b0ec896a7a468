import json
import subprocess
import sys

import pytest

from zpd.catalog import parse_catalog_spec
from zpd.cli import VERDICT_EXIT, main
from zpd.formats import (
    FormatError,
    algebra_from_json,
    algebra_to_json,
    certificate_from_json,
    dumps,
)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_check_abelian(capsys):
    code, rep, _ = run(capsys, "check", "catalog:abelian(3)@F2")
    assert code == 0
    assert rep["dims"]["dim_span"] == rep["dims"]["dim_ker"] == 9
    assert rep["verdict"]["kind"] == "ProvenZPD"
    assert len(rep["certificate"]["pairs"]) == 9


def test_check_dual_numbers(capsys):
    code, rep, _ = run(capsys, "check", "catalog:trunc_poly(2)@F3")
    assert code == 1
    assert rep["verdict"]["evidence"] == {"ExhaustiveGap": {"dim_span": 1, "dim_ker": 2}}
    assert rep["dims"] == {"n": 2, "dim_A2": 2, "dim_ker": 2, "dim_span": 1}


def test_check_emit_and_verify(capsys, tmp_path):
    cert = tmp_path / "c.json"
    code, rep, _ = run(capsys, "check", "catalog:sl(2)@Q", "--emit-cert", str(cert))
    assert code == 0 and rep["certificate"] == {"path": str(cert)}
    code, rep, _ = run(capsys, "verify", "catalog:sl(2)@Q", str(cert))
    assert code == 0 and rep["ok"]


def test_verify_corrupted_pair(capsys, tmp_path):
    cert = tmp_path / "c.json"
    run(capsys, "check", "catalog:sl(2)@F5", "--emit-cert", str(cert))
    doc = json.loads(cert.read_text())
    doc["pairs"][1][1] = ["0", "0", "1"]
    doc["pairs"][1][0] = ["1", "0", "0"]  # [e, f] = h
    cert.write_text(json.dumps(doc))
    code, rep, _ = run(capsys, "verify", "catalog:sl(2)@F5", str(cert))
    assert code != 0
    assert "pair 1: product is nonzero" in rep["failures"]


def test_verify_empty_certificate(capsys, tmp_path):
    cert = tmp_path / "c.json"
    cert.write_text(json.dumps({"field": "Q", "pairs": []}))
    code, rep, _ = run(capsys, "verify", "catalog:abelian(2)@Q", str(cert))
    assert code != 0
    assert rep["dim_span"] == 0 and rep["dim_ker"] == 4
    assert any("dimension gap: span 0 < kernel 4" in f for f in rep["failures"])


def test_verify_hash_mismatch(capsys, tmp_path):
    cert = tmp_path / "c.json"
    run(capsys, "check", "catalog:abelian(2)@Q", "--emit-cert", str(cert))
    code, rep, _ = run(capsys, "verify", "catalog:heisenberg@Q", str(cert))
    assert code != 0
    assert rep["failures"][0] == "algebra_hash does not match the algebra"


def test_catalog_command(capsys, tmp_path):
    code, doc, _ = run(capsys, "catalog", "heisenberg", "Q")
    assert code == 0
    assert doc["dim"] == 3
    assert doc["structure_constants"] == [[0, 1, 2, "1"], [1, 0, 2, "-1"]]
    code, doc, _ = run(capsys, "catalog", "parabolic_sl", "3,[1,2]", "Q")
    assert doc["dim"] == 6
    code, doc, _ = run(capsys, "catalog", "sl(2)", "F5")
    assert doc["field"] == {"Fp": 5}
    code, _, err = run(capsys, "catalog", "nosuch", "Q")
    assert code == 65


def test_dsum_command(capsys, tmp_path):
    p = tmp_path / "sl2.json"
    assert main(["catalog", "sl", "2", "Q", "-o", str(p)]) == 0
    code, doc, _ = run(capsys, "dsum", str(p), str(p))
    assert code == 0 and doc["dim"] == 6 and doc["layout"] == [3, 3]
    q = tmp_path / "sl2f5.json"
    main(["catalog", "sl", "2", "F5", "-o", str(q)])
    code, _, _ = run(capsys, "dsum", str(p), str(q))
    assert code == 65


def test_props(capsys):
    code, doc, _ = run(capsys, "props", "catalog:sl(2)")
    assert code == 0
    assert doc["is_lie"] is True and doc["is_associative"] is False


def test_lemmas(capsys, tmp_path):
    d = tmp_path / "dual.json"
    main(["catalog", "trunc_poly", "2", "F3", "-o", str(d)])
    s = tmp_path / "sum.json"
    main(["dsum", str(d), str(d), "-o", str(s)])
    code, doc, _ = run(capsys, "lemmas", str(s))
    assert code == 0
    assert doc["kernel_decomposition"] is True
    assert doc["pure_tensor_decomposition"] is True
    assert doc["dims"] == {"lhs": 10, "rhs": 10}
    code, _, err = run(capsys, "lemmas", "catalog:sl(2)")
    assert code == 65 and "layout" in err


def test_lemmas_over_q(capsys, tmp_path):
    code, doc, _ = run(capsys, "lemmas", "catalog:gl(2)")
    assert code == 0 and doc["kernel_decomposition"] is True
    assert doc["pure_tensor_decomposition"] is None


def test_parse_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "check", str(bad))[0] == 64
    bad.write_text(json.dumps({"field": "Q", "dim": 2, "structure_constants": [[0, 0, 5, "1"]]}))
    assert run(capsys, "check", str(bad))[0] == 64
    bad.write_text(json.dumps({"field": "Q", "dim": 2, "structure_constants": [[0, 0, 0, "x"]]}))
    assert run(capsys, "check", str(bad))[0] == 64
    assert run(capsys, "check", str(tmp_path / "missing.json"))[0] == 64
    assert run(capsys, "check", "catalog:nosuch")[0] == 64
    with pytest.raises(SystemExit) as info:
        main(["check"])
    assert info.value.code == 64


def test_flag_misuse(capsys):
    code, _, err = run(capsys, "check", "catalog:trunc_poly(3)@Q", "--assume-no-zero-divisors")
    assert code == 65
    assert "zero divisors" in err


def test_budget_exceeded_is_unknown(capsys, monkeypatch):
    code, rep, _ = run(capsys, "check", "catalog:abelian(5)@F5", "--budget", "10")
    assert code == 2 and rep["verdict"]["kind"] == "Unknown"
    monkeypatch.setenv("ZPD_BUDGET", "10")
    code, rep, _ = run(capsys, "check", "catalog:abelian(5)@F5")
    assert code == 2 and rep["budget"]["max_enumeration"] == 10
    code, rep, _ = run(capsys, "check", "catalog:trunc_poly(2)@Q")
    assert code == 2 and rep["verdict"]["stats"]["samples_tried"] == 10


def test_exit_codes_total_and_distinct():
    assert sorted(VERDICT_EXIT.values()) == [0, 1, 2]
    assert set(VERDICT_EXIT) == {"ProvenZPD", "ProvenNotZPD", "Unknown"}


def test_reports_are_byte_identical(capsys):
    outs = []
    for _ in range(2):
        main(["check", "catalog:parabolic_sl(3,[2,1])@Q"])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]


@pytest.mark.parametrize("spec", [
    "abelian(3)@Q", "heisenberg@F5", "sl(3)@Q", "gl(2)@Q", "matrix(2)@F3",
    "jordan_from_associative(matrix(2))@Q", "trunc_sym(2,2)@F7", "parabolic_sl(3,[1,2])@F5",
])
def test_algebra_file_roundtrip(spec):
    alg = parse_catalog_spec(spec)
    doc = algebra_to_json(alg)
    back = algebra_from_json(json.loads(dumps(doc)))
    assert back == alg
    assert (back.name, back.labels, back.layout) == (alg.name, alg.labels, alg.layout)
    assert algebra_to_json(back) == doc
    assert doc["structure_constants"] == sorted(doc["structure_constants"], key=lambda e: e[:3])


def test_algebra_file_values():
    doc = {"field": {"Fp": 7}, "dim": 2, "structure_constants": [[0, 0, 1, "1/2"], [1, 1, 1, 3]]}
    alg = algebra_from_json(doc)
    assert alg.constants[0][0][1] == 4 and alg.constants[1][1][1] == 3
    assert alg.constants[0][1] == (0, 0)
    with pytest.raises(FormatError):
        algebra_from_json({"field": "Q", "dim": 2, "structure_constants": [[0, 0, 0, 1.5]]})


def test_certificate_parse_errors():
    with pytest.raises(FormatError):
        certificate_from_json({"field": "Q"})


def test_console_script_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "zpd.cli", "check", "catalog:abelian(2)@F3"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["verdict"]["kind"] == "ProvenZPD"
