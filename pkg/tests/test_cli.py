import json
import subprocess
import sys

from k3corr.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_invariants(capsys):
    code, body = run_json(capsys, "invariants", "--r", "5", "--s", "13", "--d", "1", "--gamma", "65")
    assert code == 0
    assert (body["a1"], body["b1"], body["gamma_a"], body["gamma_b"]) == ("5", "13", "5", "13")
    code, body = run_json(capsys, "invariants", "--r", "4", "--s", "9", "--d", "6", "--gamma", "1")
    assert code == 0 and (body["a1"], body["b1"]) == ("1", "1")


def test_invariants_bad_gamma_names_the_rule(capsys):
    code, out, err = run(capsys, "invariants", "--r", "6", "--s", "10", "--d", "1", "--gamma", "7")
    assert code == 2 and out == ""
    assert "InvalidGamma" in err and "divisor" in err


def test_rank2_exit_codes(capsys):
    code, body = run_json(capsys, "rank2", "--r", "2", "--s", "2", "--d", "1", "--gamma", "1",
                          "--k", "1", "--t", "0")
    assert code == 0 and body["series"] == "A" and body["h1"] == ["1", "-2"]
    assert [m["move"] for m in body["chain"]] == [
        "nu_inverse", "reflection", "nu", "tensor", "tyurin"]
    code, body = run_json(capsys, "rank2", "--r", "5", "--s", "13", "--d", "1", "--gamma", "65",
                          "--k", "1", "--t", "1")
    assert code == 1 and body["reason"] == "both_equations_insoluble"
    code, body = run_json(capsys, "rank2", "--r", "6", "--s", "10", "--d", "1", "--gamma", "4",
                          "--k", "1", "--t", "1")
    assert code == 1 and body["reason"] == "index_obstruction" and body["n_v"] == "2"
    code, _, err = run(capsys, "rank2", "--r", "5", "--s", "13", "--gamma", "7", "--k", "1",
                       "--t", "1")
    assert code == 2


def test_small_commands(capsys):
    assert run_json(capsys, "mukai-element", "--a", "5", "--b", "13") == (
        0, {"m": "79", "modulus": "130"})
    assert run_json(capsys, "recover-ab", "--ab", "65", "--m", "51") == (0, {"a": "5", "b": "13"})
    code, body = run_json(capsys, "periods", "--r", "6", "--s", "10")
    assert code == 0 and body["t_star"] == "22" and body["index_over_base"] == "2"
    code, body = run_json(capsys, "reduce", "--r", "4", "--s", "9", "--d", "6")
    assert code == 0 and body["reduced"] == {"r": "1", "l": ["1"], "s": "1"}
    assert body["chain"] == [{"move": "nu_inverse", "d1": "2", "d2": "3"}]
    assert run(capsys, "mukai-element", "--a", "4", "--b", "6")[0] == 2
    assert run(capsys, "recover-ab", "--ab", "65", "--m", "3")[0] == 2


def test_bqf(capsys):
    code, body = run_json(capsys, "bqf", "--a", "1", "--b", "0", "--c", "-2", "--n", "-1")
    assert code == 0 and body["witness"] == {"x": "1", "y": "1", "value": "-1"}
    code, body = run_json(capsys, "bqf", "--a", "5", "--b", "65", "--c", "13", "--n", "1")
    assert code == 1 and body["found"] is False
    assert run(capsys, "bqf", "--a", "6", "--b", "0", "--c", "34", "--n", "8")[0] == 2
    code, body = run_json(capsys, "bqf", "--a", "6", "--b", "0", "--c", "34", "--n", "8",
                          "--oracle-bound", "1000")
    assert code == 1 and body["found"] is False and body["bound"] == "1000"


def test_necessary(capsys):
    code, body = run_json(capsys, "necessary", "--r", "5", "--s", "13", "--gamma", "130")
    assert code == 1 and body["blocked"] is True
    code, body = run_json(capsys, "necessary", "--r", "5", "--s", "2", "--gamma", "10")
    assert code == 0 and body["blocked"] is False
    code, body = run_json(capsys, "necessary", "--r", "5", "--s", "2", "--gamma", "10",
                          "--literal-2")
    assert code == 1 and body["blocked"] is True


def test_verify_rank3(capsys):
    code, body = run_json(capsys, "verify-rank3")
    assert code == 0 and body["critical"] is True
    assert set(body["facts"].values()) == {True} and len(body["facts"]) == 4


def test_critical_search(capsys):
    code, body = run_json(capsys, "critical-search", "--r", "2", "--s", "2", "--gamma", "1",
                          "--kmax", "3", "--tmax", "3")
    assert code == 0
    assert any(h["input"]["k"] == "1" and h["input"]["t"] == "0" for h in body["hits"])
    code, body = run_json(capsys, "critical-search", "--r", "5", "--s", "13", "--gamma", "65",
                          "--kmax", "5", "--tmax", "5")
    assert code == 1 and body == {"count": "0", "hits": []}
    assert run(capsys, "critical-search", "--r", "2", "--s", "2", "--gamma", "1", "--kmax", "3",
               "--tmax", "3", "--workers", "0")[0] == 2


def test_lattice_disc(capsys, tmp_path):
    p = tmp_path / "s.json"
    p.write_text(json.dumps({"gram": [[130, 0, 0], [0, -6, -3], [0, -3, -10]],
                             "labels": ["H", "e1", "e2"]}))
    code, body = run_json(capsys, "lattice-disc", "--gram", str(p))
    assert code == 0
    assert body["det"] == "6630" and body["signature"] == ["1", "2"]
    assert body["discriminant"]["invariant_factors"] == ["1", "1", "6630"]
    assert body["discriminant"]["cyclic"] is True
    odd = tmp_path / "odd.json"
    odd.write_text(json.dumps({"gram": [[1, 0], [0, 3]]}))
    assert run(capsys, "lattice-disc", "--gram", str(odd))[0] == 2
    assert run(capsys, "lattice-disc", "--gram", str(odd), "--bilinear")[0] == 0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"gram": [[2, 1], [0, 2]]}))
    assert run(capsys, "lattice-disc", "--gram", str(bad))[0] == 2
    assert run(capsys, "lattice-disc", "--gram", str(tmp_path / "missing.json"))[0] == 2


def test_unknown_flag_and_command(capsys):
    assert run(capsys, "periods", "--r", "1", "--s", "1", "--frobnicate")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "periods", "--r", "x", "--s", "1")[0] == 2
    assert run(capsys, "--help")[0] == 0


def test_text_mode(capsys, monkeypatch):
    monkeypatch.setenv("K3CORR_OUTPUT", "text")
    code, out, _ = run(capsys, "mukai-element", "--a", "5", "--b", "13")
    assert code == 0 and out == "m: 79\nmodulus: 130\n"
    monkeypatch.setenv("K3CORR_OUTPUT", "xml")
    assert run(capsys, "mukai-element", "--a", "5", "--b", "13")[0] == 2


def _subprocess(*argv):
    return subprocess.run([sys.executable, "-m", "k3corr", *argv], capture_output=True)


def test_byte_identical_across_runs_and_workers():
    argv = ["critical-search", "--r", "3", "--s", "5", "--gamma", "1", "--kmax", "6", "--tmax", "6"]
    first = _subprocess(*argv, "--workers", "1")
    again = _subprocess(*argv, "--workers", "1")
    many = _subprocess(*argv, "--workers", "4")
    assert first.returncode == 0
    assert first.stdout == again.stdout == many.stdout
    a = _subprocess("verify-rank3")
    b = _subprocess("verify-rank3")
    assert a.returncode == 0 and a.stdout == b.stdout
