"""End-to-end CLI behaviour: exit codes, output shapes, determinism."""

import json

from chowkit.cli import main
from chowkit.zero_section import VerificationReport
from chowkit.poly import Polynomial, RING_VARS


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ------------------------------------------------------------------ verify


def test_verify_single_genus(capsys):
    code, out, err = run(capsys, ["verify", "--genus", "2", "--which", "main"])
    assert code == 0
    assert out == "main_identity (genus 2): holds\nall checks hold\n"
    assert err == ""


def test_verify_json_shape(capsys):
    code, out, _ = run(capsys, ["verify", "--genus", "2", "--which", "all", "--json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["command"] == "verify"
    assert payload["which"] == "all"
    assert payload["genera"] == [2]
    assert payload["all_hold"] is True
    assert len(payload["results"]) == 14
    assert payload["results"][0] == {
        "name": "main_identity",
        "genus": 2,
        "holds": True,
        "residual": "0",
    }
    for result in payload["results"]:
        assert "seconds" not in result


def test_verify_sweep(capsys):
    code, out, _ = run(capsys, ["verify", "--max-genus", "3", "--which", "main", "--json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["genera"] == [1, 2, 3]
    assert [r["genus"] for r in payload["results"]] == [1, 2, 3]
    assert payload["all_hold"] is True


def test_verify_needs_a_genus(capsys):
    code, _, err = run(capsys, ["verify"])
    assert code == 2
    assert "needs --genus or --max-genus" in err


def test_verify_rejects_genus_zero(capsys):
    code, _, err = run(capsys, ["verify", "--genus", "0"])
    assert code == 2
    assert "positive integer" in err


def test_verify_reports_failure_with_exit_1(capsys, monkeypatch):
    def failing(genus, cache=None):
        return VerificationReport(
            name="main_identity",
            genus=genus,
            holds=False,
            residual=Polynomial.variable(RING_VARS, "T1"),
        )

    monkeypatch.setattr("chowkit.cli.verify_main", failing)
    code, out, _ = run(capsys, ["verify", "--genus", "3", "--which", "main"])
    assert code == 1
    assert "FAILS, residual T1" in out
    assert "1 of 1 checks FAILED" in out


def test_quiet_suppresses_output_but_keeps_code(capsys, monkeypatch):
    code, out, _ = run(capsys, ["verify", "--genus", "2", "--which", "main", "--quiet"])
    assert code == 0 and out == ""

    def failing(genus, cache=None):
        return VerificationReport(
            name="main_identity", genus=genus, holds=False, residual=Polynomial.variable(RING_VARS, "P")
        )

    monkeypatch.setattr("chowkit.cli.verify_main", failing)
    code, out, _ = run(capsys, ["verify", "--genus", "2", "--which", "main", "--quiet"])
    assert code == 1 and out == ""


def test_verify_deterministic_output(capsys):
    _, first, _ = run(capsys, ["verify", "--genus", "3", "--which", "all", "--json"])
    _, second, _ = run(capsys, ["verify", "--genus", "3", "--which", "all", "--json"])
    assert first == second


# ------------------------------------------------------------------ ring


def test_ring_reduce_fixture(capsys):
    code, out, _ = run(capsys, ["ring", "--genus", "2", "reduce", "P^2"])
    assert code == 0
    assert out == "-2*T1*T2\n"


def test_ring_reduce_json(capsys):
    code, out, _ = run(capsys, ["ring", "--genus", "2", "reduce", "P^2", "--json"])
    assert code == 0
    payload = json.loads(out)
    assert payload == {
        "command": "ring",
        "action": "reduce",
        "genus": 2,
        "input": "P^2",
        "normal_form": "-2*T1*T2",
    }


def test_ring_reduce_requires_expression(capsys):
    code, _, err = run(capsys, ["ring", "--genus", "2", "reduce"])
    assert code == 2
    assert "needs an expression" in err


def test_ring_reduce_parse_error(capsys):
    code, _, err = run(capsys, ["ring", "--genus", "2", "reduce", "P^^2"])
    assert code == 2
    assert "cannot parse" in err


def test_ring_reduce_unknown_variable(capsys):
    code, _, err = run(capsys, ["ring", "--genus", "2", "reduce", "P + Theta"])
    assert code == 2
    assert "cannot parse" in err


def test_ring_dims_text(capsys):
    code, out, _ = run(capsys, ["ring", "--genus", "3", "dims"])
    assert code == 0
    assert out.splitlines() == ["k=0: 1", "k=1: 3", "k=2: 6", "k=3: 3", "k=4: 1", "k=5: 0"]


def test_ring_dims_json(capsys):
    code, out, _ = run(capsys, ["ring", "--genus", "2", "dims", "--json"])
    assert code == 0
    assert json.loads(out) == {"command": "ring", "action": "dims", "genus": 2, "dims": [1, 3, 1, 0]}


def test_ring_pairing(capsys):
    code, out, _ = run(capsys, ["ring", "--genus", "3", "pairing", "--json"])
    assert code == 0
    payload = json.loads(out)
    assert [block["k"] for block in payload["pairings"]] == [0, 1, 2]
    for block in payload["pairings"]:
        assert block["determinant"] != "0"
    assert payload["pairings"][2]["matrix"] == [["4"]]


def test_ring_relations(capsys):
    code, out, _ = run(capsys, ["ring", "--genus", "1", "relations"])
    assert code == 0
    assert out.splitlines() == ["l=1: T1", "l=0: P", "l=-1: T2"]


def test_ring_relations_json(capsys):
    code, out, _ = run(capsys, ["ring", "--genus", "2", "relations", "--json"])
    payload = json.loads(out)
    assert payload["relations"][0] == {"d_grade": 2, "polynomial": "T1^2"}
    assert payload["relations"][2] == {"d_grade": 0, "polynomial": "2*T1*T2 + P^2"}


# ------------------------------------------------------------------ coeffs


def test_coeffs_json(capsys):
    code, out, _ = run(capsys, ["coeffs", "--genus", "2", "--json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["rows"] == [
        {"a": 2, "b": 0, "c": 0, "alpha": "1/2", "eta": "1/2"},
        {"a": 1, "b": 1, "c": 0, "alpha": "1/8", "eta": "-1/12"},
        {"a": 0, "b": 2, "c": 0, "alpha": "7/1920", "eta": "-1/240"},
        {"a": 0, "b": 0, "c": 1, "alpha": "1/24", "eta": "1/24"},
    ]


def test_coeffs_single_table_text(capsys):
    code, out, _ = run(capsys, ["coeffs", "--genus", "1", "--table", "alpha"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split() == ["a", "b", "c", "alpha"]
    assert lines[1].split() == ["1", "0", "0", "1"]
    assert lines[2].split() == ["0", "1", "0", "1/24"]
    assert "eta" not in out


# ------------------------------------------------------------------ dr


def test_dr_latex(capsys):
    code, out, _ = run(capsys, ["dr", "--genus", "1", "--weights", "1,-1", "--format", "latex"])
    assert code == 0
    assert out == (
        r"\frac{1}{2} K_{1} + \frac{1}{2} K_{2} - \frac{1}{12} \delta_{irr}"
        r" + \delta_{0}^{\{1,2\}}" + "\n"
    )


def test_dr_json_and_compact_type(capsys):
    code, out, _ = run(capsys, ["dr", "--genus", "2", "--weights", "1,-1"])
    assert code == 0
    payload = json.loads(out)
    assert payload["g"] == 2 and payload["codim"] == 2
    kinds = {s["kind"] for t in payload["terms"] for s in t["symbols"]}
    assert "delta_irr" in kinds and "xi" in kinds

    code, out, _ = run(capsys, ["dr", "--genus", "2", "--weights", "1,-1", "--compact-type"])
    assert code == 0
    payload = json.loads(out)
    kinds = {s["kind"] for t in payload["terms"] for s in t["symbols"]}
    assert kinds <= {"K", "delta"}


def test_dr_rejects_bad_weights(capsys):
    code, _, err = run(capsys, ["dr", "--genus", "2", "--weights", "1,2"])
    assert code == 2
    assert "sum to zero" in err
    code, _, err = run(capsys, ["dr", "--genus", "2", "--weights", "1,x"])
    assert code == 2


# ------------------------------------------------------------------ wiring


def test_no_subcommand_is_usage_error(capsys):
    assert run(capsys, [])[0] == 2


def test_help_exits_zero(capsys):
    code, out, _ = run(capsys, ["--help"])
    assert code == 0
    assert "chowkit" in out


def test_unknown_choice_is_usage_error(capsys):
    code, _, _ = run(capsys, ["ring", "--genus", "2", "explode"])
    assert code == 2


def test_cache_dir_environment(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("CHOWKIT_CACHE_DIR", str(tmp_path))
    code, first, _ = run(capsys, ["ring", "--genus", "3", "dims"])
    assert code == 0
    cached = [f.name for f in tmp_path.iterdir()]
    assert cached == ["chowkit-echelon-v1-g3.pickle"]
    code, second, _ = run(capsys, ["ring", "--genus", "3", "dims"])
    assert code == 0 and first == second


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run(
        [sys.executable, "-m", "chowkit", "ring", "--genus", "2", "reduce", "P^2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == "-2*T1*T2\n"
