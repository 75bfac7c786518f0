import json

import pytest

from stringar.cli import main
from tests.conftest import EX3_SOURCE, W3_SOURCE


@pytest.fixture()
def w3_file(tmp_path):
    f = tmp_path / "w3.alg"
    f.write_text(W3_SOURCE)
    return str(f)


@pytest.fixture()
def ex3_file(tmp_path):
    f = tmp_path / "ex3.alg"
    f.write_text(EX3_SOURCE)
    return str(f)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate(capsys, w3_file):
    code, out, _ = run(capsys, "validate", w3_file)
    assert code == 0
    assert "string algebra" in out
    assert "nonzero paths: 10" in out


def test_strings_json(capsys, w3_file):
    code, out, _ = run(capsys, "strings", w3_file, "--json")
    assert code == 0
    data = json.loads(out)
    assert len(data["strings"]) == 12


def test_bands(capsys, ex3_file):
    code, out, _ = run(capsys, "bands", ex3_file, "--max-len", "6")
    assert code == 0
    assert out.strip()  # the cycle through the parallel route


def test_module_and_tau(capsys, w3_file):
    code, out, _ = run(capsys, "module", w3_file, "b2 b3")
    assert code == 0 and "dims" in out
    code, out, _ = run(capsys, "tau", w3_file, "e(2)")
    assert code == 0 and out.strip() == "e(3)"


def test_tau_orbit(capsys, w3_file):
    code, out, _ = run(capsys, "tau-orbit", w3_file, "e(2)", "--steps", "5")
    assert code == 0
    assert "e(2) -> e(3) -> e(4)" in out and "projective" in out


def test_knit_dot_census(capsys, w3_file):
    code, out, _ = run(capsys, "knit", w3_file, "--dot")
    assert code == 0
    assert out.count("style=dotted") == 8
    assert out.count(" -> ") == 24


def test_knit_json_matches_family_flag(capsys, w3_file):
    code1, out1, _ = run(capsys, "knit", w3_file, "--json")
    code2, out2, _ = run(capsys, "knit", "--family", "W", "--n", "3", "--json")
    assert code1 == code2 == 0
    assert out1 == out2


def test_hom(capsys, w3_file):
    code, out, _ = run(capsys, "hom", w3_file, "e(4)", "b3")
    assert code == 0 and "dim Hom = 1" in out


def test_radical_profile(capsys, w3_file):
    code, out, _ = run(capsys, "radical-profile", w3_file, "b2", "a b1", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["layerDims"][6] == 1
    assert data["layerDims"][7] == 0


def test_depth_path(capsys, w3_file):
    code, out, _ = run(capsys, "depth", w3_file, "e(4)", "b3", "b2 b3")
    assert code == 0 and out.strip() == "2"


def test_degree_theta(capsys):
    code, out, _ = run(
        capsys, "degree", "--family", "U", "--m", "2", "--n", "2",
        "--theta", "a2", "--side", "left",
    )
    assert code == 0 and out.strip() == "d_l = 3"


def test_cg_quiver(capsys):
    code, out, _ = run(
        capsys, "cg-quiver", "--family", "U", "--m", "2", "--n", "2",
        "--vertex", "a2", "--side", "ending", "--json",
    )
    assert code == 0
    assert len(json.loads(out)["vertices"]) == 4


def test_detect(capsys, ex3_file):
    code, out, _ = run(capsys, "detect", ex3_file, "--json")
    assert code == 0
    assert any(m["pattern"] == "Q3" for m in json.loads(out)["matches"])


def test_audit_exit_zero_and_deterministic(capsys, w3_file):
    code1, out1, _ = run(capsys, "audit", w3_file, "--samples", "4", "--seed", "7", "--json")
    code2, out2, _ = run(capsys, "audit", w3_file, "--samples", "4", "--seed", "7", "--json")
    assert code1 == code2 == 0
    assert out1 == out2


def test_witness_u23_json(capsys):
    code, out, _ = run(
        capsys, "witness", "--family", "U", "--m", "2", "--n", "3", "--json"
    )
    assert code == 0
    data = json.loads(out)
    assert data["expectedDepth"] == 7
    assert data["verified"] is True


def test_family_prints_source(capsys):
    code, out, _ = run(capsys, "family", "--family", "W", "--n", "3")
    assert code == 0
    assert out == W3_SOURCE


def test_domain_error_exit_one(capsys, ex3_file):
    code, _, err = run(capsys, "strings", ex3_file)
    assert code == 1
    assert "band" in err


def test_usage_error_exit_three(w3_file):
    with pytest.raises(SystemExit) as exc:
        main(["degree", w3_file])  # --side is required
    assert exc.value.code == 3


def test_missing_input_exit_three(capsys):
    code, _, err = run(capsys, "strings")
    assert code == 3 and "no input" in err


def test_both_inputs_exit_three(capsys, w3_file):
    code, _, err = run(capsys, "strings", w3_file, "--family", "W", "--n", "3")
    assert code == 3 and "not both" in err


def test_output_file(capsys, w3_file, tmp_path):
    target = tmp_path / "out.dot"
    code, out, _ = run(capsys, "knit", w3_file, "--dot", "--output", str(target))
    assert code == 0
    assert out == ""
    assert target.read_text().count("style=dotted") == 8


def test_char_flag(capsys, w3_file):
    code, out, _ = run(capsys, "strings", w3_file, "--char", "5", "--json")
    assert code == 0
    assert len(json.loads(out)["strings"]) == 12


def test_output_dir_env(capsys, w3_file, tmp_path, monkeypatch):
    monkeypatch.setenv("STRINGAR_OUTPUT_DIR", str(tmp_path))
    code, out, _ = run(capsys, "strings", w3_file, "--output", "census.txt")
    assert code == 0 and out == ""
    assert (tmp_path / "census.txt").read_text().count("\n") == 12
