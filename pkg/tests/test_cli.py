import json

import pytest

from lambertkit.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from lambertkit.golden import GOLDEN_DIR


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_golden_csv_reproduces_the_checked_in_files(tmp_path, capsys):
    code, out, _ = run(capsys, "golden", "--target", "fig1", "--format", "csv", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert len(out.splitlines()) == 3
    for name in ("fig1_s.csv", "fig1_sinv.csv", "fig1_gamma.csv"):
        assert (tmp_path / name).read_bytes() == (GOLDEN_DIR / name).read_bytes()


def test_golden_json_reports_matches(capsys):
    code, out, _ = run(capsys, "golden", "--target", "table2")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["matches"] is True
    assert [r["name"] for r in payload["results"]] == ["table2_rho"]


def test_verify_factorization(capsys):
    code, out, _ = run(capsys, "verify-factorization", "--a", "mu", "--params", "1,0,2,1", "--N", "16")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["verified"] is True
    assert payload["params"] == "1,0,2,1"


def test_verify_factorization_shift(capsys):
    code, out, _ = run(capsys, "verify-factorization", "--shift", "2,1,3", "--N", "15")
    assert code == EXIT_OK
    assert json.loads(out)["check"] == "shift"


def test_function_from_json_file(tmp_path, capsys):
    path = tmp_path / "seq.json"
    path.write_text(json.dumps([3, -1, 4, 1, -5, 9, 2, 6, -5, 3, 5, 8]))
    code, out, _ = run(capsys, "verify-factorization", "--a", f"@{path}", "--N", "12", "--d-param")
    assert code == EXIT_OK
    assert json.loads(out)["a"] == "seq"


@pytest.mark.parametrize(
    "argv",
    [
        ["matrix", "--N", "0"],
        ["matrix", "--N", "many"],
        ["no-such-verb"],
        ["matrix", "--format", "md"],
        ["matrix", "--params", "1,0,2"],
        ["dirichlet-inverse", "--f", "nope"],
        ["bar-a", "--a", "vonmangoldt", "--ring", "rat"],
        ["matrix", "--ring", "complex"],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == EXIT_USAGE
    assert out == ""


def test_domain_errors_name_the_verb(capsys):
    code, _, err = run(capsys, "dirichlet-inverse", "--f", "nope")
    assert code == EXIT_USAGE
    assert err.startswith("lambertkit dirichlet-inverse:")


def test_singular_matrix_exits_one(capsys):
    code, out, _ = run(capsys, "invert", "--params", "2,0,1,0", "--N", "5")
    assert code == EXIT_FAILED
    payload = json.loads(out)
    assert payload["row"] == 1


def test_invert_checks_recurrences(capsys):
    code, out, _ = run(capsys, "invert", "--params", "1,0,2,1", "--N", "10")
    assert code == EXIT_OK
    assert json.loads(out)["recurrences_hold"] is True


def test_output_is_deterministic(tmp_path, capsys):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (first, second):
        assert run(capsys, "matrix", "--N", "12", "--d-param", "--format", "csv", "--out", str(path))[0] == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    assert first.read_text().splitlines()[0] == "1,0,0,0,0,0,0,0,0,0,0,0"


def test_conjecture_report_is_cached(cache_dir, capsys):
    code, out, _ = run(capsys, "conjecture", "--alpha", "3", "--N", "30")
    assert code == EXIT_OK
    files = list((cache_dir / "conjecture").glob("*.json"))
    assert len(files) == 1
    again = run(capsys, "conjecture", "--alpha", "3", "--N", "30")
    assert again[1] == out
    assert json.loads(out)["label"] == "degenerate"


def test_conjecture_markdown(cache_dir, capsys):
    code, out, _ = run(capsys, "conjecture", "--alpha", "2", "--d-param", "--N", "40", "--format", "md", "--no-cache")
    assert code == EXIT_OK
    assert out.startswith("# Residual report")
    assert "| 13 |" in out
    assert not (cache_dir / "conjecture").exists()


def test_conjecture_tilde_a(cache_dir, capsys):
    code, _, _ = run(capsys, "conjecture", "--mode", "tilde-a", "--a", "mu", "--gamma", "one", "--N", "20")
    assert code == EXIT_OK


def test_functions_listing(capsys):
    code, out, _ = run(capsys, "functions")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert "mu" in payload["functions"]
    assert "euler" in payload["C"]


@pytest.mark.parametrize(
    "argv",
    [
        ["recover", "--a", "phi", "--weights", "one,id_1", "--N", "20"],
        ["pm-transform", "--a", "sigma_1", "--N", "30"],
        ["verify-identities", "--suite", "applications", "--N", "20"],
        ["verify-identities", "--suite", "convolution", "--N", "20"],
        ["solve-convolution", "--f", "phi", "--h", "sigma_1", "--N", "20"],
        ["dirichlet-inverse", "--f", "sigma_1", "--N", "20"],
        ["bar-a", "--N", "20"],
        ["series", "--C", "odd", "--N", "10"],
    ],
)
def test_verbs_succeed(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == EXIT_OK
    assert json.loads(out)


def test_ds_table_csv(capsys):
    code, out, _ = run(capsys, "ds-table", "--J", "3", "--N", "4", "--format", "csv")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "1,0,0"
