import pytest

from lambertkit import render
from lambertkit.golden import GOLDEN_DIR, TARGETS, GoldenResult, compare, compute_tables, emit, load_golden
from lambertkit.kernel import PolyD, Ring
from lambertkit.variants import conjecture_degenerate

EXPECTED_FILES = {
    "fig1": ["fig1_s", "fig1_sinv", "fig1_gamma"],
    "fig2": ["fig2_s", "fig2_sinv", "fig2_gamma"],
    "table1": ["table1_ds"],
    "table2": ["table2_rho"],
}


@pytest.mark.parametrize("target", TARGETS)
def test_recomputed_tables_match_the_transcriptions(target):
    results = compare(target)
    assert [r.name for r in results] == EXPECTED_FILES[target]
    for r in results:
        assert r.matches, r.mismatches[:5]


def test_grid_shapes():
    assert len(load_golden("fig1_s")) == 16
    assert sum(len(row) for row in load_golden("table1_ds")) == 1050
    assert sum(len(row) for row in load_golden("table2_rho")) == 210
    fig2 = load_golden("fig2_sinv", Ring.POLY_D)
    assert fig2[9][0] == PolyD.parse("-d^3-2d+30")


def test_emitted_csv_is_byte_identical(tmp_path):
    paths = emit("fig1", tmp_path)
    assert [p.name for p in paths] == ["fig1_s.csv", "fig1_sinv.csv", "fig1_gamma.csv"]
    for path in paths:
        assert path.read_bytes() == (GOLDEN_DIR / path.name).read_bytes()


def test_compute_tables_is_keyed_by_file_stem():
    tables = compute_tables("table2")
    assert list(tables) == ["table2_rho"]
    assert tables["table2_rho"][0][0] == "1"


def test_unknown_target():
    with pytest.raises(ValueError, match="unknown golden target"):
        compare("fig3")


def test_golden_summary_lists_mismatches():
    ok = GoldenResult("fig1_s", 256)
    bad = GoldenResult("table1_ds", 1050, [(3, 2, "1", "2")])
    text = render.golden_summary([ok, bad])
    assert "| fig1_s | 256 | match |" in text
    assert "| table1_ds | 1050 | 1 mismatches |" in text
    assert "| 3 | 2 | `1` | `2` |" in text


def test_conjecture_report_markdown():
    report = conjecture_degenerate(3, False, 40)
    text = render.conjecture_report(report, preview_rows=1)
    assert text.startswith("# Residual report: degenerate")
    assert "nonzero rows" in text
    assert f"| {report.nonzero_rows[0]} |" in text
    if len(report.nonzero_rows) > 1:
        assert "further rows omitted" in text
