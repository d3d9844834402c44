import csv
import json
from fractions import Fraction

import pytest

from hn4walk import experiments as ex
from hn4walk.walk import CoinKind

G, S, L, M = COINS = (CoinKind.GROVER, CoinKind.SKW, CoinKind.LACKADAISICAL, CoinKind.MODIFIED_G)

EXPECTED = {
    "fig2-1d-selfloop": ("FLAT", "GROWS", "FLAT", "GROWS"),
    "fig3-nonadjacent": ("GROWS",) * 4,
    "fig4-diagonal": ("GROWS",) * 4,
    "fig5-adjacent-standard": ("FLAT", "GROWS", "FLAT", "GROWS"),
    "fig6-adjacent-longrange": ("FLAT", "GROWS", "FLAT", "GROWS"),
    "fig7-one-selfloop": ("FLAT", "GROWS", "FLAT", "GROWS"),
    "fig8-two-selfloops": ("FLAT", "GROWS", "FLAT", "GROWS"),
}


def test_catalog_contents():
    specs = ex.catalog()
    assert [s.id for s in specs] == list(EXPECTED)
    weights = {s.id: s.loop_weight for s in specs}
    assert weights["fig2-1d-selfloop"] == "2/64"
    assert weights["fig4-diagonal"] == "128/1024"
    assert weights["fig7-one-selfloop"] == weights["fig8-two-selfloops"] == "4/1024"
    for s in specs:
        s.marked.indices(s.lattice)  # in bounds
        assert s.expected == dict(zip(COINS, EXPECTED[s.id]))


def test_get_spec_unknown():
    with pytest.raises(KeyError):
        ex.get_spec("fig9")


@pytest.mark.parametrize("text, value", [("8/1024", Fraction(1, 128)), ("0.25", Fraction(1, 4)),
                                         ("0", Fraction(0))])
def test_parse_weight(text, value):
    assert ex.parse_weight(text) == value


@pytest.mark.parametrize("text", ["-1/2", "abc", "1/0", ""])
def test_parse_weight_rejects(text):
    with pytest.raises(ValueError):
        ex.parse_weight(text)


@pytest.mark.parametrize("exp_id", list(EXPECTED))
def test_classification_table(catalog_results, exp_id):
    summary = catalog_results[exp_id].summary
    got = tuple(summary[k].classification for k in COINS)
    assert got == EXPECTED[exp_id]
    assert summary.matches_expected


@pytest.mark.parametrize("exp_id", list(EXPECTED))
def test_initial_probability(catalog_results, exp_id):
    res = catalog_results[exp_id]
    for k in COINS:
        assert abs(res.summary[k].p0 - res.spec.p0) <= 1e-14
        assert len(res.series[k].probs) == res.spec.t_max + 1


def test_modified_g_outperforms_grover_on_exceptional(catalog_results):
    for exp_id, row in EXPECTED.items():
        if row[0] == "FLAT":
            s = catalog_results[exp_id].summary
            assert s[M].max_prob >= 20 * s[G].max_prob


def test_classify_rules():
    th = ex.Thresholds()
    assert ex.classify(0.5, 0.01, 0.01, th) == ("GROWS", False)
    assert ex.classify(0.05, 0.001, 0.001, th)[0] == "FLAT"  # 50x but below the floor
    assert ex.classify(0.2, 0.1, 0.1, th)[0] == "FLAT"
    assert ex.classify(0.009, 0.001, 0.001, th) == ("FLAT", True)


def test_export_layout_and_determinism(catalog_results, tmp_path):
    results = list(catalog_results.values())
    ex.export(results, tmp_path / "a")
    ex.export(results, tmp_path / "b")
    grover = (tmp_path / "a" / "fig2-1d-selfloop" / "grover.csv").read_text().splitlines()
    body = [ln for ln in grover if not ln.startswith("#")]
    assert body[0] == "t,probability"
    assert body[1] == "0,0.015625"
    assert len(body) == 1 + 1001
    assert "# loop_weight: 0" in grover
    lack = (tmp_path / "a" / "fig2-1d-selfloop" / "lackadaisical.csv").read_text()
    assert "# loop_weight: 2/64" in lack

    with open(tmp_path / "a" / "summary.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 28
    assert {r["classification"] for r in rows} == {"GROWS", "FLAT"}

    for p in (tmp_path / "a").rglob("*"):
        if p.is_file():
            assert p.read_bytes() == (tmp_path / "b" / p.relative_to(tmp_path / "a")).read_bytes()

    cat = json.loads((tmp_path / "a" / "catalog.json").read_text())
    assert [c["loop_weight"] for c in cat][:2] == ["2/64", "8/1024"]
    assert cat[5]["marked"] == [[1, 16]]


def test_export_unwritable(catalog_results, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError, match="cannot write"):
        ex.export([catalog_results["fig2-1d-selfloop"]], blocker)


def test_run_steps_override():
    res = ex.run(ex.get_spec("fig2-1d-selfloop"), t_max=10)
    assert all(len(s.probs) == 11 for s in res.series.values())
