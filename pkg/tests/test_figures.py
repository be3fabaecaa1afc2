import json

import pytest

from ctqwalk.errors import UsageError
from ctqwalk.figures import BUNDLE_IDS, reproduce
from ctqwalk.serialize import verify_manifest


def test_unknown_bundle_rejected():
    with pytest.raises(UsageError):
        reproduce("fig99")
    with pytest.raises(UsageError):
        reproduce("table1", scale="poster")


def test_bundle_ids_complete():
    assert BUNDLE_IDS == ("fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "table1")


def test_table1_desk_bundle(tmp_path):
    out = tmp_path / "t1"
    summary = reproduce("table1", "desk", out_dir=out)
    ratios = summary["ratios"]
    # desk-scale pins, re-derived with the exact spectral engine before freezing
    assert ratios["A"] == pytest.approx(0.357, abs=0.01)
    assert ratios["B"] == pytest.approx(0.907, abs=0.01)
    assert ratios["C"] == pytest.approx(0.983, abs=0.01)
    assert ratios["D"] == pytest.approx(0.983, abs=0.01)
    assert (out / "table1.csv").exists()
    assert verify_manifest(out / "manifest.json") == []


def test_table1_manifests_repeatable(tmp_path):
    dirs = [tmp_path / "r1", tmp_path / "r2"]
    for d in dirs:
        reproduce("table1", "desk", out_dir=d)
    manifests = [json.loads((d / "manifest.json").read_text()) for d in dirs]
    for m in manifests:
        m.pop("wall_clock")
    assert manifests[0] == manifests[1]


def test_fig2_desk_bundle(tmp_path):
    out = tmp_path / "f2"
    summary = reproduce("fig2", "desk", out_dir=out)
    assert summary["sigma0"] == [0.25, 0.5, 1.0, 2.0, 5.0, 10.0]
    assert len(summary["numerical"]) == 6
    # numerical rates are positive and ordered like the continuum prediction
    assert summary["numerical"][0] > summary["numerical"][-1]
    for name in ("fig2.csv", "fig2.svg", "manifest.json"):
        assert (out / name).exists()
    assert verify_manifest(out / "manifest.json") == []


def test_summary_only_when_no_out_dir():
    summary = reproduce("table1", "desk")
    assert summary["figure_id"] == "table1"
    assert set(summary["ratios"]) == {"A", "B", "C", "D"}
