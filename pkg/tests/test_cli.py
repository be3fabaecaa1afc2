import json
import math

import numpy as np
import pytest

from ctqwalk.cli import main, parse_angle, parse_axis, parse_config, parse_defect
from ctqwalk.errors import LatticeTooSmall, UsageError
from ctqwalk.experiments import STRATEGIES


def test_parse_angle_pi_suffix_exact():
    rng = np.random.default_rng(2)
    for x in rng.uniform(-4, 4, 50):
        assert parse_angle(f"{float(x)!r}pi") == float(x) * math.pi
    assert parse_angle("pi") == math.pi
    assert parse_angle("-pi") == -math.pi
    assert parse_angle("0.25") == 0.25
    with pytest.raises(UsageError):
        parse_angle("about-two")


def test_parse_defect_matches_catalog():
    a = parse_defect("xi=-1.8,tm=-1.2pi,tp=1.2pi")
    assert a == STRATEGIES["A"]
    b = parse_defect("xi=1.4,tm=-1.5pi,tp=1.5pi")
    assert b == STRATEGIES["B"]
    shifted = parse_defect("xi=1.0,tm=0,tp=0,site=3")
    assert shifted.site == 3
    with pytest.raises(UsageError):
        parse_defect("xi=1.0,tm=0")
    with pytest.raises(UsageError):
        parse_defect("xi=1.0,tm=0,tp=0,flux=2")


def test_parse_axis():
    ax = parse_axis("theta:0:2pi:41")
    assert (ax.name, ax.start, ax.count, ax.log) == ("theta", 0.0, 41, False)
    assert ax.stop == 2 * math.pi
    assert parse_axis("omega:0.1:10:20:log").log
    with pytest.raises(UsageError):
        parse_axis("xi:0:1")


def test_flag_overrides_file_overrides_default(tmp_path):
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"t": 50.0, "sigma0": 2.0}))
    args = parse_config(["evolve", "--config", str(config), "--sigma0", "3.0"])
    assert args.sigma0 == 3.0  # flag wins
    assert args.t == 50.0  # file fills the gap
    assert args.engine == "chebyshev"  # default fills the rest


def test_unknown_config_key_rejected():
    with pytest.raises(UsageError):
        parse_config(["evolve"], config_text=json.dumps({"warp": 9}))
    with pytest.raises(UsageError):
        parse_config(["evolve"], config_text="[1, 2]")


def test_two_axes_for_1d_sweep_exits_2(tmp_path):
    code = main(["sweep", "--axis", "xi:-1:1:3", "--axis", "theta:0:1:3",
                 "--t", "20", "--out", str(tmp_path)])
    assert code == 2


def test_missing_subcommand_exits_2():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_evolve_writes_verified_artifacts(tmp_path):
    out = tmp_path / "run"
    assert main(["evolve", "--localized", "--t", "30", "--out", str(out)]) == 0
    for name in ("evolve.csv", "evolve.svg", "manifest.json"):
        assert (out / name).exists()
    assert main(["verify", str(out / "manifest.json")]) == 0
    tampered = (out / "evolve.csv").read_text().replace("0", "1", 1)
    (out / "evolve.csv").write_text(tampered)
    assert main(["verify", str(out / "manifest.json")]) == 4


def test_evolve_output_deterministic(tmp_path):
    outs = [tmp_path / "r1", tmp_path / "r2"]
    for out in outs:
        assert main(["evolve", "--sigma0", "1", "--t", "25", "--out", str(out)]) == 0
    assert (outs[0] / "evolve.csv").read_bytes() == (outs[1] / "evolve.csv").read_bytes()
    assert (outs[0] / "evolve.svg").read_bytes() == (outs[1] / "evolve.svg").read_bytes()
    manifests = [json.loads((o / "manifest.json").read_text()) for o in outs]
    for m in manifests:
        m.pop("wall_clock")
    assert manifests[0] == manifests[1]


def test_parrondo_requires_omega_and_catalog_names(tmp_path):
    assert main(["parrondo", "--a", "C", "--b", "B", "--t", "20",
                 "--out", str(tmp_path)]) == 2
    assert main(["parrondo", "--a", "xi=1,tm=0,tp=0", "--b", "B", "--omega", "1",
                 "--t", "20", "--out", str(tmp_path)]) == 2


def test_numeric_failure_exits_3(monkeypatch, tmp_path):
    import ctqwalk.cli as cli

    def boom(args):
        raise LatticeTooSmall("leakage bound exceeded")

    monkeypatch.setitem(cli._COMMANDS, "evolve", boom)
    assert main(["evolve", "--t", "10", "--out", str(tmp_path)]) == 3


def test_omega_scan_cli_records_best(tmp_path):
    out = tmp_path / "scan"
    assert main(["omega-scan", "--a", "C", "--b", "B", "--omega-range", "0.5:4:3",
                 "--t", "30", "--out", str(out)]) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["derived"]["best_omega"] > 0
    assert (out / "scan.csv").exists()
