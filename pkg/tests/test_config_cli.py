import csv
import json
import math
from pathlib import Path

import pytest

from holodfs.cli import main
from holodfs.config import ConfigError, load_config, parse_config

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def _write(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def _run(tmp_path, command, doc, *extra):
    cfg = _write(tmp_path, doc)
    out = tmp_path / "report.json"
    code = main([command, "--config", cfg, "--out", str(out), *extra])
    return code, (json.loads(out.read_text()) if out.exists() else None)


# -- parsing -------------------------------------------------------------------

def test_defaults_are_filled_in():
    cfg = parse_config({"experiment": "verify_1q"})
    assert cfg.pulse == {"j": 1.0, "phi": 0.0, "theta": 0.0, "varphi": 0.0, "tau": math.pi}
    assert cfg.seed == 0 and cfg.tolerances["condition"] == 1e-10


def test_degree_suffix_is_converted():
    cfg = parse_config({"experiment": "verify_1q", "pulse": {"theta_deg": 90, "phi_deg": -30}})
    assert cfg.pulse["theta"] == pytest.approx(math.pi / 2)
    assert cfg.pulse["phi"] == pytest.approx(-math.pi / 6)


@pytest.mark.parametrize("doc, key", [
    ({"experiment": "verify_1q", "puls": {}}, "puls"),
    ({"experiment": "verify_1q", "pulse": {"thta": 1.0}}, "thta"),
    ({"experiment": "verify_1q", "pulse": {"j_deg": 1.0}}, "j_deg"),
    ({"experiment": "verify_1q", "pulse": {"theta": 1.0, "theta_deg": 10}}, "theta"),
    ({"experiment": "verify_1q", "pulse": {"theta": float("nan")}}, "theta"),
    ({"experiment": "verify_1q", "pulse": {"theta": 4.0}}, "pulse"),
    ({"experiment": "verify_2q", "pulse": {"theta": 1.0}}, "pulse"),
    ({"experiment": "verify_1q", "tolerances": {"conditon": 1e-9}}, "conditon"),
    ({"experiment": "verify_1q", "seed": -1}, "seed"),
    ({"experiment": "noise_sweep", "noise": {"kappa_t": []}}, "kappa_t"),
    ({"experiment": "noise_sweep", "noise": {"kappa_t": [1.0], "state": ["01", "1"]}}, "state"),
    ({"experiment": "noise_sweep", "noise": {"kappa_t": [1.0], "mode": "fast"}}, "mode"),
    ({"experiment": "robustness_sweep"}, "epsilons"),
    ({"experiment": "synthesize_1q", "target": {"axis": [0, 0], "gamma": 1.0}}, "axis"),
    ({"experiment": "synthesize_1q", "target": {"axis": [0, 0, 1], "gamma": 9.0}}, "gamma"),
    ({"experiment": "verify_1q", "target": {"axis": [0, 0, 1], "gamma": 1.0}}, "target"),
    ({"experiment": "nonsense"}, "experiment"),
])
def test_invalid_configs_name_the_key(doc, key):
    with pytest.raises(ConfigError, match=key):
        parse_config(doc)


def test_subcommand_must_agree_with_document():
    with pytest.raises(ConfigError, match="experiment"):
        parse_config({"experiment": "verify_1q"}, "verify_2q")


@pytest.mark.parametrize("path", sorted(CONFIGS.glob("*.json")), ids=lambda p: p.stem)
def test_round_trip(path):
    cfg = load_config(path)
    again = parse_config(json.loads(json.dumps(cfg.to_dict())))
    assert again == cfg


def test_load_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError, match="JSON"):
        load_config(bad)
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.json")


# -- command line --------------------------------------------------------------

def test_verify_1q_end_to_end(tmp_path):
    code, rep = _run(tmp_path, "verify-1q", {"pulse": {"theta": 0.0, "varphi": 0.0, "phi": 0.0}})
    assert code == 0 and rep["passed"]
    assert [c["passed"] for c in rep["results"]["conditions"]] == [True] * 4
    assert rep["results"]["gamma"] == pytest.approx(math.pi)
    gate = rep["results"]["logical_gate"]
    assert gate["real"][0] + gate["real"][1] == pytest.approx([1, 0, 0, -1], abs=1e-12)
    assert gate["imag"][0] + gate["imag"][1] == pytest.approx([0, 0, 0, 0], abs=1e-12)
    assert rep["config"]["pulse"]["tau"] == pytest.approx(math.pi)


def test_synthesize_1q_emits_couplings(tmp_path):
    code, rep = _run(tmp_path, "synthesize-1q", {"target": {"axis": [0, 0, 1], "gamma": math.pi}})
    assert code == 0
    assert rep["results"]["couplings"]["jx"] == {"1,3": -1.0}
    assert rep["results"]["couplings"]["jy"] == {} and rep["results"]["couplings"]["jz"] == {}


def test_noise_sweep_on_dfs_state(tmp_path):
    doc = {"noise": {"kappa_t": [0, 1, 10], "state": ["010", "001"]}}
    code, rep = _run(tmp_path, "noise-sweep", doc)
    assert code == 0
    assert [r["survival_fidelity"] for r in rep["results"]["rows"]] == pytest.approx([1.0] * 3, abs=1e-12)


def test_noise_sweep_across_sectors_has_no_immunity_check(tmp_path):
    code, rep = _run(tmp_path, "noise-sweep", {"noise": {"kappa_t": [1.0], "state": ["000", "011"]}})
    assert code == 0 and rep["results"]["state_sector_weight"] is None
    assert rep["results"]["rows"][0]["survival_fidelity"] == pytest.approx(0.5 * (1 + math.exp(-8)))


def test_csv_matches_report(tmp_path):
    doc = {"pulse": {"theta_deg": 90}, "noise": {"kappa_t": [0.0, 0.5, 2.0]},
           "output": {"csv": str(tmp_path / "grid.csv")}}
    code, rep = _run(tmp_path, "noise-sweep", doc)
    assert code == 0
    raw = (tmp_path / "grid.csv").read_bytes()
    assert b"\r" not in raw
    rows = list(csv.reader(raw.decode().splitlines()))
    assert rows[0] == ["kappa_t", "survival_fidelity", "gate_fidelity", "bare_gate_fidelity"]
    for line, entry in zip(rows[1:], rep["results"]["rows"]):
        assert [float(x) for x in line] == [entry[k] for k in rows[0]]


def test_robustness_csv(tmp_path):
    code, rep = _run(tmp_path, "robustness-sweep",
                     {"pulse": {"theta_deg": 90}, "robustness": {"epsilons": [-0.05, 0, 0.05]}})
    assert code == 0
    rows = (tmp_path / "report.csv").read_text().splitlines()
    assert rows[0] == "epsilon,fidelity,leakage" and len(rows) == 4
    assert float(rows[2].split(",")[1]) == pytest.approx(1.0, abs=1e-12)


def test_empty_grid_gives_header_only(tmp_path):
    code, _ = _run(tmp_path, "robustness-sweep", {"robustness": {"epsilons": []}})
    assert code == 0
    assert (tmp_path / "report.csv").read_text() == "epsilon,fidelity,leakage\n"


def test_bad_key_exits_2(tmp_path, capsys):
    code, rep = _run(tmp_path, "verify-1q", {"pulse": {"thetta": 1.0}})
    assert code == 2 and rep is None
    assert "thetta" in capsys.readouterr().err


def test_failed_check_exits_1_with_witness(tmp_path, capsys):
    code, rep = _run(tmp_path, "verify-1q", {"pulse": {"theta": 1.0}}, "--tolerance", "1e-20")
    assert code == 1 and not rep["passed"]
    assert "worst violation" in capsys.readouterr().err


def test_config_error_codes_from_argparse():
    with pytest.raises(SystemExit) as exc:
        main(["verify-1q"])
    assert exc.value.code == 2


def test_seed_override(tmp_path):
    code, rep = _run(tmp_path, "noise-sweep", {"noise": {"kappa_t": [1.0]}}, "--seed", "123")
    assert code == 0 and rep["config"]["seed"] == 123


def test_report_to_stdout_when_no_path(tmp_path, capsys):
    cfg = _write(tmp_path, {"experiment": "verify_1q"})
    assert main(["verify-1q", "--config", cfg]) == 0
    captured = capsys.readouterr()
    assert json.loads(captured.out)["passed"] is True
    assert "verify_1q: PASS" in captured.err


@pytest.mark.parametrize("command, doc", [
    ("noise-sweep", {"pulse": {"theta_deg": 60}, "noise": {"kappa_t": [0.3, 3.0], "mode": "monte_carlo",
                                                           "samples": 500, "trotter_steps": 10}}),
    ("robustness-sweep", {"robustness": {"epsilons": [-0.1, 0.1]}}),
    ("verify-2q", {"pulse": {"alpha": 1.0, "zeta": 0.2}}),
])
def test_outputs_are_byte_identical(tmp_path, command, doc):
    cfg = _write(tmp_path, doc)
    report = tmp_path / "r.json"
    outs = []
    for _ in range(2):
        assert main([command, "--config", cfg, "--out", str(report), "--seed", "9"]) == 0
        table = report.with_suffix(".csv")
        outs.append((report.read_bytes(), table.read_bytes() if table.exists() else b""))
        report.unlink()
    assert outs[0] == outs[1]


@pytest.mark.parametrize("path", sorted(CONFIGS.glob("*.json")), ids=lambda p: p.stem)
def test_shipped_configs_pass(path, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    cfg = load_config(path)
    assert main([cfg.experiment.replace("_", "-"), "--config", str(path)]) == 0
    assert Path(cfg.output["report"]).exists()
