import json

import numpy as np
import pytest
import yaml

from ncwalk.cli import EXIT_CONFIG, EXIT_OK, main
from ncwalk.errors import ConfigError
from ncwalk.outputs import read_json, read_series_csv, read_table_csv
from ncwalk.presets import PRESETS, get_preset
from ncwalk.runner import RunConfig, apply_overrides, run

SMALL = {
    "name": "tiny",
    "graph": {"kind": "chain", "size": 7},
    "params": {"delta_eps": 10.0, "delta_pair": 0.5},
    "grid": {"t_max": 4.0, "n_steps": 40},
    "observables": ["sigma", "mean_n", "ipr", "distribution", "classical", "l1_uniform"],
    "layers": [3],
    "mixing": {"target": "uniform", "eps": 1.0},
}


def write_config(tmp_path, data, name="cfg.yaml"):
    path = tmp_path / name
    path.write_text(yaml.safe_dump(data))
    return path


def test_single_run_outputs(tmp_path):
    manifest = run(RunConfig.from_dict(SMALL), tmp_path)
    assert manifest.dimension == 7 + 35
    meta, cols = read_series_csv(tmp_path / "tiny.csv")
    assert meta["manifest"] == "tiny.manifest.json"
    assert list(cols)[:4] == ["time", "sigma", "mean_n", "ipr"]
    assert {"classical", "l1_uniform", "layer_3", "p_0", "p_6"} <= set(cols)
    np.testing.assert_allclose(cols["classical"], np.sqrt(cols["time"]))
    probs = np.column_stack([cols[f"p_{k}"] for k in range(7)])
    np.testing.assert_allclose(probs.sum(axis=1), 1, atol=1e-10)
    summary = read_json(tmp_path / "tiny.json")
    assert summary["schema_version"] == 1 and summary["manifest"] == "tiny.manifest.json"
    assert summary["mixing"]["horizon"] == 4.0
    stored = read_json(tmp_path / "tiny.manifest.json")
    assert stored["config"]["graph"] == {"kind": "chain", "size": 7}
    assert stored["files"]["series"] == "tiny.csv"


def test_csv_round_trip_exact(tmp_path):
    run(RunConfig.from_dict(SMALL), tmp_path)
    text = (tmp_path / "tiny.csv").read_text()
    _, cols = read_series_csv(tmp_path / "tiny.csv")
    body = text.splitlines()
    header_at = next(i for i, line in enumerate(body) if not line.startswith("#"))
    first = [float(x) for x in body[header_at + 1].split(",")]
    assert first == [cols[name][0] for name in body[header_at].split(",")]


def test_rerun_byte_identical(tmp_path):
    cfg = dict(SMALL, disorder={"strength": 3.0, "realizations": 3, "seed": 17})
    cfg["mixing"] = None
    a, b = tmp_path / "a", tmp_path / "b"
    run(RunConfig.from_dict(cfg), a)
    run(RunConfig.from_dict(cfg), b)
    assert (a / "tiny.csv").read_bytes() == (b / "tiny.csv").read_bytes()
    manifest = read_json(a / "tiny.manifest.json")
    assert [s["realization"] for s in manifest["seeds"]] == [0, 1, 2]
    assert "mean_long_time_ipr" in read_json(a / "tiny.json")


def test_stationary_and_effective(tmp_path):
    cfg = dict(SMALL, stationary=True, effective=True, mixing={"target": "stationary", "eps": 0.8})
    cfg["observables"] = ["sigma", "l1_stationary"]
    run(RunConfig.from_dict(cfg), tmp_path)
    summary = read_json(tmp_path / "tiny.json")
    assert sum(summary["stationary_distribution"]) == pytest.approx(1)
    assert summary["effective"]["nnn_hop"] == pytest.approx(-3 * 0.25 / 20)
    _, cols = read_series_csv(tmp_path / "tiny.csv")
    assert "sigma_effective_diff" in cols


@pytest.mark.parametrize(
    "patch",
    [
        {"graph": {"kind": "ring", "size": 5}},
        {"graph": {"kind": "chain", "size": 1}},
        {"sectors": [0, 2]},
        {"sectors": [1, 9]},
        {"params": {"delta_eps": "x"}},
        {"params": {"bogus": 1.0}},
        {"grid": {"t_max": -1, "n_steps": 5}},
        {"observables": ["entropy"]},
        {"layers": [99]},
        {"initial_site": 40},
        {"mixing": {"target": "uniform", "eps": 0}},
        {"disorder": {"strength": -1.0}},
        {"disorder": {"strength": 1.0}, "stationary": True},
        {"graph": {"kind": "binary_tree", "size": 3}, "effective": True, "layers": []},
        {"graph": {"kind": "chain", "size": 41}, "sectors": [1, 3, 5]},
        {"unexpected": 1},
    ],
)
def test_validation_errors(patch):
    with pytest.raises(ConfigError):
        RunConfig.from_dict({**SMALL, **patch}).validate()


def test_overrides():
    data = apply_overrides(SMALL, ["params.delta_pair=0.25", "disorder.strength=2", "name=other"])
    assert data["params"]["delta_pair"] == 0.25
    assert data["disorder"] == {"strength": 2}
    assert data["name"] == "other"
    assert SMALL["params"]["delta_pair"] == 0.5
    with pytest.raises(ConfigError):
        apply_overrides(SMALL, ["novalue"])


def test_cli_run_and_validate(tmp_path, capsys):
    path = write_config(tmp_path, SMALL)
    assert main(["validate", str(path)]) == EXIT_OK
    assert "dimension=42" in capsys.readouterr().out
    assert main(["run", str(path), "--out", str(tmp_path / "out"), "--set", "name=cli"]) == EXIT_OK
    assert (tmp_path / "out" / "cli.csv").exists()


def test_cli_config_errors(tmp_path, capsys):
    bad = write_config(tmp_path, {**SMALL, "sectors": [2]})
    assert main(["run", str(bad), "--out", str(tmp_path)]) == EXIT_CONFIG
    assert not (tmp_path / "tiny.csv").exists()
    assert main(["run", str(tmp_path / "missing.yaml")]) == EXIT_CONFIG
    assert main(["preset", "nope"]) == EXIT_CONFIG
    assert main(["preset", "smoke", "--variant", "nope"]) == EXIT_CONFIG
    assert main(["validate"]) == EXIT_CONFIG
    assert "configuration error" in capsys.readouterr().err


def test_cli_smoke_preset(tmp_path):
    assert main(["preset", "smoke", "--out", str(tmp_path)]) == EXIT_OK
    _, cols = read_series_csv(tmp_path / "smoke-smoke.csv")
    assert cols["mean_n"] == pytest.approx(1.0, abs=1e-10)
    rows = read_table_csv(tmp_path / "smoke.table.csv")
    assert rows[0]["variant"] == "smoke-smoke"
    manifest = json.loads((tmp_path / "smoke-smoke.manifest.json").read_text())
    assert manifest["wall_time"] < 1.0


def test_list_presets(capsys):
    assert main(["list-presets"]) == EXIT_OK
    out = capsys.readouterr().out
    for name in ("fig1-upper", "fig2", "fig3", "fig4-upper", "fig4-lower", "fig6", "fig7", "fig9", "fig10"):
        assert name in out


def test_preset_catalog_contents():
    fig3 = {v["name"]: v["params"] for v in get_preset("fig3").variants}
    assert (fig3["gamma1"]["delta_pair"], fig3["gamma1"]["gamma_single"]) == (0.0, 1.0)
    assert (fig3["delta1"]["delta_pair"], fig3["delta1"]["gamma_single"]) == (1.0, 0.0)
    fig6 = get_preset("fig6").variants
    assert {v["graph"]["kind"] for v in fig6} == {"binary_tree"} and {v["graph"]["size"] for v in fig6} == {5}
    assert {v["params"]["delta_eps"] for v in fig6 if v["params"]["delta_pair"]} == {10.0, 20.0}
    fig9 = get_preset("fig9").variants
    assert any(v.get("disorder", {}).get("strength") == 5.0 and v["graph"] == {"kind": "glued_tree", "size": 4} for v in fig9)
    fig4 = get_preset("fig4-lower").variants
    assert {v["params"]["delta_pair"] for v in fig4} == {0.0, 1.0}
    assert {v["disorder"]["realizations"] for v in fig4} == {100}


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_presets_validate(name):
    for cfg in get_preset(name).configs():
        cfg.validate()
