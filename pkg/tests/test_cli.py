import math
import re

import pytest
import yaml

from acpurity.analytics import gamma_heisenberg, interaction_time
from acpurity.bath import OhmicBath
from acpurity.cli import main
from acpurity.cli.config import ConfigError, dump_config, load_config, parse_config
from acpurity.cli.presets import PRESETS, preset, quantum_dot_units
from acpurity.cli.runner import columns, validate_point

ALPHA = 0.01 / (2 * math.pi)


def point(**over):
    raw = {
        "experiment": "single_point",
        "system": {"n_qubits": 2, "j_coupling": 1.0, "interaction": "heisenberg"},
        "drive": {"waveform": "harmonic", "amplitude_ratio": 2.404825557695, "omega": 32.0},
        "bath": {"alpha": ALPHA, "omega_c": 1000.0, "temperature": 0.01},
        "numerics": {"steps_per_period": 128, "n_samples": 64, "k_max": 16},
    }
    for key, val in over.items():
        if isinstance(val, dict) and isinstance(raw.get(key), dict):
            raw[key] = {**raw[key], **val}
        else:
            raw[key] = val
    return raw


def write(tmp_path, raw, name="cfg.yaml"):
    p = tmp_path / name
    p.write_text(yaml.safe_dump(raw, sort_keys=False))
    return p


def sweep_cfg(tmp_path, points=4):
    raw = point(experiment="amplitude_sweep", sweep={"axis": "amplitude_ratio", "min": 0.0, "max": 3.0, "points": points})
    raw["drive"] = {"waveform": "harmonic", "amplitude_ratio": 0.0, "omega": 16.0}
    raw["output_path"] = str(tmp_path / "from_config.csv")
    return write(tmp_path, raw)


# ---------------------------------------------------------------- presets


def test_preset_values():
    assert preset("fig4").drive.omega == 32.0
    assert preset("fig2").bath.omega_c == 500.0
    assert preset("quantum_dot").bath.temperature == pytest.approx(0.0086, rel=5e-3)
    assert preset("fig3").bath.alpha == pytest.approx(ALPHA) == preset("fig4").bath.alpha
    with pytest.raises(KeyError):
        preset("fig9")


def test_quantum_dot_units():
    u = quantum_dot_units()
    assert u["temperature"] == pytest.approx(8.617333262e-7 / 1e-4, rel=1e-12)
    assert u["amplitude"] == pytest.approx(100.0)
    assert u["omega"] % 8 == 0
    # pi/(4J) with J = 0.1 meV is a few picoseconds
    assert u["gate_time_s"] == pytest.approx(math.pi / 4 * 6.582119569e-16 / 1e-4, rel=1e-9)


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_emit_config_round_trip(name, tmp_path, capsys):
    assert main(["preset", name, "--emit-config"]) == 0
    text = capsys.readouterr().out
    cfg = parse_config(yaml.safe_load(text))
    assert cfg == preset(name)
    assert cfg.digest() == preset(name).digest()
    out = tmp_path / "p.yaml"
    assert main(["preset", name, "--emit-config", "--output", str(out)]) == 0
    assert out.read_text() == text


# ---------------------------------------------------------------- config errors


def test_unknown_key_rejected(tmp_path, capsys):
    assert main(["run", str(write(tmp_path, point(bath={"colour": "blue"})))]) == 1
    assert "colour" in capsys.readouterr().err
    assert main(["run", str(write(tmp_path, point(extra=1)))]) == 1


def test_omega_must_be_multiple_of_8j(tmp_path, capsys):
    assert main(["run", str(write(tmp_path, point(drive={"omega": 30.0})))]) == 1
    assert "8" in capsys.readouterr().err


@pytest.mark.parametrize(
    "bad",
    [
        {"sweep": {"axis": "omega", "min": 1.0, "max": 2.0, "points": 4}},
        {"experiment": "amplitude_sweep", "sweep": {"axis": "amplitude_ratio", "min": 2.0, "max": 1.0, "points": 4}},
        {"experiment": "amplitude_sweep", "sweep": {"axis": "amplitude_ratio", "min": 0.0, "max": 1.0, "points": 1}},
        {"experiment": "amplitude_sweep", "sweep": {"axis": "amplitude_ratio", "min": 0.0, "max": 1.0, "points": 4, "scale": "log"}},
        {"experiment": "teleport"},
        {"drive": {"amplitude": 3.0}},
        {"bath": {"alpha": -1.0}},
        {"numerics": {"steps_per_period": 0}},
        {"duration": -1.0},
    ],
)
def test_invalid_configs(bad, tmp_path):
    with pytest.raises(ConfigError):
        parse_config(point(**bad))
    assert main(["run", str(write(tmp_path, point(**bad)))]) == 1


def test_missing_file_and_bad_yaml(tmp_path):
    assert main(["run", str(tmp_path / "nope.yaml")]) == 1
    p = tmp_path / "broken.yaml"
    p.write_text("experiment: [unclosed\n")
    assert main(["run", str(p)]) == 1
    with pytest.raises(ConfigError):
        load_config(str(p))


def test_usage_errors_are_config_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["preset", "fig9"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 1
    assert main(["--threads", "0", "preset", "fig2"]) == 1


def test_runtime_error_exit_code(tmp_path, capsys):
    blocker = tmp_path / "plain_file"
    blocker.write_text("")
    out = blocker / "x.csv"
    assert main(["run", str(sweep_cfg(tmp_path)), "--output", str(out)]) == 2
    assert "runtime error" in capsys.readouterr().err


def test_validate_requires_single_point(tmp_path):
    assert main(["validate", str(sweep_cfg(tmp_path))]) == 1


# ---------------------------------------------------------------- CSV output


def test_csv_format(tmp_path):
    cfg_path = sweep_cfg(tmp_path)
    out = tmp_path / "a.csv"
    assert main(["run", str(cfg_path), "--output", str(out)]) == 0
    raw = out.read_bytes()
    assert b"\r" not in raw and raw.endswith(b"\n")
    lines = raw.decode().splitlines()
    meta = [ln for ln in lines if ln.startswith("#")]
    body = [ln for ln in lines if not ln.startswith("#")]
    cfg = load_config(str(cfg_path))
    assert f"# config_sha256: {cfg.digest()}" in meta
    assert re.fullmatch(r"# config_sha256: [0-9a-f]{64}", meta[1])
    assert body[0].split(",") == columns(cfg)
    assert len(body) == 1 + 4
    for row in body[1:]:
        for field in row.split(","):
            mantissa = re.sub(r"e[+-]\d+$", "", field).lstrip("-").replace(".", "").lstrip("0")
            assert len(mantissa) <= 12
            float(field)


def test_rerun_byte_identical_and_threads(tmp_path):
    cfg_path = sweep_cfg(tmp_path)
    outs = []
    for i, threads in enumerate((1, 1, 3)):
        out = tmp_path / f"r{i}.csv"
        assert main(["--threads", str(threads), "run", str(cfg_path), "--output", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_output_override_and_config_path(tmp_path):
    cfg_path = sweep_cfg(tmp_path)
    assert main(["run", str(cfg_path)]) == 0
    assert (tmp_path / "from_config.csv").exists()
    # the hash ignores where the file goes
    a = load_config(str(cfg_path))
    raw = yaml.safe_load(dump_config(a))
    raw["output_path"] = "elsewhere.csv"
    assert parse_config(raw).digest() == a.digest()


def test_omega_grid_snapped_for_pairs(tmp_path):
    raw = point(experiment="driven_frequency_sweep", sweep={"axis": "omega", "min": 8.0, "max": 40.0, "points": 9})
    cfg = parse_config(raw)
    grid = cfg.grid()
    assert all(w % 8 == 0 for w in grid)
    assert list(grid) == sorted(set(grid))


# ---------------------------------------------------------------- single point


def test_single_point_without_bath(tmp_path):
    out = tmp_path / "zero.csv"
    assert main(["run", str(write(tmp_path, point(bath={"alpha": 0.0}))), "--output", str(out)]) == 0
    body = [ln for ln in out.read_text().splitlines() if not ln.startswith("#")]
    row = dict(zip(body[0].split(","), map(float, body[1].split(","))))
    assert abs(row["purity_loss"]) < 1e-9
    assert row["gamma_analytic"] == 0.0


def test_validate_output(tmp_path, capsys):
    assert main(["validate", str(write(tmp_path, point()))]) == 0
    out = capsys.readouterr().out
    keys = [ln.split(":")[0] for ln in out.splitlines()]
    assert {"gamma_analytic", "gamma_numeric", "initial_slope", "purity_loss", "rel_dev_rate"} <= set(keys)


def test_validate_undriven_heisenberg():
    cfg = parse_config(point(drive={"amplitude_ratio": 0.0}))
    rep = validate_point(cfg)
    b = OhmicBath(ALPHA, 1000.0, 0.01)
    expected = gamma_heisenberg(1.0, b) * interaction_time(1.0)
    assert rep["purity_loss"] == pytest.approx(expected, rel=0.15)
    assert rep["initial_slope"] == pytest.approx(rep["gamma_numeric"], rel=1e-2)


def test_validate_ising_loss_vanishes_with_temperature():
    losses = []
    for temp in (1e-2, 1e-3, 1e-4):
        raw = point(system={"interaction": "ising_xx"}, drive={"waveform": "none", "amplitude_ratio": None}, bath={"temperature": temp})
        del raw["drive"]["amplitude_ratio"]
        losses.append(validate_point(parse_config(raw))["purity_loss"])
    assert losses[0] > losses[1] > losses[2]
    assert losses[2] / losses[0] == pytest.approx(1e-2, rel=0.05)


def test_validate_alpha_zero():
    rep = validate_point(parse_config(point(bath={"alpha": 0.0})))
    assert rep["gamma_analytic"] == 0.0
    assert abs(rep["gamma_numeric"]) < 1e-12 and abs(rep["purity_loss"]) < 1e-9
