import csv
import json

import pytest

from lmglab.cli import main, parse_config
from lmglab.io import ConfigError, OutputTable, RunConfig, fmt


def run(tmp_path, args):
    return main(args)


def test_parse_flags():
    cfg = parse_config(["spectrum", "--lambda", "1.5", "--n", "1000", "--out", "s.csv"])
    assert cfg.command == "spectrum"
    assert cfg.lam == 1.5
    assert cfg.n == 1000
    assert cfg.out == "s.csv"
    assert cfg.resolution == 256
    cfg = parse_config(["scaling", "--preset", "gap13"])
    assert cfg.resolution == 2048


def test_flags_override_config_file(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"lambda": 1.0, "n": 100, "n_list": [500, 750, 1000]}))
    cfg = parse_config(
        ["scaling", "--preset", "gap13", "--config", str(path), "--out", "d/"]
    )
    assert cfg.n_list == [500, 750, 1000]
    assert cfg.out == "d/"
    assert cfg.lam == 1.0
    cfg2 = parse_config(
        ["scaling", "--preset", "gap13", "--config", str(path), "--lambda", "2.0"]
    )
    assert cfg2.lam == 2.0


def test_invalid_lambda_names_key():
    with pytest.raises(ConfigError) as err:
        parse_config(["spectrum", "--lambda", "-1", "--n", "10"])
    assert err.value.key == "lambda"
    assert "lambda" in str(err.value)


def test_exit_code_invalid_config(capsys):
    assert main(["spectrum", "--lambda", "-1", "--n", "10"]) == 2
    assert "lambda" in capsys.readouterr().err
    assert main(["spectrum", "--lambda", "1.0"]) == 2  # n missing
    assert main(["eigvec", "--lambda", "1.0", "--n", "10"]) == 2  # sector missing
    assert main(["scaling"]) == 2  # preset missing


def test_exit_code_io_failure():
    rc = main(["spectrum", "--lambda", "0", "--n", "4", "--out", "/no-such-dir/x.csv"])
    assert rc == 4


def test_spectrum_output_columns_and_values(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["spectrum", "--lambda", "0", "--n", "4", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    header = [ln for ln in lines if ln.startswith("#")]
    body = [ln for ln in lines if not ln.startswith("#")]
    assert any("config" in h for h in header)
    assert body[0] == "global_index,sector,sector_index,energy,K"
    energies = [float(row.split(",")[3]) for row in body[1:]]
    assert energies == [-2.0, -1.0, 0.0, 1.0, 2.0]


def test_byte_identical_reruns(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["wkb", "--lambda", "1.5", "--n", "40", "--count", "6", "--resolution", "128"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_csv_roundtrip_17_digits(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["spectrum", "--lambda", "1.7", "--n", "30", "--out", str(out)]) == 0
    with open(out) as fh:
        rows = [r for r in csv.reader(ln for ln in fh if not ln.startswith("#"))]
    header, data = rows[0], rows[1:]
    k_col = header.index("K")
    from lmglab import ModelParams, merged_spectrum

    spec = merged_spectrum(ModelParams(1.7, 30))
    for row, level in zip(data, spec.levels):
        assert float(row[k_col]) == level.scaled_energy  # exact round-trip


def test_config_echo_roundtrip():
    cfg = RunConfig(command="spectrum", lam=1.5, n=100).validate()
    echoed = json.loads(cfg.echo())
    rebuilt = RunConfig(**{("lam" if k == "lambda" else k): v for k, v in echoed.items()})
    assert rebuilt.validate().echo() == cfg.echo()


def test_sweep_preset_writes_directory(tmp_path):
    out = tmp_path / "sweep"
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n_list": [100, 200, 400]}))
    rc = main(
        [
            "scaling",
            "--preset",
            "gap13",
            "--config",
            str(cfg),
            "--resolution",
            "256",
            "--out",
            str(out) + "/",
        ]
    )
    assert rc == 0
    names = sorted(p.name for p in out.iterdir())
    assert names == ["gap13_fit.csv", "gap13_sweep.csv"]
    fit_lines = (out / "gap13_fit.csv").read_text().splitlines()
    assert fit_lines[-2] == "slope,amplitude,r_squared,n_points,residual_max"


def test_table_rejects_ragged_rows():
    table = OutputTable("t", ["a", "b"], [(1, 2), (3,)])
    with pytest.raises(ValueError):
        table.render()


def test_fmt_serialization():
    assert fmt(True) == "1"
    assert fmt(False) == "0"
    assert fmt(3) == "3"
    assert float(fmt(0.1)) == 0.1
    assert fmt("even") == "even"


def test_validate_rejects_bad_resolution_and_lists():
    with pytest.raises(ConfigError):
        RunConfig(command="spectrum", resolution=100).validate()
    with pytest.raises(ConfigError):
        RunConfig(command="spectrum", resolution=32).validate()
    with pytest.raises(ConfigError):
        RunConfig(command="scaling", n_list=[100, 100, 200]).validate()
    with pytest.raises(ConfigError):
        RunConfig(command="scaling", n_list=[200, 100]).validate()
    with pytest.raises(ConfigError):
        RunConfig(command="nope").validate()
