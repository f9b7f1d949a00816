import json

import numpy as np
import pytest

from rezqu import __version__
from rezqu.cli import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, EXIT_STAGNATION, main
from rezqu.config import parse_config
from rezqu.experiments import SweepResult, frequency_grid, read_preamble


def write(tmp_path, data, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def run(tmp_path, experiment, data=None, *flags):
    out = tmp_path / f"{experiment}.out"
    args = [experiment, "--out", str(out), *flags]
    if data is not None:
        args += ["--config", write(tmp_path, {"experiment": experiment, **data})]
    return main(args), out


SMALL_IDLING = {"params": {"f_q_start_ghz": 6.2, "f_q_stop_ghz": 6.8, "f_q_step_ghz": 0.1}}


def test_reproducible_output_is_byte_identical(tmp_path):
    code1, out = run(tmp_path, "idling-sweep", SMALL_IDLING, "--reproducible", "--workers", "1")
    first = out.read_bytes()
    code2, out = run(tmp_path, "idling-sweep", SMALL_IDLING, "--reproducible", "--workers", "2")
    assert code1 == code2 == EXIT_OK
    assert out.read_bytes() == first
    assert b"# timestamp" not in first


def test_timestamp_without_reproducible(tmp_path):
    code, out = run(tmp_path, "error-budget")
    assert code == EXIT_OK
    assert "timestamp" in read_preamble(out.read_text())


def test_preamble_roundtrip(tmp_path):
    data = {"params": {"gamma_per_ns": 0.5, "t_meas_ns": 10.0}, "seed": 3}
    code, out = run(tmp_path, "measurement", data, "--reproducible")
    assert code == EXIT_OK
    meta = read_preamble(out.read_text())
    assert meta["tool"] == f"rezqu {__version__}"
    cfg = parse_config(json.loads(meta["config"]))
    assert cfg.params.gamma_per_ns == 0.5 and cfg.seed == 3
    assert cfg.sha256() == meta["config_sha256"]
    assert float(meta["summary.ratio"]) > 0


def test_csv_table(tmp_path):
    code, out = run(tmp_path, "idling-sweep", SMALL_IDLING, "--reproducible")
    rows = [line.split(",") for line in out.read_text().splitlines() if not line.startswith("#")]
    assert rows[0] == ["g_ghz", "f_q_ghz", "omega_zz_exact_nogd_mhz", "omega_zz_exact_gd_mhz", "omega_zz_4th_mhz"]
    assert len({len(r) for r in rows}) == 1 and len(rows) == 1 + 2 * 7
    mid = [r for r in rows[1:] if float(r[1]) == 6.5]
    assert all(float(r[4]) == 0.0 for r in mid)
    # 17 significant digits
    assert any(len(v.replace(".", "").replace("-", "").lstrip("0").split("e")[0]) == 17 for v in rows[1])


def test_json_output(tmp_path):
    code, out = run(tmp_path, "lz-estimate", {"params": {"oracle": False}}, "--format", "json", "--reproducible")
    doc = json.loads(out.read_text())
    assert code == EXIT_OK
    assert set(doc) == {"metadata", "summary", "columns", "records"}
    assert doc["columns"]["lz_qubit_qubit_oracle"] == [None, None, None]
    assert doc["metadata"]["config"]["experiment"] == "lz-estimate"


def test_stdout(capsys):
    assert main(["error-budget", "--reproducible"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("# tool: rezqu")


@pytest.mark.parametrize(
    "data",
    [
        {"params": {"bogus": 1}},
        {"params": {"f_q_start_ghz": 5.5}},  # outside (f_b, f_m)
    ],
)
def test_config_errors_exit_2(tmp_path, data):
    code, _ = run(tmp_path, "idling-sweep", data)
    assert code == EXIT_CONFIG


def test_experiment_mismatch_exit_2(tmp_path):
    path = write(tmp_path, {"experiment": "spectrum"})
    assert main(["measurement", "--config", path]) == EXIT_CONFIG


def test_numerical_failure_exit_3(tmp_path):
    # qubit on the memory with Gamma = 4 g: decaying eigenvectors coalesce
    data = {"params": {"f_q_ghz": 7.0, "gamma_per_ns": 4 * 2 * np.pi * 0.025}}
    code, _ = run(tmp_path, "measurement", data)
    assert code == EXIT_NUMERICAL


def test_stagnation_soft_and_strict(tmp_path, capsys):
    data = {"params": {"mode": "two_param", "n_starts": 1, "max_evals": 4, "target_error": 1e-30, "sample_every_ns": 1.0}}
    code, out = run(tmp_path, "move-optimize", data, "--reproducible")
    assert code == EXIT_OK
    assert "warning" in capsys.readouterr().err
    assert (tmp_path / "move-optimize.design.json").exists()
    code, _ = run(tmp_path, "move-optimize", data, "--reproducible", "--strict")
    assert code == EXIT_STAGNATION


def test_sweep_result_checks_width():
    with pytest.raises(ValueError):
        SweepResult(["a", "b"], [(1.0,)])


def test_frequency_grid():
    g = frequency_grid(6.1, 6.9, 0.02)
    assert len(g) == 41 and g[0] == 6.1 and g[-1] == 6.9 and 6.5 in g
