import csv
import re
import subprocess
import sys

import pytest

from kasha.catalog import BUNDLED, estimate_timescale, load_dye
from kasha.cli import main
from kasha.experiments import EXPERIMENTS

SMALL_DYNAMICS = """
[aggregate]
N = 3
[modes]
n_max = 2
s = 0.1
[dynamics]
method = mcwf
band = exact
n_traj = 20
n_times = 11
t_max = 2 1/kappa
"""


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_no_experiment_prints_usage(capsys):
    assert main([]) == 2
    err = capsys.readouterr().err
    assert "usage: kasha" in err
    for name in EXPERIMENTS:
        assert name in err


def test_module_entry_point_exits_with_usage():
    proc = subprocess.run([sys.executable, "-m", "kasha.cli"], capture_output=True, text=True, check=False)
    assert proc.returncode == 2
    assert "table1" in proc.stderr


def test_empty_config_is_a_usage_error(tmp_path, capsys):
    cfg = tmp_path / "empty.ini"
    cfg.write_text("")
    assert main(["run", "--config", str(cfg)]) == 2
    assert "choose an experiment" in capsys.readouterr().err


def test_table1_writes_three_rows(tmp_path, capsys):
    assert main(["table1", "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "table1.csv")
    assert len(rows) == 4
    header, body = rows[0], rows[1:]
    col = header.index("timescale [fs]")
    for key, row in zip(BUNDLED, body):
        assert float(row[col]) == estimate_timescale(load_dye(key))
    status = {row[0]: row[header.index("status")] for row in body}
    assert status == {"Cresyl Violet": "ok", "Rhodamine 800": "discrepancy", "BChl a": "ok"}
    assert "flagged = Rhodamine 800" in capsys.readouterr().out
    meta = (tmp_path / "metadata.ini").read_text()
    assert "[provenance]" in meta and "numpy" in meta and "seed = 0" in meta


def test_metadata_rerun_is_bit_identical(tmp_path):
    cfg = tmp_path / "in.ini"
    cfg.write_text(SMALL_DYNAMICS)
    first, second = tmp_path / "a", tmp_path / "b"
    assert main(["kasha-dynamics", "--config", str(cfg), "--out", str(first), "--seed", "17"]) == 0
    assert main(["run", "--config", str(first / "metadata.ini"), "--out", str(second)]) == 0
    assert (first / "populations.csv").read_bytes() == (second / "populations.csv").read_bytes()
    header = _rows(first / "populations.csv")[0]
    assert header[0].startswith("time [")
    assert header[1] == "p_k=0"


def test_seed_override_changes_trajectories(tmp_path):
    cfg = tmp_path / "in.ini"
    cfg.write_text(SMALL_DYNAMICS)
    main(["kasha-dynamics", "--config", str(cfg), "--out", str(tmp_path / "a"), "--seed", "1"])
    main(["kasha-dynamics", "--config", str(cfg), "--out", str(tmp_path / "b"), "--seed", "2", "--n-traj", "20"])
    assert (tmp_path / "a" / "populations.csv").read_bytes() != (tmp_path / "b" / "populations.csv").read_bytes()


@pytest.mark.parametrize(
    "text, match",
    [
        ("[aggregate]\nN = 3\ncolour = blue\n", r"unknown configuration keys: \[aggregate\] colour"),
        ("[aggregate]\nN = 3\n[dynamics]\nt_max = 5 parsecs\n", r"\[dynamics\] t_max"),
        ("[aggregate]\nN = three\n", r"\[aggregate\] N"),
        ("[run]\nexperiment = figure9\n", "unknown; choose from"),
    ],
)
def test_config_errors_name_the_field(tmp_path, capsys, text, match):
    cfg = tmp_path / "bad.ini"
    cfg.write_text(text)
    command = "run" if "experiment" in text else "kasha-dynamics"
    assert main([command, "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2
    assert re.search(match, capsys.readouterr().err)


def test_trajectory_count_only_for_trajectory_experiments(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["table1", "--n-traj", "5"])
    assert exc.value.code == 2
    cfg = tmp_path / "t.ini"
    cfg.write_text("[run]\nexperiment = table1\n")
    assert main(["run", "--config", str(cfg), "--n-traj", "5", "--out", str(tmp_path / "o")]) == 2
    assert "--n-traj does not apply" in capsys.readouterr().err


def test_oversized_system_reports_memory(tmp_path, capsys):
    cfg = tmp_path / "big.ini"
    cfg.write_text("[dynamics]\nmethod = mcwf\n")
    assert main(["kasha-dynamics", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2
    assert "MiB" in capsys.readouterr().err


@pytest.mark.parametrize("name", ["band", "rates"])
def test_tabulating_experiments_run(tmp_path, name):
    assert main([name, "--out", str(tmp_path)]) == 0
    assert (tmp_path / "metadata.ini").exists()
    assert any(p.suffix == ".csv" for p in tmp_path.iterdir())


def test_scaling_scan_small(tmp_path, capsys):
    cfg = tmp_path / "scan.ini"
    cfg.write_text("[scan]\nn_max = 1..4\nn_realizations = 5\n")
    assert main(["scaling-scan", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 0
    rows = _rows(tmp_path / "o" / "scaling.csv")
    assert len(rows) == 5
