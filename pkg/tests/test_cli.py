import json

import numpy as np
import pytest

from stablecomp import SpectralRep, fn_to_json, max_abs_power
from stablecomp.cli import main


@pytest.fixture
def rep_file(tmp_path):
    rep = SpectralRep.from_atoms(1.5, [(1.0, (1.0, 0.3)), (0.5, (-0.2, 1.0))])
    path = tmp_path / "rep.json"
    path.write_text(rep.to_json())
    return path


def test_sample_csv(tmp_path, rep_file):
    out = tmp_path / "draws.csv"
    rc = main(["sample", "--rep", str(rep_file), "-N", "200", "--seed", "1",
               "--out", str(out)])
    assert rc == 0
    data = np.loadtxt(out, delimiter=",", skiprows=1)
    assert data.shape == (200, 2)


def test_sample_binary_sidecar(tmp_path, rep_file):
    out = tmp_path / "draws.bin"
    rc = main(["sample", "--rep", str(rep_file), "-N", "64", "--seed", "2",
               "--out", str(out), "--format", "bin"])
    assert rc == 0
    header = json.loads((tmp_path / "draws.bin.json").read_text())
    assert header["shape"] == [64, 2]


def test_cf_check(rep_file):
    assert main(["cf-check", "--rep", str(rep_file), "--reps", "3"]) == 0
    assert main(["cf-check", "--reps", "5", "--seed", "7"]) == 0


def test_moments_with_oracle(capsys):
    rc = main(["moments", "--p", "-0.5", "--q", "1.0", "--oracle", "--json"])
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    assert out["c_pq"] == pytest.approx(np.sqrt(2.0), rel=1e-12)
    assert out["rel_diff"] <= 1e-6


def test_moments_usage_error():
    # nonexistent moment is a configuration error
    assert main(["moments", "--p", "1.5", "--q", "1.0"]) == 2


def test_verify_lemma1(tmp_path):
    out = tmp_path / "trials.jsonl"
    rc = main(["verify", "lemma1", "--trials", "500", "--seed", "3",
               "--q", "1.0", "--q", "2.0", "--out-jsonl", str(out)])
    assert rc == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 1000
    rec = json.loads(lines[0])
    assert rec["passed"] is True and rec["mode"] == "lemma1"


def test_verify_prop1_csv(tmp_path):
    out = tmp_path / "summary.csv"
    rc = main(["verify", "prop1", "--trials", "10", "--seed", "4",
               "--out-csv", str(out)])
    assert rc == 0
    assert out.read_text().startswith("index,mode,margin")


def test_verify_config_file_with_flag_override(tmp_path):
    config = {"trials": 3, "seed": 5, "q_values": [1.0], "n_values": [2]}
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps(config))
    rc = main(["verify", "prop1", "--config", str(cfg), "--trials", "7",
               "--out-jsonl", str(tmp_path / "t.jsonl")])
    assert rc == 0
    lines = (tmp_path / "t.jsonl").read_text().strip().splitlines()
    assert len(lines) == 7  # flag overrode the file value


def test_verify_invalid_config():
    assert main(["verify", "cor3", "--trials", "1", "--p", "-0.5"]) == 2


def test_pd_check_builtin(capsys):
    rc = main(["pd-check", "--builtin", "max-abs", "2", "-1.5", "--json"])
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    assert out["verdict"] == "consistent-with-pd"


def test_pd_check_descriptor_file(tmp_path):
    path = tmp_path / "fn.json"
    path.write_text(fn_to_json(max_abs_power(2, -1.8)))
    assert main(["pd-check", "--fn", str(path)]) == 0


def test_oracle_mode(tmp_path):
    rc = main(["oracle", "--trials", "1", "-N", "100000", "--seed", "1",
               "--q", "1.5", "--out-csv", str(tmp_path / "o.csv")])
    assert rc == 0


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nonsense-mode"])
    assert exc.value.code == 2
