import csv
import json
import subprocess
import sys

import pytest

from travwave import cli
from travwave.profile import build_compacton
from travwave.potential import Potential
from travwave.verify import verify_profile


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_example(capsys):
    code, out, _ = run(["classify", "--config", '{"coeffs":[0,-1,1]}', "--h", "0"], capsys)
    assert code == 0
    rep = json.loads(out)
    (cls,) = rep["levels"][0]["classes"]
    assert cls["tag"] == "peaked-periodic"
    assert cls["attributes"]["period"] == pytest.approx(2.82842712, abs=1e-8)


def test_table_example(tmp_path, capsys):
    cfg = tmp_path / "ch.json"
    cfg.write_text('{"model": "ch", "c": -1, "kappa": 0, "r": 0}')
    code, out, _ = run(["table", "--config", str(cfg)], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["case"] == "iv" and rep["flipped"] is False
    rows = {r["label"]: r["tags"] for r in rep["rows"]}
    assert "peaked-solitary" in rows["h=h0=h2"]
    assert "smooth-periodic" in rows["h1<h<h0=h2"]


def test_profile_example(tmp_path, capsys):
    code, out, _ = run(["profile", "--coeffs", "0,0,-1,1", "--h", "0", "--out", str(tmp_path)], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["tag"] == "compacton"
    assert rep["class"]["attributes"]["support"] == pytest.approx(4.44288294, abs=1e-8)
    meta = json.loads((tmp_path / "profile_compacton.json").read_text())
    assert meta["tag"] == "compacton"
    with open(tmp_path / "profile_compacton.csv") as fh:
        header = next(csv.reader(fh))
    assert header == ["t", "u", "dudt", "singular"]
    assert (tmp_path / "report_profile.json").exists()


def test_verify_round_trip_matches_memory(tmp_path, capsys):
    run(["profile", "--coeffs", "0,0,-1,1", "--h", "0", "--out", str(tmp_path)], capsys)
    code, out, _ = run(["verify", "--profile", str(tmp_path / "profile_compacton.csv")], capsys)
    assert code == 0
    disk = json.loads(out)["report"]
    mem = json.loads(verify_profile(build_compacton(Potential([0, 0, -1, 1]))).dumps())
    assert disk["verdict"] == mem["verdict"] == "strong-singular"


def test_env_out_dir(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("TRAVWAVE_OUT", str(tmp_path))
    code, _, _ = run(["classify", "--coeffs", "0,-1,1", "--h", "h0"], capsys)
    assert code == 0 and (tmp_path / "report_classify.json").exists()


def test_exit_codes(capsys):
    assert run(["classify", "--coeffs", "0,1", "--h", "-1"], capsys)[0] == 1
    code, _, err = run(["classify", "--config", '{"coeffs": [0, 1'], capsys)
    assert code == 2 and "line 1" in err
    code, _, err = run(["classify", "--config", '{"coeffs": [0, 1], "bogus": 1}', "--h", "1"], capsys)
    assert code == 2 and "bogus" in err
    assert run(["classify", "--coeffs", "0,1"], capsys)[0] == 2  # missing h
    assert run(["classify", "--coeffs", "0,1", "--h", "1", "--tol", "-1"], capsys)[0] == 2
    assert run(["table", "--coeffs", "0,1", "--model", "ch"], capsys)[0] == 2
    assert run(["profile", "--coeffs", "0,-1,1", "--h", "0", "--tag", "compacton"], capsys)[0] == 1


def test_sweep_is_deterministic_across_jobs(capsys):
    a = run(["sweep", "--coeffs", "0,-1,1", "--h-grid=-1:1:7", "--jobs", "1"], capsys)[1]
    b = run(["sweep", "--coeffs", "0,-1,1", "--h-grid=-1:1:7", "--jobs", "2"], capsys)[1]
    assert a == b
    levels = json.loads(a)["levels"]
    assert [lv["h"] for lv in levels] == sorted(lv["h"] for lv in levels)


def test_conjecture_command(capsys):
    code, out, _ = run(["conjecture"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["hits"] == [] and rep["certified"] and rep["seed"] == 42
    code, out, _ = run(["conjecture", "--config", '{"grid": {"a": [3], "c": [-1], "kappa": [0], "r": [0]}}'], capsys)
    assert len(json.loads(out)["hits"]) == 1
    a = run(["conjecture", "--random-points", "5"], capsys)[1]
    b = run(["conjecture", "--random-points", "5"], capsys)[1]
    assert a == b


def test_model_params_flag(capsys):
    code, out, _ = run(["table", "--model", "mase", "--param", "c=1", "--param", "K=0"], capsys)
    assert code == 0
    assert json.loads(out)["model"] == "mase"


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "travwave", "classify", "--coeffs", "0,-1,1", "--h", "0"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "peaked-periodic" in r.stdout
