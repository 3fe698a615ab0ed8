import numpy as np
import pytest

from hetnet_amp import cli


def test_parse_config_roundtrip(tmp_path):
    path = tmp_path / "exp.cfg"
    path.write_text(
        """
        # acceptance-style experiment
        M = 4
        L = 16
        eps = 0.1
        trials = 2
        strategies = proposed1, bernoulli
        sweep_L = 16, 32
        fixed_pilots = true
        """
    )
    cfg = cli.parse_config(str(path))
    assert cfg["M"] == 4 and cfg["eps"] == 0.1
    assert cfg["strategies"] == ["proposed1", "bernoulli"]
    assert cfg["sweep_L"] == [16, 32]
    assert cfg["fixed_pilots"] is True
    spec = cli.spec_from_config(cfg)
    assert spec.base.M == 4
    assert spec.sweep == {"L": [16, 32]}


def test_parse_config_rejects_junk(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("M 4\n")
    with pytest.raises(ValueError):
        cli.parse_config(str(path))
    path.write_text("warp_factor = 9\n")
    with pytest.raises(ValueError):
        cli.parse_config(str(path))
    path.write_text("M = lots\n")
    with pytest.raises(ValueError):
        cli.parse_config(str(path))


def test_pilots_command(capsys):
    assert cli.main(["pilots", "--strategy", "proposed1", "--L", "16", "--N", "20"]) == 0
    out = capsys.readouterr().out
    assert "strategy=proposed1" in out
    assert "column norms" in out


def test_se_command(capsys):
    rc = cli.main(["se", "--L", "16", "--N", "40", "--M", "2",
                   "--samples", "2000", "--steps", "10"])
    assert rc == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("t=0 tau2=")
    tau = [float(l.split("tau2=")[1]) for l in lines]
    assert all(np.diff(tau) <= 1e-12)


def test_run_command_end_to_end(tmp_path, capsys):
    cfgfile = tmp_path / "exp.cfg"
    cfgfile.write_text(
        "M = 2\nN = 20\nL = 16\neps = 0.15\nmax_iters = 10\n"
        "num_thresholds = 8\nstrategies = proposed2\n"
    )
    out = tmp_path / "res" / "exp"
    rc = cli.main(["run", "--config", str(cfgfile), "--trials", "2",
                   "--seed", "3", "--output", str(out)])
    assert rc == 0
    assert (tmp_path / "res" / "exp_roc.csv").exists()
    assert (tmp_path / "res" / "exp_store.npz").exists()

    # re-derive the ROC CSV from the store: byte identical
    again = tmp_path / "res" / "again.csv"
    assert cli.main(["roc", "--store", str(out) + "_store.npz", "--out", str(again)]) == 0
    assert again.read_bytes() == (tmp_path / "res" / "exp_roc.csv").read_bytes()
    again2 = tmp_path / "res" / "again_rrmse.csv"
    assert cli.main(["rrmse", "--store", str(out) + "_store.npz", "--out", str(again2)]) == 0
    assert again2.read_bytes() == (tmp_path / "res" / "exp_rrmse.csv").read_bytes()


def test_run_command_set_overrides(tmp_path):
    out = tmp_path / "exp"
    rc = cli.main(["run", "--set", "M=2", "--set", "N=20", "--set", "L=16",
                   "--set", "eps=0.15", "--set", "max_iters=10",
                   "--set", "num_thresholds=8", "--set", "strategies=bernoulli",
                   "--trials", "2", "--output", str(out)])
    assert rc == 0
    header = (tmp_path / "exp_roc.csv").read_text().splitlines()[0]
    assert header == "strategy,csi_mode,L,M,eps,zeta,pfa,pmd,trials"
    with pytest.raises(SystemExit):
        cli.main(["run", "--set", "garbage"])
