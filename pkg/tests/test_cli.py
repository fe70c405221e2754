import hashlib
import json
import subprocess
import sys
from argparse import Namespace

import pytest

from tau_lucas_lab.cli import CliConfig, resolve_config, run


@pytest.fixture
def env(tmp_path, monkeypatch):
    monkeypatch.setenv("TLL_CACHE_DIR", str(tmp_path / "cache"))
    monkeypatch.delenv("TLL_TABLE_BOUND", raising=False)
    monkeypatch.chdir(tmp_path)
    return tmp_path


def lines(capsys):
    return capsys.readouterr().out.splitlines()


def test_tau_value(env, capsys):
    assert run(["tau", "value", "2"]) == 0
    assert lines(capsys) == ["-24"]
    assert run(["tau", "value", "1"]) == 0
    assert lines(capsys) == ["1"]
    # a prime above the default bound forces a larger table
    assert run(["tau", "value", "10007"]) == 0
    assert lines(capsys)[0].lstrip("-").isdigit()


def test_omega_bound(env, capsys):
    cert = env / "cert.json"
    code = run(["omega-bound", "-p", "2", "-k", "12", "--ap", "-24", "-n", "210",
                "--certificate", str(cert)])
    out = dict(line.split("=", 1) for line in lines(capsys))
    assert code == 0 and out["a_priori"] == "5"
    assert json.loads(cert.read_text())["n"] == 210


def test_lucas_subcommands(env, capsys):
    assert run(["lucas", "pair", "-p", "2"]) == 0
    out = dict(line.split("=", 1) for line in lines(capsys))
    assert (out["nu"], out["P"], out["Q"]) == ("3", "-3", "32")
    assert run(["lucas", "u", "-n", "4"]) == 0
    assert lines(capsys) == ["165"]
    assert run(["lucas", "primitive", "-n", "3"]) == 0
    assert "primitive_part=23" in lines(capsys)


def test_exit_codes(env, capsys):
    assert run(["bogus"]) == 2
    assert run(["tau", "value", "0"]) == 2
    assert run(["lucas", "pair", "-p", "4", "--ap", "1"]) == 2
    assert run(["lucas", "pair", "-p", "2", "--ap", "0"]) == 2
    assert run(["--trial-bound", "0", "tau", "value", "2"]) == 2
    assert run(["tau", "value", "2", "--trial-bound", "0"]) == 2
    assert run(["lucas", "primitive", "-n", "31", "--trial-bound", "10", "--rho-cap", "1",
                "--time-cap-ms", "1"]) == 3
    capsys.readouterr()


def test_report_commands(env, capsys):
    assert run(["verify", "valuations", "--pmax", "30", "--nmax", "20"]) == 0
    assert lines(capsys)[0].startswith("experiment,p,")
    assert run(["satotate", "--bound", "10000", "--bins", "10", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc) == 10 and doc[0]["schema_version"] == "report_v1"
    assert run(["radical-report", "--nmax", "6", "--epsilon", "0.1", "--c", "1"]) == 0
    assert run(["verify", "norm-lemma", "--points", "1,100"]) == 0
    assert run(["theorem-tau", "-p", "2", "-r", "7"]) == 0
    capsys.readouterr()


def test_output_file(env, capsys):
    out = env / "o.csv"
    assert run(["theorem-tau", "-r", "5", "-o", str(out)]) == 0
    assert out.read_text().startswith("experiment,")
    assert capsys.readouterr().out == ""


def test_table_cache_idempotent(env, capsys):
    assert run(["tau", "table", "--bound", "300"]) == 0
    first = dict(line.split("=", 1) for line in lines(capsys))
    path = env / "cache" / "tau_table_300.txt"
    stamp, digest = path.stat().st_mtime_ns, hashlib.sha256(path.read_bytes()).hexdigest()
    assert first["reused"] == "false"
    assert run(["tau", "table", "--bound", "300"]) == 0
    second = dict(line.split("=", 1) for line in lines(capsys))
    assert second["reused"] == "true"
    assert path.stat().st_mtime_ns == stamp
    assert hashlib.sha256(path.read_bytes()).hexdigest() == digest


def test_corrupt_cache_rebuilt(env, capsys):
    run(["tau", "table", "--bound", "100"])
    path = env / "cache" / "tau_table_100.txt"
    path.write_text("junk")
    assert run(["tau", "table", "--bound", "100"]) == 0
    assert "reused=false" in lines(capsys)


def _ns(**kw):
    base = dict(config=None, cache_dir=None, table_bound=None, format=None, precision_bits=None,
                trial_bound=None, rho_cap=None, time_cap_ms=None)
    base.update(kw)
    return Namespace(**base)


def test_config_precedence(env):
    (env / "tau-lucas-lab.toml").write_text(
        "# comment\n[defaults]\ntable_bound = 500\ncache_dir = \"/from/file\"\nprecision_bits = 256\n"
    )
    cfg = resolve_config(_ns(), environ={})
    assert (cfg.table_bound, str(cfg.cache_dir), cfg.precision_bits) == (500, "/from/file", 256)
    cfg = resolve_config(_ns(), environ={"TLL_TABLE_BOUND": "700", "TLL_CACHE_DIR": "/env"})
    assert (cfg.table_bound, str(cfg.cache_dir)) == (700, "/env")
    cfg = resolve_config(_ns(table_bound=900), environ={"TLL_TABLE_BOUND": "700"})
    assert cfg.table_bound == 900
    with pytest.raises(ValueError):
        CliConfig(table_bound=5)
    with pytest.raises(ValueError):
        CliConfig(precision_bits=32)


def test_console_entry_point(env):
    proc = subprocess.run(
        [sys.executable, "-m", "tau_lucas_lab.cli", "tau", "value", "3"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout == "252\n"
