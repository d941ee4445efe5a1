"""
Config defaults, environment overrides, config files and run settings.
"""

from pathlib import Path

import pytest

from cataverify import config
from cataverify.config import (
    RunConfig,
    envOrDefault,
    loadRunConfig,
    toArgs,
    toBool,
    toIntTuple,
)
from cataverify.errors import ConfigError


@pytest.fixture(autouse=True)
def no_default_config(tmp_path, monkeypatch):
    # Keep a stray cataverify.cfg in the working dir out of these tests
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("CATA_SOLVER", raising=False)
    monkeypatch.setattr(config, "SOLVER_PATH", None)


def test_env_or_default(monkeypatch):
    monkeypatch.setenv("CATA_TEST_VALUE", "12")
    assert envOrDefault("CATA_TEST_VALUE", 3, int) == 12
    assert envOrDefault("CATA_TEST_VALUE", 3) == "12"
    monkeypatch.setenv("CATA_TEST_VALUE", "twelve")
    assert envOrDefault("CATA_TEST_VALUE", 3, int) == 3
    assert envOrDefault("CATA_NOT_SET_ANYWHERE", "x") == "x"


@pytest.mark.parametrize(
    "val, out", [("yes", True), ("1", True), (" On ", True), ("no", False), ("", False), (True, True)]
)
def test_to_bool(val, out):
    assert toBool(val) is out


def test_to_bool_invalid():
    with pytest.raises(ValueError):
        toBool("maybe")


def test_converters():
    assert toIntTuple("0, 1,2") == (0, 1, 2)
    assert toIntTuple((4,)) == (4,)
    assert toArgs("-in  -smt2") == ("-in", "-smt2")


def test_run_config_defaults():
    cfg = RunConfig()
    assert cfg.emit == "both"
    assert not cfg.baseline
    assert cfg.bench_db == cfg.output_dir / "bench-history.db"


def test_run_config_absolute_db(tmp_path):
    cfg = RunConfig(output_dir="x", bench_db=tmp_path / "h.db")
    assert cfg.bench_db == tmp_path / "h.db"
    assert cfg.output_dir == Path("x")


@pytest.mark.parametrize(
    "kwargs",
    [
        {"emit": "xml"},
        {"jobs": 0},
        {"iteration_cap": 0},
        {"problem_timeout_s": -1},
        {"smt_backend": "cvc5"},
    ],
)
def test_run_config_invalid(kwargs):
    with pytest.raises(ConfigError):
        RunConfig(**kwargs)


def test_ensure_output_dir(tmp_path):
    cfg = RunConfig(output_dir=tmp_path / "a" / "b")
    assert cfg.ensureOutputDir().is_dir()


def test_config_file_and_overrides(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(
        "CATA_ITERATION_CAP=50\ntrace=yes\nemit=prolog\nsolver_args=-v:0 -t:5\n",
        encoding="utf-8",
    )
    cfg = loadRunConfig(None, str(path))
    assert cfg.iteration_cap == 50
    assert cfg.trace is True
    assert cfg.emit == "prolog"
    assert cfg.solver_args == ("-v:0", "-t:5")

    cfg = loadRunConfig({"iteration_cap": 7, "trace": None, "command": "verify"}, str(path))
    assert cfg.iteration_cap == 7
    assert cfg.trace is True


def test_default_config_file(tmp_path):
    (tmp_path / "cataverify.cfg").write_text("jobs=3\n", encoding="utf-8")
    assert loadRunConfig().jobs == 3


@pytest.mark.parametrize(
    "text, match",
    [("colour=blue\n", "Unknown config key"), ("iteration_cap=many\n", "Invalid value")],
)
def test_config_file_errors(tmp_path, text, match):
    path = tmp_path / "bad.cfg"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(ConfigError, match=match):
        loadRunConfig(None, str(path))


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        loadRunConfig(None, str(tmp_path / "nope.cfg"))


def test_solver_from_environment(monkeypatch):
    monkeypatch.setenv("CATA_SOLVER", "/opt/eldarica/eld")
    assert loadRunConfig().solver_path == "/opt/eldarica/eld"
    assert loadRunConfig({"solver_path": "z3"}).solver_path == "z3"
