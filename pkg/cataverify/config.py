"""
Verifier config.

This is the global config for all of the verifier.
This file contains sane defaults for every tunable. Any of them can be
overridden from the environment via the `envOrDefault` function, using the
``CATA_`` prefixed name of the setting.

Per run settings are collected in a `RunConfig` by `loadRunConfig`. The order
of precedence, from lowest to highest, is: the defaults here, the environment,
a ``key=value`` config file (loaded via ``dotenv``), and lastly any command
line flags.
"""

import os
import logging

from dataclasses import dataclass, field, fields
from typing import Any

from pathlib import Path

from dotenv import dotenv_values

from .errors import ConfigError

# We set logging up as early as possible. If there is a CATA_LOGLEVEL
# environment variable, we expect it to be "DEBUG", "INFO", etc. If this is a
# valid log level we will set to that level, else fall back to INFO
LOGLEVEL = os.getenv("CATA_LOGLEVEL") or "INFO"
logging.basicConfig(level=getattr(logging, LOGLEVEL, logging.INFO))

logger = logging.getLogger(__name__)


def envOrDefault(key: str, default: Any = None, conv: callable = None) -> Any:
    """
    Function to return a config value from the environment, or default if not
    defined in the environment.

    By default environment variables will be string values. If the stored value
    in this config file should be any other type, the ``conv`` argument can be
    used to supply a callable that can be used to convert the string to another
    type.

    If the callable raises and error, the ``default`` value passed in will be
    used as the final value.

    Args:
        key: The name of the environment variable
        default: Default value to return if key is not set in the environment
        conv: If supplied this can be a callable that can be used to convert
            the environment string values to another type. See above.
    """
    val = os.getenv(key, None)

    # We assume if we get a None, then the value does not exist, so we return
    # the default
    if val is None:
        return default

    logger.debug("Config [%s] set from environment", key)

    if callable(conv):
        try:
            val = conv(val)
        except Exception:  # pylint: disable=broad-exception-caught
            val = default

    return val


def toBool(val: str | bool) -> bool:
    """
    Converts a config string like ``"yes"``, ``"1"`` or ``"false"`` to a bool.

    Raises:
        ValueError: if the string is not recognised.
    """
    if isinstance(val, bool):
        return val
    low = val.strip().lower()
    if low in ("1", "yes", "true", "on"):
        return True
    if low in ("0", "no", "false", "off", ""):
        return False
    raise ValueError(f"Not a boolean value: {val!r}")


def toIntTuple(val: str | tuple) -> tuple[int, ...]:
    """
    Converts a comma separated string of ints to a tuple.
    """
    if isinstance(val, tuple):
        return val
    return tuple(int(v) for v in val.split(",") if v.strip())


def toArgs(val: str | tuple) -> tuple[str, ...]:
    """
    Splits a space separated argument string into a tuple.
    """
    if isinstance(val, tuple):
        return val
    return tuple(val.split())


### The CHC backend
# Path to the CHC solver executable. When not set, the CATA_SOLVER environment
# variable is used, then a z3 found on the PATH, and lastly the bundled z3
# runner process.
SOLVER_PATH = envOrDefault("CATA_SOLVER_PATH")
# Extra flags passed to the CHC solver before the script file name.
SOLVER_ARGS = envOrDefault("CATA_SOLVER_ARGS", (), toArgs)

### The constraint engine
# The SMT solver used for sat/entailment queries. Defaults to z3 on the PATH.
SMT_PATH = envOrDefault("CATA_SMT_PATH")
# Flags that put the SMT solver in interactive stdin mode.
SMT_ARGS = envOrDefault("CATA_SMT_ARGS", ("-in", "-smt2"), toArgs)
# Constraint Addition needs existential queries, so this is not QF_LIA.
SMT_LOGIC = envOrDefault("CATA_SMT_LOGIC", "ALL")
# One of auto, process or z3api
SMT_BACKEND = envOrDefault("CATA_SMT_BACKEND", "auto")

# Per query timeout for the constraint engine
QUERY_TIMEOUT_MS = envOrDefault("CATA_QUERY_TIMEOUT_MS", 5000, int)
# Per problem timeout for the CHC backend
PROBLEM_TIMEOUT_S = envOrDefault("CATA_PROBLEM_TIMEOUT_S", 120, int)

### The transformer
# Safety valve for the Define/Unfold/Apply-Contracts loop. Should never fire.
ITERATION_CAP = envOrDefault("CATA_ITERATION_CAP", 1000, int)
# Constructor specialization stops at this pattern depth
SPECIALIZE_DEPTH = envOrDefault("CATA_SPECIALIZE_DEPTH", 4, int)

### The bounded least model oracle
ORACLE_DEPTH = envOrDefault("CATA_ORACLE_DEPTH", 3, int)
ORACLE_VALUES = envOrDefault("CATA_ORACLE_VALUES", (0, 1, 2), toIntTuple)
ORACLE_CAP = envOrDefault("CATA_ORACLE_CAP", 200_000, int)

### Benchmarks
# Bundled corpus relative to the top level dir
CORPUS_DIR = envOrDefault("CATA_CORPUS_DIR", "corpus")
OUTPUT_DIR = envOrDefault("CATA_OUTPUT_DIR", "out")
# Worker pool size for bench runs
BENCH_JOBS = envOrDefault("CATA_BENCH_JOBS", min(4, os.cpu_count() or 1), int)
# SQLite file for the bench history. Relative paths are in the output dir.
BENCH_DB = envOrDefault("CATA_BENCH_DB", "bench-history.db")

# The default config file, only used if it exists.
CONFIG_FILE = envOrDefault("CATA_CONFIG_FILE", "cataverify.cfg")

# Pick up the version from the VERSION file in the top level dir
try:
    with open(
        Path(__file__).resolve().parent.parent / "VERSION", "r", encoding="utf-8"
    ) as f:
        VERSION = f.readline().strip()
except Exception:  # pylint: disable=broad-exception-caught
    VERSION = "unknown"


# A config is a plain bag of settings, so @pylint: disable=too-many-instance-attributes
@dataclass
class RunConfig:
    """
    Settings for a single run of the command line tool.

    Attributes:
        inputs: Input files or directories.
        solver_path: CHC solver executable, or None to auto detect.
        solver_args: Extra CHC solver flags.
        smt_path: SMT solver executable for the constraint engine.
        smt_args: Flags to run the SMT solver interactively.
        smt_logic: The ``set-logic`` for constraint queries.
        smt_backend: ``auto``, ``process`` or ``z3api``.
        query_timeout_ms: Per query constraint engine timeout.
        problem_timeout_s: Per problem CHC solver timeout.
        iteration_cap: Transformer loop cap.
        tuple_zygo: Tuple zygomorphisms into plain catamorphisms first.
        per_contract: Transform and solve one contract at a time.
        trace: Write the step log.
        emit: Output formats, ``both``, ``prolog`` or ``smt2``.
        baseline: Skip the transformation and emit ADT clauses directly.
        output_dir: Where artifacts are written.
        jobs: Bench worker pool size.
        bench_db: Bench history database.
    """

    inputs: list[Path] = field(default_factory=list)
    solver_path: str | None = SOLVER_PATH
    solver_args: tuple[str, ...] = SOLVER_ARGS
    smt_path: str | None = SMT_PATH
    smt_args: tuple[str, ...] = SMT_ARGS
    smt_logic: str = SMT_LOGIC
    smt_backend: str = SMT_BACKEND
    query_timeout_ms: int = QUERY_TIMEOUT_MS
    problem_timeout_s: int = PROBLEM_TIMEOUT_S
    iteration_cap: int = ITERATION_CAP
    tuple_zygo: bool = False
    per_contract: bool = False
    trace: bool = False
    emit: str = "both"
    baseline: bool = False
    output_dir: Path = Path(OUTPUT_DIR)
    jobs: int = BENCH_JOBS
    bench_db: Path = Path(BENCH_DB)

    def __post_init__(self):
        self.inputs = [Path(p) for p in self.inputs]
        self.output_dir = Path(self.output_dir)
        self.bench_db = Path(self.bench_db)
        if not self.bench_db.is_absolute():
            self.bench_db = self.output_dir / self.bench_db

        if self.query_timeout_ms <= 0 or self.problem_timeout_s <= 0:
            raise ConfigError("Timeouts must be greater than 0.")
        if self.iteration_cap <= 0:
            raise ConfigError("The iteration cap must be greater than 0.")
        if self.jobs <= 0:
            raise ConfigError("The number of jobs must be greater than 0.")
        if self.emit not in ("both", "prolog", "smt2"):
            raise ConfigError(f"Unknown emit format: {self.emit}")
        if self.smt_backend not in ("auto", "process", "z3api"):
            raise ConfigError(f"Unknown SMT backend: {self.smt_backend}")

    def ensureOutputDir(self) -> Path:
        """
        Creates the output directory if needed and checks it is writable.

        Raises:
            ConfigError: if the directory can not be used.
        """
        try:
            self.output_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise ConfigError(
                f"Can not create output directory {self.output_dir}: {exc}"
            ) from exc
        if not os.access(self.output_dir, os.W_OK):
            raise ConfigError(f"Output directory {self.output_dir} is not writable.")
        return self.output_dir


# Converters for settings that may come in as strings from a config file
_CONVERTERS = {
    "solver_args": toArgs,
    "smt_args": toArgs,
    "query_timeout_ms": int,
    "problem_timeout_s": int,
    "iteration_cap": int,
    "tuple_zygo": toBool,
    "per_contract": toBool,
    "trace": toBool,
    "baseline": toBool,
    "jobs": int,
}


def loadRunConfig(overrides: dict | None = None, config_file: str | None = None):
    """
    Builds a `RunConfig` from the defaults, an optional config file and
    command line overrides.

    The config file is a ``key=value`` file as understood by ``dotenv``. Keys
    are the `RunConfig` attribute names, in upper or lower case, optionally
    with the ``CATA_`` prefix.

    Args:
        overrides: Settings from the command line. Keys with a None value are
            ignored so that unset flags do not mask the config file.
        config_file: Path to the config file. If None, `CONFIG_FILE` is used
            when it exists.

    Raises:
        ConfigError: for an unreadable config file, unknown keys or invalid
            values.

    Returns:
        The validated `RunConfig`.
    """
    known = {f.name for f in fields(RunConfig)}
    settings = {}

    path = config_file or (CONFIG_FILE if Path(CONFIG_FILE).exists() else None)
    if path:
        if not Path(path).is_file():
            raise ConfigError(f"Config file not found: {path}")
        for key, val in dotenv_values(path).items():
            name = key.lower().removeprefix("cata_")
            if name not in known:
                raise ConfigError(f"Unknown config key '{key}' in {path}")
            settings[name] = val
        logger.debug("Loaded %s settings from %s", len(settings), path)

    for key, val in (overrides or {}).items():
        if val is not None and key in known:
            settings[key] = val

    for key, conv in _CONVERTERS.items():
        if key in settings and isinstance(settings[key], str):
            try:
                settings[key] = conv(settings[key])
            except ValueError as exc:
                raise ConfigError(f"Invalid value for {key}: {exc}") from exc

    # The solver path falls back to the CATA_SOLVER environment variable
    if not settings.get("solver_path") and not SOLVER_PATH:
        settings["solver_path"] = os.getenv("CATA_SOLVER") or None

    return RunConfig(**settings)
