"""
The CHC solver backend and the verification pipeline.

`solve` runs an external CHC solver on an SMT-LIB script and reads its
answer. `verify` runs the whole pipeline for one input file: parse,
classify, transform, emit, solve, and turns the answers into per contract
`Verdict` entries.

Only ``sat`` verifies a contract. ``unsat`` from the solver does not mean
that the contract is wrong, since the transformation may lose precision, so
it gives ``unknown`` like any other answer.
"""

import importlib.util
import logging
import shutil
import subprocess
import sys
import tempfile
import time

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from pathlib import Path

from cataverify.config import VERSION
from cataverify.errors import (
    CataVerifyError,
    ClassificationError,
    ConfigError,
    ContractError,
    ParseError,
    SchemaError,
    SmtProtocolError,
    SolverUnavailableError,
    SortError,
    TransformError,
)
from cataverify.frontend import parseFile, contractToGoal
from cataverify.cata import classify, tupleAll
from cataverify.constraints import ConstraintEngine
from cataverify.smt import openSession
from cataverify.transform import runTcata
from cataverify.emit import emitProlog, emitSmtlib

__all__ = [
    "SolveStatus",
    "VerdictStatus",
    "Verdict",
    "SolveOutcome",
    "resolveSolver",
    "solve",
    "verify",
    "exitCode",
    "transformOnly",
    "INPUT_ERRORS",
]

logger = logging.getLogger(__name__)

# Errors caused by the input or its use, as opposed to the environment
INPUT_ERRORS = (
    ParseError,
    SortError,
    ContractError,
    ClassificationError,
    SchemaError,
    ConfigError,
    OSError,
)


class SolveStatus(Enum):
    """
    Answer of the CHC solver.
    """

    SAT = "sat"
    UNSAT = "unsat"
    UNKNOWN = "unknown"
    TIMEOUT = "timeout"


class VerdictStatus(Enum):
    """
    Outcome for one contract.
    """

    VERIFIED = "verified"
    UNKNOWN = "unknown"
    TIMEOUT = "solver-timeout"
    FAILED = "transformation-failed"


@dataclass(frozen=True)
class Verdict:
    """
    The verification outcome of a contract.

    Attributes:
        contract: Contract id, or the origin of a plain goal.
        status: The `VerdictStatus`.
        solver: Name and version of the CHC solver.
        wall_ms: Time spent in the solver.
        msg: Details for failed transformations.
    """

    contract: str
    status: VerdictStatus
    solver: str = ""
    wall_ms: float = 0.0
    msg: str = ""

    def line(self) -> str:
        return f"{self.contract}\t{self.status.value}\t{self.solver}\t{self.wall_ms:.0f}"


@dataclass(frozen=True)
class SolveOutcome:
    """
    Result of a `solve` call.
    """

    status: SolveStatus
    wall_ms: float
    solver: str


@lru_cache(maxsize=None)
def _versionOf(exe: str) -> str:
    try:
        out = subprocess.run(
            [exe, "--version"], capture_output=True, text=True, timeout=5, check=False
        )
        first = (out.stdout or out.stderr).strip().splitlines()
        if first:
            return first[0]
    except (OSError, subprocess.SubprocessError):
        pass
    return Path(exe).name


def resolveSolver(cfg) -> tuple[list[str], str]:
    """
    Finds the CHC solver command.

    The configured solver path comes first (command line, config file, or the
    ``CATA_SOLVER`` environment variable), then ``z3`` on the PATH, then the
    bundled `cataverify.z3runner` when the z3 Python package is installed.

    Raises:
        SolverUnavailableError: when none of these is available.

    Returns:
        A tuple ``(argv, name)``: the command without the script path, and a
        printable solver name.
    """
    path = getattr(cfg, "solver_path", None)
    extra = list(getattr(cfg, "solver_args", ()))
    if path:
        exe = shutil.which(path)
        if exe is None:
            msg = f"CHC solver not found: {path}"
            logger.error(msg)
            raise SolverUnavailableError(msg)
        return [exe, *extra], _versionOf(exe)

    exe = shutil.which("z3")
    if exe:
        return [exe, *extra], _versionOf(exe)

    if importlib.util.find_spec("z3") is not None:
        return [sys.executable, "-m", "cataverify.z3runner", *extra], "z3 (python api)"

    msg = "No CHC solver: set CATA_SOLVER, install z3, or the z3-solver package"
    logger.error(msg)
    raise SolverUnavailableError(msg)


def _status(output: str) -> SolveStatus:
    """
    Reads the answer: the first line that is not empty or a comment must be
    ``sat``, ``unsat`` or ``unknown``.
    """
    for line in output.splitlines():
        line = line.strip()
        if not line or line.startswith(";"):
            continue
        if line in ("sat", "unsat", "unknown"):
            return SolveStatus(line)
        raise SmtProtocolError(f"Unexpected CHC solver output: {line}")
    raise SmtProtocolError("No answer from the CHC solver")


def solve(script: str | Path, cfg) -> SolveOutcome:
    """
    Runs the CHC solver on an SMT-LIB script.

    Args:
        script: Path of the script, or the script text.
        cfg: The `RunConfig` with the solver settings and the per problem
            timeout.

    Raises:
        SolverUnavailableError: if the solver can not be found or started.
        SmtProtocolError: if its output can not be understood.

    Returns:
        The `SolveOutcome`.
    """
    argv, name = resolveSolver(cfg)
    with tempfile.TemporaryDirectory() as tmp:
        if isinstance(script, Path):
            path = script
        else:
            path = Path(tmp) / "problem.smt2"
            path.write_text(script, encoding="utf-8")

        start = time.monotonic()
        try:
            proc = subprocess.run(
                argv + [str(path)],
                capture_output=True,
                text=True,
                timeout=cfg.problem_timeout_s,
                check=False,
            )
        except subprocess.TimeoutExpired:
            ms = (time.monotonic() - start) * 1000
            logger.info("Solver timed out after %.0f ms on %s", ms, path.name)
            return SolveOutcome(SolveStatus.TIMEOUT, ms, name)
        except OSError as exc:
            msg = f"Can not run the CHC solver {argv[0]}: {exc}"
            logger.error(msg)
            raise SolverUnavailableError(msg) from exc

    ms = (time.monotonic() - start) * 1000
    try:
        status = _status(proc.stdout)
    except SmtProtocolError:
        logger.error(
            "Solver output for %s: %s", path.name, (proc.stdout + proc.stderr).strip()[:500]
        )
        raise
    logger.debug("Solver answered %s in %.0f ms", status.value, ms)
    return SolveOutcome(status, ms, name)


_STATUS_MAP = {
    SolveStatus.SAT: VerdictStatus.VERIFIED,
    SolveStatus.UNSAT: VerdictStatus.UNKNOWN,
    SolveStatus.UNKNOWN: VerdictStatus.UNKNOWN,
    SolveStatus.TIMEOUT: VerdictStatus.TIMEOUT,
}


def exitCode(exc: Exception | None = None, verdicts=()) -> int:
    """
    The process exit code for a run: 0 when everything is verified, 1 when
    something is not, 2 for input errors and 3 for everything else.
    """
    if exc is not None:
        return 2 if isinstance(exc, INPUT_ERRORS) else 3
    return 0 if all(v.status is VerdictStatus.VERIFIED for v in verdicts) else 1


def _header(program, what: str) -> str:
    return f"{what} of {program.path or program.name}\ncataverify {VERSION}"


class _Pipeline:
    """
    One `verify` run. Collects verdicts, artifacts and timings.
    """

    def __init__(self, program, classification, cfg):
        self.program = program
        self.classification = classification
        self.cfg = cfg
        self.name = program.name
        self.out_dir = cfg.ensureOutputDir()
        self.verdicts: list[Verdict] = []
        self.artifacts: list[Path] = []
        self.transform_ms = 0.0
        self.checksat_ms = 0.0

    def write(self, suffix: str, text: str) -> Path:
        path = self.out_dir / f"{self.name}{suffix}"
        path.write_text(text, encoding="utf-8")
        self.artifacts.append(path)
        return path

    def solveClauses(self, clauses, ids, suffix: str, sorts=None):
        """
        Emits and solves a clause set, adding a verdict for every id.
        """
        script = emitSmtlib(clauses, sorts, _header(self.program, "Clauses"))
        if self.cfg.emit in ("both", "smt2"):
            target = self.write(f"{suffix}.smt2", script)
        else:
            target = script
        out = solve(target, self.cfg)
        self.checksat_ms += out.wall_ms
        status = _STATUS_MAP[out.status]
        for cid in ids:
            self.verdicts.append(Verdict(cid, status, out.solver, out.wall_ms))

    def baseline(self):
        goals = [g for k in self.classification.contracts if (g := contractToGoal(k))]
        goals.extend(self.classification.goals)
        clauses = list(self.program.definite) + goals
        if self.cfg.emit in ("both", "prolog"):
            self.write(".baseline.pl", emitProlog(clauses, _header(self.program, "Baseline")))
        ids = [k.cid for k in self.classification.contracts] + [
            g.origin for g in self.classification.goals
        ]
        self.solveClauses(clauses, ids, ".baseline", self.program.sorts)

    def transformed(self, engine, contracts, extra_goals, suffix: str):
        ids = [k.cid for k in contracts] + [g.origin for g in extra_goals]
        try:
            res = runTcata(
                self.program,
                self.classification,
                engine,
                contracts=contracts,
                extra_goals=extra_goals,
                iteration_cap=self.cfg.iteration_cap,
                time_limit_s=self.cfg.problem_timeout_s,
            )
        except TransformError as exc:
            for cid in ids:
                self.verdicts.append(Verdict(cid, VerdictStatus.FAILED, msg=str(exc)))
            return
        self.transform_ms += res.elapsed_ms
        if self.cfg.emit in ("both", "prolog"):
            text = emitProlog(res.clauses, _header(self.program, "Transformed clauses"))
            self.write(f"{suffix}.transf.pl", text)
        if self.cfg.trace:
            self.write(f"{suffix}.trace", res.traceText())
        self.solveClauses(res.clauses, ids, suffix)

    def run(self):
        cfg = self.cfg
        if cfg.baseline:
            self.baseline()
            return
        with openSession(cfg) as session:
            engine = ConstraintEngine(session)
            contracts = self.classification.contracts
            if not cfg.per_contract:
                self.transformed(engine, list(contracts), list(self.classification.goals), "")
            else:
                for i, k in enumerate(contracts, 1):
                    self.transformed(engine, [k], [], f".k{i}")
                if self.classification.goals:
                    self.transformed(engine, [], list(self.classification.goals), ".goals")
            logger.debug("Constraint engine: %s", engine.stats())


def verify(path, cfg) -> dict:
    """
    Verifies the contracts of one input file.

    Writes the transformed clauses, the SMT-LIB script, the step log (with
    ``cfg.trace``) and a verdicts file to ``cfg.output_dir``.

    Args:
        path: The input file.
        cfg: The `RunConfig`.

    Returns:
        A dictionary as follows:

        .. python::

            {
                'success': bool,        # True if every contract is verified
                'msg': str,             # Error message, if any
                'program': str,         # Input name
                'verdicts': list,       # Verdict per contract
                'artifacts': list,      # Paths of the files written
                'transform_ms': float,
                'checksat_ms': float,
                'exit_code': int,       # See exitCode()
            }
    """
    path = Path(path)
    res = {
        "success": False,
        "msg": "",
        "program": path.stem,
        "verdicts": [],
        "artifacts": [],
        "transform_ms": 0.0,
        "checksat_ms": 0.0,
        "exit_code": 3,
    }
    try:
        program = parseFile(path)
        classification = classify(program)
        if cfg.tuple_zygo:
            tupleAll(classification, program)
        pipe = _Pipeline(program, classification, cfg)
        pipe.run()
    except (CataVerifyError, OSError) as exc:
        res["msg"] = f"{path}: {exc}"
        res["exit_code"] = exitCode(exc)
        logger.error(res["msg"])
        return res

    res["verdicts"] = pipe.verdicts
    res["transform_ms"] = pipe.transform_ms
    res["checksat_ms"] = pipe.checksat_ms
    verdict_file = pipe.write(".verdicts", "".join(v.line() + "\n" for v in pipe.verdicts))
    res["artifacts"] = pipe.artifacts
    res["exit_code"] = exitCode(None, pipe.verdicts)
    res["success"] = res["exit_code"] == 0
    for v in pipe.verdicts:
        logger.info("%s: %s %s", path.name, v.contract, v.status.value)
    logger.debug("Verdicts written to %s", verdict_file)
    return res


def transformOnly(path, cfg) -> dict:
    """
    Runs the pipeline up to emission, without solving.

    Returns:
        A result dictionary like `verify`, without verdicts.
    """
    path = Path(path)
    res = {"success": False, "msg": "", "program": path.stem, "artifacts": [], "exit_code": 3}
    try:
        program = parseFile(path)
        classification = classify(program)
        if cfg.tuple_zygo:
            tupleAll(classification, program)
        pipe = _Pipeline(program, classification, cfg)
        if cfg.baseline:
            goals = [g for k in classification.contracts if (g := contractToGoal(k))]
            clauses = list(program.definite) + goals + list(classification.goals)
            pipe.write(".baseline.pl", emitProlog(clauses, _header(program, "Baseline")))
            text = emitSmtlib(clauses, program.sorts, _header(program, "Baseline"))
            pipe.write(".baseline.smt2", text)
        else:
            with openSession(cfg) as session:
                out = runTcata(
                    program,
                    classification,
                    ConstraintEngine(session),
                    iteration_cap=cfg.iteration_cap,
                    time_limit_s=cfg.problem_timeout_s,
                )
            if cfg.emit in ("both", "prolog"):
                text = emitProlog(out.clauses, _header(program, "Transformed clauses"))
                pipe.write(".transf.pl", text)
            if cfg.emit in ("both", "smt2"):
                pipe.write(".smt2", emitSmtlib(out.clauses, header=_header(program, "Clauses")))
            if cfg.trace:
                pipe.write(".trace", out.traceText())
    except (CataVerifyError, OSError) as exc:
        res["msg"] = f"{path}: {exc}"
        res["exit_code"] = exitCode(exc)
        logger.error(res["msg"])
        return res

    res["artifacts"] = pipe.artifacts
    res["success"] = True
    res["exit_code"] = 0
    return res
