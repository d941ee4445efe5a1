"""
SMT-LIB sessions for constraint queries.

A session answers one question: is a list of SMT-LIB declarations and
assertions satisfiable? Two implementations share that interface:

    - `SmtSession` talks to a persistent solver process (``z3 -in -smt2`` by
      default) over stdin/stdout. Every query is wrapped in ``(push)`` and
      ``(pop)``. A query that takes longer than the timeout kills the process,
      answers ``unknown`` and the next query starts a new process.
    - `Z3Session` feeds the same text to the z3 Python API in process. It is
      used when no solver executable can be found.

`openSession` picks one according to the config.

This module also holds the SMT-LIB printer for terms, shared with
`cataverify.emit`.
"""

import logging
import queue
import shutil
import subprocess
import threading
import time

from dataclasses import dataclass
from enum import Enum

from cataverify.config import SMT_PATH, SMT_ARGS, SMT_LOGIC, QUERY_TIMEOUT_MS
from cataverify.chc.terms import Var, IntConst, BoolConst, Cons, Op, Sort, SortKind
from cataverify.errors import SmtProtocolError, SolverUnavailableError

__all__ = [
    "SatResult",
    "SessionStats",
    "SmtSession",
    "Z3Session",
    "openSession",
    "smtSort",
    "smtTerm",
    "smtSymbol",
]

logger = logging.getLogger(__name__)


class SatResult(Enum):
    """
    Answer to a satisfiability query.
    """

    SAT = "sat"
    UNSAT = "unsat"
    UNKNOWN = "unknown"


# SMT-LIB operator names for our operators
_SMT_OPS = {
    "+": "+",
    "-": "-",
    "*": "*",
    "neg": "-",
    "=": "=",
    ">=": ">=",
    ">": ">",
    "=<": "<=",
    "<": "<",
    "~": "not",
    "&": "and",
    "|": "or",
    "=>": "=>",
    "ite": "ite",
}

_RESERVED = frozenset(
    [
        "and",
        "or",
        "not",
        "ite",
        "true",
        "false",
        "forall",
        "exists",
        "let",
        "assert",
        "distinct",
        "Int",
        "Bool",
        "par",
        "_",
        "!",
        "as",
    ]
)


def smtSymbol(name: str) -> str:
    """
    Returns ``name`` as an SMT-LIB symbol, quoted with ``|...|`` when it is
    reserved or not a simple symbol.
    """
    simple = name and not name[0].isdigit() and all(c.isalnum() or c in "_.'$" for c in name)
    if simple and name not in _RESERVED:
        return name
    return "|" + name.replace("|", "_").replace("\\", "_") + "|"


def smtSort(sort: Sort, adt_name=None) -> str:
    """
    SMT-LIB name of a sort. ADT sorts need ``adt_name``, a callable returning
    the datatype name.
    """
    if sort.kind is SortKind.INT:
        return "Int"
    if sort.kind is SortKind.BOOL:
        return "Bool"
    if adt_name is None:
        raise ValueError(f"ADT sort {sort} in a constraint query")
    return adt_name(sort)


def smtTerm(t, names: dict, cons_name=None) -> str:
    """
    Prints a term in SMT-LIB syntax.

    Args:
        t: The term.
        names: Symbol for every variable of ``t``.
        cons_name: Callable ``(name, sort) -> str`` for constructor terms.
            Constructor terms are an error without it.
    """
    if isinstance(t, Var):
        return names[t]
    if isinstance(t, IntConst):
        return str(t.value) if t.value >= 0 else f"(- {-t.value})"
    if isinstance(t, BoolConst):
        return "true" if t.value else "false"
    if isinstance(t, Cons):
        if cons_name is None:
            raise ValueError(f"Constructor {t.name} in a constraint query")
        sym = cons_name(t.name, t.sort)
        if not t.args:
            return sym
        return f"({sym} {' '.join(smtTerm(a, names, cons_name) for a in t.args)})"
    args = " ".join(smtTerm(a, names, cons_name) for a in t.args)
    return f"({_SMT_OPS[t.op]} {args})"


@dataclass
class SessionStats:
    """
    Query counters of a session.
    """

    queries: int = 0
    sat: int = 0
    unsat: int = 0
    unknown: int = 0
    restarts: int = 0
    total_ms: float = 0.0

    def count(self, res: SatResult, ms: float):
        self.queries += 1
        self.total_ms += ms
        setattr(self, res.value, getattr(self, res.value) + 1)

    def asDict(self) -> dict:
        return dict(self.__dict__)


class SmtSession:
    """
    A persistent SMT solver process.

    Attributes:
        solver_path: The solver executable.
        args: Flags putting the solver in interactive mode.
        timeout_ms: Per query timeout.
        logic: The ``set-logic`` argument.
        stats: The `SessionStats`.
    """

    def __init__(
        self,
        solver_path: str,
        args: tuple[str, ...] = SMT_ARGS,
        timeout_ms: int = QUERY_TIMEOUT_MS,
        logic: str = SMT_LOGIC,
    ):
        self.solver_path = solver_path
        self.args = tuple(args)
        self.timeout_ms = timeout_ms
        self.logic = logic
        self.stats = SessionStats()
        self._proc = None
        self._lines = None
        self._reader = None

    @property
    def name(self) -> str:
        return f"{self.solver_path} (process)"

    def _start(self):
        try:
            # The process outlives this call, so @pylint: disable=consider-using-with
            self._proc = subprocess.Popen(
                [self.solver_path, *self.args],
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.STDOUT,
                text=True,
                bufsize=1,
            )
        except OSError as exc:
            raise SolverUnavailableError(
                f"Can not start SMT solver {self.solver_path}: {exc}"
            ) from exc

        self._lines = queue.Queue()

        def pump(stream, lines):
            for line in stream:
                lines.put(line.strip())
            lines.put(None)

        self._reader = threading.Thread(
            target=pump, args=(self._proc.stdout, self._lines), daemon=True
        )
        self._reader.start()
        self._send(f"(set-option :print-success false)\n(set-logic {self.logic})\n")
        logger.debug("Started SMT solver: %s %s", self.solver_path, " ".join(self.args))

    def _send(self, text: str):
        try:
            self._proc.stdin.write(text)
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            self.close()
            raise SolverUnavailableError(f"SMT solver died: {exc}") from exc

    def close(self):
        """
        Stops the solver process. The next query starts a new one.
        """
        if self._proc is None:
            return
        try:
            self._proc.stdin.close()
        except OSError:
            pass
        try:
            self._proc.kill()
            self._proc.wait(timeout=5)
        except (OSError, subprocess.TimeoutExpired):
            pass
        self._proc = None

    def restart(self):
        self.close()
        self.stats.restarts += 1
        logger.warning("Restarting SMT solver %s", self.solver_path)
        self._start()

    def check(self, script: str) -> SatResult:
        """
        Checks satisfiability of declarations and assertions.

        Args:
            script: ``declare-const`` and ``assert`` commands, without
                ``check-sat``.

        Raises:
            SmtProtocolError: if the solver reports an error or answers
                something that is not a status.
            SolverUnavailableError: if the solver can not be (re)started.
        """
        if self._proc is None or self._proc.poll() is not None:
            if self._proc is not None:
                self.stats.restarts += 1
                logger.warning("SMT solver exited, restarting")
            self._start()

        start = time.monotonic()
        self._send(f"(push 1)\n{script}\n(check-sat)\n(pop 1)\n")
        deadline = start + self.timeout_ms / 1000 + 1
        errors = []
        while True:
            try:
                line = self._lines.get(timeout=max(0.0, deadline - time.monotonic()))
            except queue.Empty:
                self.restart()
                res = SatResult.UNKNOWN
                break
            if line is None:
                self._proc = None
                raise SmtProtocolError(
                    f"SMT solver exited during a query: {'; '.join(errors) or 'no output'}"
                )
            if not line:
                continue
            if line in ("sat", "unsat", "unknown"):
                if errors:
                    raise SmtProtocolError(f"SMT solver error: {'; '.join(errors)}")
                res = SatResult(line)
                break
            if line.startswith("(error") or errors:
                errors.append(line)
                continue
            raise SmtProtocolError(f"Unexpected SMT solver output: {line}")

        self.stats.count(res, (time.monotonic() - start) * 1000)
        return res

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


class Z3Session:
    """
    Answers the same queries as `SmtSession` with the z3 Python API.
    """

    def __init__(self, timeout_ms: int = QUERY_TIMEOUT_MS, logic: str = SMT_LOGIC):
        try:
            # Optional dependency, so @pylint: disable=import-outside-toplevel
            import z3
        except ImportError as exc:
            raise SolverUnavailableError("The z3 python package is not installed") from exc
        self._z3 = z3
        self.timeout_ms = timeout_ms
        self.logic = logic
        self.stats = SessionStats()

    @property
    def name(self) -> str:
        return f"z3 {self._z3.get_version_string()} (api)"

    def check(self, script: str) -> SatResult:
        z3 = self._z3
        start = time.monotonic()
        solver = z3.Solver()
        solver.set("timeout", self.timeout_ms)
        try:
            solver.from_string(script)
        except z3.Z3Exception as exc:
            raise SmtProtocolError(f"z3 rejected the query: {exc}") from exc
        r = solver.check()
        if r == z3.sat:
            res = SatResult.SAT
        elif r == z3.unsat:
            res = SatResult.UNSAT
        else:
            res = SatResult.UNKNOWN
        self.stats.count(res, (time.monotonic() - start) * 1000)
        return res

    def close(self):
        pass

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def findSmtSolver(path: str | None = None) -> str | None:
    """
    Resolves the SMT solver executable: an explicit path, else `SMT_PATH`,
    else ``z3`` on the PATH.
    """
    candidate = path or SMT_PATH
    if candidate:
        return shutil.which(candidate) or candidate
    return shutil.which("z3")


def openSession(cfg=None):
    """
    Opens a session for the constraint engine.

    Args:
        cfg: A `RunConfig`, or None for the defaults.

    Raises:
        SolverUnavailableError: if the configured backend is not available.

    Returns:
        An `SmtSession` or a `Z3Session`.
    """
    backend = getattr(cfg, "smt_backend", "auto")
    timeout = getattr(cfg, "query_timeout_ms", QUERY_TIMEOUT_MS)
    logic = getattr(cfg, "smt_logic", SMT_LOGIC)
    args = getattr(cfg, "smt_args", SMT_ARGS)
    path = findSmtSolver(getattr(cfg, "smt_path", None))

    if backend in ("auto", "process") and path and shutil.which(path):
        logger.debug("Using SMT solver process %s", path)
        return SmtSession(path, args, timeout, logic)
    if backend == "process":
        raise SolverUnavailableError(f"SMT solver not found: {path or 'z3'}")
    logger.debug("Using the z3 python API for constraint queries")
    return Z3Session(timeout, logic)
