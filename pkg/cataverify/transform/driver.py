"""
The transformation loop.

Starting from the goals of the contracts, definitions are introduced for
uncovered program atoms, unfolded, strengthened with the contracts, and the
clauses that are not yet foldable go round again. When no clause is left,
the collected clauses are folded into ADT free clauses.
"""

import logging
import time

from dataclasses import dataclass, field

from cataverify.config import ITERATION_CAP, SPECIALIZE_DEPTH
from cataverify.chc.terms import Clause, Var
from cataverify.errors import TransformError
from cataverify.frontend.contracts import Contract, contractToGoal, trivialContract
from .state import Definition, StepRecord, TransformState
from .specialize import specializeConstructorCalls
from .define import define
from .unfold import unfold
from .contracts import applyContracts
from .fold import fold, splitFoldable

__all__ = ["TransformResult", "runTcata", "replayStepLog"]

logger = logging.getLogger(__name__)


@dataclass
class TransformResult:
    """
    Output of `runTcata`.

    Attributes:
        clauses: The ADT free clauses.
        goals: Contract id of each goal, by the goal's clause id.
        step_log: The derivation records.
        defs: All definitions introduced.
        iterations: Number of loop iterations.
        elapsed_ms: Wall time of the transformation.
        specialized: Specialized predicates and their patterns.
    """

    clauses: list[Clause]
    goals: dict[str, str] = field(default_factory=dict)
    step_log: list[StepRecord] = field(default_factory=list)
    defs: list[Definition] = field(default_factory=list)
    iterations: int = 0
    elapsed_ms: float = 0.0
    specialized: dict = field(default_factory=dict)

    def traceText(self) -> str:
        return "".join(rec.line() + "\n" for rec in self.step_log)


def _programClauses(program, classification) -> list[Clause]:
    skip = set(classification.catamorphisms) | set(classification.helpers)
    return [c for c in program.definite if c.head.pred not in skip]


def runTcata(
    program,
    classification,
    engine,
    contracts: list[Contract] | None = None,
    extra_goals: list[Clause] | None = None,
    iteration_cap: int = ITERATION_CAP,
    specialize_depth: int = SPECIALIZE_DEPTH,
    time_limit_s: float | None = None,
) -> TransformResult:
    """
    Transforms a program and its contracts into ADT free clauses.

    The result is satisfiable only if every contract is valid.

    Args:
        program: The `SourceProgram`.
        classification: Its `PredicateClassification`.
        engine: The `ConstraintEngine`.
        contracts: The contracts to verify, which are also the only ones
            used as assumptions. Defaults to all contracts of
            ``classification``.
        extra_goals: Goals to verify besides the contract goals. Defaults to
            the goals of ``classification`` when ``contracts`` is None, else
            none.
        iteration_cap: Loop iteration limit.
        specialize_depth: Nesting limit for specialized predicates.
        time_limit_s: Wall time limit, checked once per iteration. None for
            no limit.

    Raises:
        TransformError: when the iteration cap or the time limit is hit, or
            folding fails.

    Returns:
        The `TransformResult`.
    """
    # pylint: disable=too-many-arguments,too-many-locals
    start = time.monotonic()
    if contracts is None:
        contracts = list(classification.contracts)
        if extra_goals is None:
            extra_goals = list(classification.goals)
    extra_goals = list(extra_goals or [])
    catas = classification.catamorphisms

    goals, goal_ids = [], {}
    for k in contracts:
        if k.implied:
            continue
        g = contractToGoal(k)
        if g is not None:
            goals.append(g)
            goal_ids[g.origin] = k.cid
    for g in extra_goals:
        goals.append(g)
        goal_ids[g.origin] = g.origin

    spec = specializeConstructorCalls(
        _programClauses(program, classification), goals, contracts, catas, specialize_depth
    )
    by_pred: dict[str, list[Clause]] = {}
    for c in spec.clauses:
        by_pred.setdefault(c.head.pred, []).append(c)
    assumptions: dict[str, list[Contract]] = {}
    for k in list(contracts) + spec.contracts:
        assumptions.setdefault(k.pred, []).append(k)
    # Program predicates outside this run are assumed to satisfy true
    for pred in sorted(classification.program_preds - set(assumptions)):
        z = tuple(Var(f"Z{i}", s) for i, s in enumerate(program.signatures[pred]))
        assumptions[pred] = [trivialContract(pred, z)]

    state = TransformState(program=by_pred)
    for g in spec.goals:
        state.log("goal", goal_ids[g.origin], [g.origin])
    state.in_cls = list(spec.goals)

    while state.in_cls:
        state.iteration += 1
        if state.iteration > iteration_cap:
            msg = f"Transformation did not finish within {iteration_cap} iterations"
            logger.error(msg)
            raise TransformError(msg)
        if time_limit_s is not None and time.monotonic() - start > time_limit_s:
            msg = f"Transformation did not finish within {time_limit_s} s"
            logger.error(msg)
            raise TransformError(msg)
        logger.debug(
            "Iteration %s: %s clauses to cover, %s definitions",
            state.iteration,
            len(state.in_cls),
            len(state.defs),
        )
        new_defs = define(state, engine, catas)
        # Covered now, so they are output with the foldable ones
        state.out_cls.extend(state.in_cls)
        unfolded = unfold(state, new_defs, engine, catas)
        strengthened = applyContracts(state, unfolded, assumptions, engine, catas)
        foldable, state.in_cls = splitFoldable(state, strengthened, engine, catas)
        state.out_cls.extend(foldable)

    clauses = fold(state, engine, catas)
    elapsed = (time.monotonic() - start) * 1000
    logger.debug(
        "Transformed %s goals into %s clauses in %s iterations, %.0f ms",
        len(goals),
        len(clauses),
        state.iteration,
        elapsed,
    )
    return TransformResult(
        clauses,
        goal_ids,
        state.step_log,
        state.defs,
        state.iteration,
        elapsed,
        spec.patterns,
    )


def replayStepLog(lines, program, classification, engine, **kwargs) -> dict:
    """
    Re-runs the transformation and compares its step log with a recorded
    one.

    Args:
        lines: The recorded log, one record per line.
        program: The `SourceProgram`.
        classification: Its `PredicateClassification`.
        engine: The `ConstraintEngine`.
        kwargs: Passed on to `runTcata`.

    Returns:
        A dictionary as follows:

        .. python::

            {
                'success': bool,       # True if the logs are the same
                'msg': str,            # What differs, if anything
                'records': int,        # Number of records compared
                'diverged_at': int,    # Index of the first difference, or None
            }
    """
    res = {"success": False, "msg": "", "records": 0, "diverged_at": None}
    recorded = [StepRecord.parse(line) for line in lines if line.strip()]
    fresh = runTcata(program, classification, engine, **kwargs).step_log

    for i, (old, new) in enumerate(zip(recorded, fresh)):
        res["records"] = i + 1
        if old != new:
            res["diverged_at"] = i
            res["msg"] = f"Record {i} differs: expected '{old.line()}', got '{new.line()}'"
            logger.error(res["msg"])
            return res

    if len(recorded) != len(fresh):
        res["diverged_at"] = min(len(recorded), len(fresh))
        res["msg"] = f"Recorded log has {len(recorded)} records, the new run {len(fresh)}"
        logger.error(res["msg"])
        return res

    res["success"] = True
    return res
