"""
A bounded least model evaluator.

This computes the ground atoms of the least model of a set of definite clauses
that can be derived using only ADT values up to a given depth (list length or
tree height) and free integers from a given range. It is a sound fragment of
the least model and is only meant as a testing oracle for small programs.
"""

import itertools
import logging
import time

from functools import lru_cache

from cataverify.config import ORACLE_DEPTH, ORACLE_VALUES, ORACLE_CAP
from cataverify.errors import OracleLimitError
from .terms import (
    Var,
    IntConst,
    BoolConst,
    Cons,
    Op,
    Atom,
    Clause,
    Sort,
    SortTable,
    INT,
    BOOL,
    conj,
    eq,
    conjuncts,
    freeVars,
    termDepth,
    termSort,
)
from .subst import matchTerms

__all__ = ["boundedLeastModel", "bodyInstances", "groundTerms", "evalTerm", "Bounds"]

logger = logging.getLogger(__name__)


class Bounds:
    """
    The bounds of an oracle run.

    Attributes:
        depth: Maximum ADT depth.
        values: Integers used for free integer variables.
        cap: Maximum number of ground atoms.
        int_limit: Derived integers outside ``[-int_limit, int_limit]`` are
            discarded.
        sorts: The `SortTable` for enumerating ADT values.
    """

    def __init__(
        self,
        depth: int = ORACLE_DEPTH,
        values: tuple[int, ...] = ORACLE_VALUES,
        cap: int = ORACLE_CAP,
        sorts: SortTable | None = None,
    ):
        self.depth = depth
        self.values = tuple(values)
        self.cap = cap
        self.int_limit = max((abs(v) for v in self.values), default=0) + 2**depth
        self.sorts = sorts or SortTable()
        self._terms = lru_cache(maxsize=None)(self._groundTerms)

    def _groundTerms(self, sort: Sort, depth: int) -> tuple:
        if sort == INT:
            return tuple(IntConst(v) for v in self.values)
        if sort == BOOL:
            return (BoolConst(False), BoolConst(True))
        res = []
        for name, arg_sorts in self.sorts.constructors(sort):
            recursive = any(s == sort for s in arg_sorts)
            if recursive and depth == 0:
                continue
            choices = [
                self._terms(s, depth - 1 if (s == sort or not s.isBasic) else depth)
                for s in arg_sorts
            ]
            for args in itertools.product(*choices):
                res.append(Cons(name, tuple(args), sort))
        return tuple(res)

    def groundTerms(self, sort: Sort) -> tuple:
        """
        All values of ``sort`` within the bounds.
        """
        return self._terms(sort, self.depth)

    def inBounds(self, t) -> bool:
        if isinstance(t, IntConst):
            return abs(t.value) <= self.int_limit
        if isinstance(t, Cons):
            return termDepth(t) <= self.depth and all(self.inBounds(a) for a in t.args)
        return True


def groundTerms(sort: Sort, bounds: Bounds) -> tuple:
    return bounds.groundTerms(sort)


def _value(t):
    if isinstance(t, IntConst):
        return t.value
    if isinstance(t, BoolConst):
        return t.value
    return t


def _toTerm(v):
    if isinstance(v, bool):
        return BoolConst(v)
    if isinstance(v, int):
        return IntConst(v)
    return v


def evalTerm(t, env: dict):
    """
    Evaluates a ground-under-``env`` term.

    Returns:
        A python int or bool for basic terms, a `Cons` for ADT terms.

    Raises:
        KeyError: if a variable is not bound in ``env``.
    """
    # pylint: disable=too-many-return-statements,too-many-branches
    if isinstance(t, Var):
        return _value(env[t])
    if isinstance(t, (IntConst, BoolConst)):
        return t.value
    if isinstance(t, Cons):
        return Cons(t.name, tuple(_toTerm(evalTerm(a, env)) for a in t.args), t.sort)
    op, args = t.op, t.args
    if op == "ite":
        return evalTerm(args[1], env) if evalTerm(args[0], env) else evalTerm(args[2], env)
    if op == "&":
        return all(evalTerm(a, env) for a in args)
    if op == "|":
        return any(evalTerm(a, env) for a in args)
    if op == "~":
        return not evalTerm(args[0], env)
    if op == "=>":
        return (not evalTerm(args[0], env)) or evalTerm(args[1], env)
    if op == "neg":
        return -evalTerm(args[0], env)
    a, b = evalTerm(args[0], env), evalTerm(args[1], env)
    match op:
        case "+":
            return a + b
        case "-":
            return a - b
        case "*":
            return a * b
        case "=":
            return a == b
        case ">=":
            return a >= b
        case ">":
            return a > b
        case "=<":
            return a <= b
        case "<":
            return a < b
    raise ValueError(f"Unknown operator {op}")


def _flatArgs(clause: Clause) -> Clause:
    """
    Moves interpreted operations out of atom arguments into the constraint.
    """
    extra = []

    def flat(a: Atom) -> Atom:
        args = []
        for t in a.args:
            if isinstance(t, Op):
                v = Var("_O", termSort(t))
                extra.append(eq(v, t))
                args.append(v)
            else:
                args.append(t)
        return Atom(a.pred, tuple(args))

    head = None if clause.head is None else flat(clause.head)
    body = tuple(flat(a) for a in clause.body)
    return Clause(head, conj(clause.constraint, *extra), body, clause.origin)


def _solve(constraint, env: dict, pending: list, bounds: Bounds):
    """
    Yields extensions of ``env`` binding all ``pending`` variables such that
    the constraint holds. Equalities with an unbound variable on one side are
    used to bind it directly, the rest is enumerated.
    """
    env = dict(env)
    pending = [v for v in pending if v not in env]
    progress = True
    while progress and pending:
        progress = False
        for lit in conjuncts(constraint):
            if not (isinstance(lit, Op) and lit.op == "="):
                continue
            lhs, rhs = lit.args
            for v, t in ((lhs, rhs), (rhs, lhs)):
                if isinstance(v, Var) and v not in env:
                    if all(x in env for x in freeVars(t)):
                        val = _toTerm(evalTerm(t, env))
                        if not bounds.inBounds(val):
                            return
                        env[v] = val
                        progress = True
                        break
        pending = [v for v in pending if v not in env]

    if pending:
        v = pending[0]
        for val in bounds.groundTerms(v.sort):
            env[v] = val
            yield from _solve(constraint, env, pending[1:], bounds)
        return

    if evalTerm(constraint, env):
        yield env


def _bodyMatches(body, facts: dict, env: dict):
    if not body:
        yield env
        return
    first, rest = body[0], body[1:]
    for fact in facts.get(first.pred, ()):
        s = matchTerms(first.args, fact.args, env)
        if s is not None:
            yield from _bodyMatches(rest, facts, s)


def boundedLeastModel(
    clauses,
    depth: int = ORACLE_DEPTH,
    value_range: tuple[int, ...] = ORACLE_VALUES,
    cap: int = ORACLE_CAP,
    sorts: SortTable | None = None,
    time_limit_s: float | None = None,
) -> frozenset:
    """
    Bottom-up fixpoint of the definite clauses within the bounds.

    Goals in ``clauses`` are ignored.

    Args:
        clauses: The clauses.
        depth: Maximum list length or tree height of any ADT value.
        value_range: Integers to enumerate for free integer variables.
        cap: Maximum number of ground atoms.
        sorts: Needed when the clauses use ``:- data`` sorts.
        time_limit_s: Wall time limit. None for no limit.

    Raises:
        OracleLimitError: if more than ``cap`` atoms are derived, or the time
            limit is hit.

    Returns:
        The set of derived ground atoms.
    """
    start = time.monotonic()
    bounds = Bounds(depth, value_range, cap, sorts)
    program = [_flatArgs(c) for c in clauses if c.head is not None]
    facts: dict[str, list] = {}
    seen = set()

    changed = True
    rounds = 0
    while changed:
        changed = False
        rounds += 1
        for clause in program:
            pending = [
                v
                for v in freeVars((clause.head, clause.constraint))
                if not any(v in freeVars(a) for a in clause.body)
            ]
            new = []
            for env in _bodyMatches(clause.body, facts, {}):
                for full in _solve(clause.constraint, env, pending, bounds):
                    args = tuple(_toTerm(evalTerm(t, full)) for t in clause.head.args)
                    if not all(bounds.inBounds(a) for a in args):
                        continue
                    atom = Atom(clause.head.pred, args)
                    if atom not in seen:
                        new.append(atom)
                        seen.add(atom)
            if new:
                changed = True
                for atom in new:
                    facts.setdefault(atom.pred, []).append(atom)
            if len(seen) > cap:
                raise OracleLimitError(
                    f"Bounded model exceeded {cap} atoms at depth {depth}"
                )
            if time_limit_s is not None and time.monotonic() - start > time_limit_s:
                raise OracleLimitError(
                    f"Bounded model not computed within {time_limit_s} s at depth {depth}"
                )

    logger.debug("Bounded model: %s atoms after %s rounds", len(seen), rounds)
    return frozenset(seen)


def bodyInstances(goal: Clause, model, bounds: Bounds | None = None) -> list[dict]:
    """
    Returns the variable bindings under which the body of ``goal`` is true in
    ``model``.

    Args:
        goal: Any clause; only its constraint and body are used.
        model: Ground atoms as returned by `boundedLeastModel`.
        bounds: Bounds for enumerating variables not bound by body atoms.
    """
    bounds = bounds or Bounds()
    clause = _flatArgs(goal)
    facts: dict[str, list] = {}
    for atom in model:
        facts.setdefault(atom.pred, []).append(atom)
    pending = [
        v
        for v in freeVars(clause.constraint)
        if not any(v in freeVars(a) for a in clause.body)
    ]
    res = []
    for env in _bodyMatches(clause.body, facts, {}):
        res.extend(dict(e) for e in _solve(clause.constraint, env, pending, bounds))
    return res
