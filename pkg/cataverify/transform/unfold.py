"""
Unfolding of definitions.

Each new definition is unfolded once: its program atom is resolved against
the program clauses, then catamorphism atoms whose ADT argument is a
constructor term are unfolded until none is left, and finally repeated
catamorphism calls on the same inputs are merged using functionality.
"""

import logging

from cataverify.chc.terms import Clause, Var, conj, eq
from cataverify.chc.subst import applySubst, mgu, renameApart
from cataverify.smt import SatResult

__all__ = ["unfoldStep", "unfoldCatas", "applyFunctionality", "unfold"]

logger = logging.getLogger(__name__)


def unfoldStep(clause: Clause, index: int, clauses, engine=None) -> list[Clause]:
    """
    Resolves the body atom at ``index`` against each of ``clauses``.

    Args:
        clause: The clause to unfold.
        index: Position of the atom in ``clause.body``.
        clauses: The clauses defining the atom's predicate.
        engine: When given, resolvents with an unsatisfiable constraint are
            dropped.

    Returns:
        The resolvents, in the order of ``clauses``.
    """
    a = clause.body[index]
    res = []
    for p in clauses:
        p, _ = renameApart(p)
        s = mgu(p.head, a)
        if s is None:
            continue
        r = applySubst(
            s,
            Clause(
                clause.head,
                conj(clause.constraint, p.constraint),
                clause.body[:index] + p.body + clause.body[index + 1 :],
                clause.origin,
            ),
        )
        if engine is not None and engine.isSat(r.constraint) is SatResult.UNSAT:
            continue
        res.append(r)
    return res


def _nextCata(clause: Clause, catas: dict) -> int | None:
    for i, a in enumerate(clause.body):
        info = catas.get(a.pred)
        if info is not None and not isinstance(a.args[info.adt_position], Var):
            return i
    return None


def unfoldCatas(clause: Clause, catas: dict) -> Clause | None:
    """
    Unfolds catamorphism atoms with a constructor term as ADT argument until
    there are none left.

    Returns:
        The unfolded clause, or None if some constructor pattern has no
        matching clause.
    """
    while (i := _nextCata(clause, catas)) is not None:
        info = catas[clause.body[i].pred]
        res = unfoldStep(clause, i, info.clauses)
        if not res:
            return None
        clause = res[0]
    return clause


def applyFunctionality(clause: Clause, catas: dict) -> Clause:
    """
    Rewrites ``h(X,T,Y), h(X,T,Z)`` to ``Y = Z, h(X,T,Y)``.
    """
    body = list(clause.body)
    eqs = []
    i = 0
    while i < len(body):
        a = body[i]
        info = catas.get(a.pred)
        j = i + 1
        while info is not None and j < len(body):
            b = body[j]
            n = info.adt_position + 1
            if b.pred == a.pred and b.args[:n] == a.args[:n]:
                eqs.extend(
                    eq(y, z) for y, z in zip(a.args[n:], b.args[n:]) if y != z
                )
                del body[j]
            else:
                j += 1
        i += 1
    if len(body) == len(clause.body):
        return clause
    return Clause(clause.head, conj(clause.constraint, *eqs), tuple(body), clause.origin)


def unfold(state, new_defs, engine, catas: dict) -> list[Clause]:
    """
    Unfolds each definition of ``new_defs`` once.

    Returns:
        The satisfiable unfolded clauses, each with a fresh clause id.
    """
    res = []
    for d in new_defs:
        outs = []
        program = state.program.get(d.for_pred, [])
        for r in unfoldStep(d.clause, 0, program):
            r = unfoldCatas(r, catas)
            if r is None:
                continue
            r = applyFunctionality(r, catas)
            if engine.isSat(r.constraint) is SatResult.UNSAT:
                continue
            outs.append(state.label(r))
        state.log("unfold", d.new_pred, [r.origin for r in outs])
        logger.debug("Unfolded %s into %s clauses", d.new_pred, len(outs))
        res.extend(outs)
    return res
