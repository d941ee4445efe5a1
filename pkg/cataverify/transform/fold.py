"""
Folding: replacing program atoms by atoms of their maximal definitions, and
dropping all catamorphism atoms.
"""

import logging

from cataverify.chc.terms import Clause, freeVars
from cataverify.chc.subst import applySubst
from cataverify.errors import TransformError
from .define import programAtoms, cataNeighborhood, coveringSubst

__all__ = ["isFoldable", "splitFoldable", "fold"]

logger = logging.getLogger(__name__)


def isFoldable(state, clause: Clause, engine, catas: dict) -> bool:
    """
    True if every program atom of ``clause`` is covered by some definition.
    """
    for a in programAtoms(clause.body, catas):
        neigh = cataNeighborhood(a, clause.body, catas)
        if not any(
            coveringSubst(engine, d, a, neigh, clause.constraint, catas) is not None
            for d in state.defsFor(a.pred)
        ):
            return False
    return True


def splitFoldable(state, clauses, engine, catas: dict) -> tuple[list, list]:
    foldable, rest = [], []
    for clause in clauses:
        (foldable if isFoldable(state, clause, engine, catas) else rest).append(clause)
    return foldable, rest


def fold(state, engine, catas: dict) -> list[Clause]:
    """
    Folds the clauses of ``state.out_cls`` whose head is ``false`` or a
    maximal definition.

    Raises:
        TransformError: if a clause can not be folded with the maximal
            definitions, or the result still mentions ADT variables.

    Returns:
        The ADT free clauses, each with a fresh clause id.
    """
    heads = {d.new_pred for d in state.defs if d.is_maximal}
    res = []
    for clause in state.out_cls:
        if clause.head is not None and clause.head.pred not in heads:
            continue
        body = []
        for a in programAtoms(clause.body, catas):
            m = state.maximal(a.pred)
            neigh = cataNeighborhood(a, clause.body, catas)
            s = (
                None
                if m is None
                else coveringSubst(engine, m, a, neigh, clause.constraint, catas)
            )
            if s is None:
                msg = f"{clause.origin}: {a.pred} can not be folded"
                logger.error(msg)
                raise TransformError(msg)
            body.append(applySubst(s, m.head))

        folded = state.label(Clause(clause.head, clause.constraint, tuple(body)))
        adt = [v for v in freeVars(folded) if not v.sort.isBasic]
        if adt:
            msg = f"{folded.origin}: ADT variables left after folding: {adt}"
            logger.error(msg)
            raise TransformError(msg)
        state.log("fold", clause.origin, [folded.origin])
        res.append(folded)
    return res
