"""
Use of contracts as assumptions on unfolded clauses.

For a program atom ``p(V)`` in a clause body, and a contract
``p(Z) ==> c, Catas => d``, the catamorphism atoms of the contract are added
to the clause unless an atom of the same catamorphism on the same ADT
variable is already there. When the clause constraint entails the
precondition, the precondition and the postcondition are added to the
constraint.
"""

import logging

from cataverify.chc.terms import Clause, conj, freeVars
from cataverify.chc.pretty import showTerm
from cataverify.chc.subst import applySubst
from cataverify.constraints import Entailment
from .define import programAtoms

__all__ = ["applyContractsToClause", "applyContracts"]

logger = logging.getLogger(__name__)


def _reuse(body, cata, s: dict, info):
    """
    Finds an atom of ``body`` for the contract catamorphism ``cata`` on the
    same ADT variable, with parameters that agree with ``s``.
    """
    adt = s.get(cata.adt, cata.adt)
    for b in body:
        if b.pred != cata.pred:
            continue
        cb = info.split(b)
        if cb.adt == adt and all(
            v not in s or s[v] == w for v, w in zip(cata.inputs, cb.inputs)
        ):
            return cb
    return None


def applyContractsToClause(clause: Clause, contracts: dict, engine, catas: dict) -> Clause:
    """
    Applies the contracts of every program atom of ``clause``, left to
    right.

    Args:
        clause: An unfolded clause.
        contracts: Contracts by program predicate.
        engine: The `ConstraintEngine`.
        catas: `CataInfo` by catamorphism.

    Returns:
        The clause with the additions, or ``clause`` itself if nothing was
        added.
    """
    body = list(clause.body)
    constraint = clause.constraint
    for a in programAtoms(clause.body, catas):
        for k in contracts.get(a.pred, ()):
            if k.isTrivial:
                continue
            # Outputs added by earlier contracts are free in the clause now
            known = set(freeVars((clause.head, constraint, tuple(body))))
            k = k.renamed()
            s = dict(zip(k.z, a.args))
            for cata in k.catas:
                info = catas[cata.pred]
                hit = _reuse(body, cata, s, info)
                if hit is None:
                    body.append(applySubst(s, cata.atom))
                else:
                    s.update(zip(cata.inputs, hit.inputs))
                    s.update(zip(cata.outputs, hit.outputs))

            pre = applySubst(s, k.pre)
            post = applySubst(s, k.post)
            exists = [v for v in freeVars(pre) if v not in known]
            if engine.entails(constraint, pre, exists) is Entailment.YES:
                constraint = conj(constraint, pre, post)
            else:
                logger.warning(
                    "%s: precondition %s of %s not entailed, postcondition not added",
                    clause.origin,
                    showTerm(pre),
                    k.cid,
                )
    if tuple(body) == clause.body and constraint == clause.constraint:
        return clause
    return Clause(clause.head, constraint, tuple(body), clause.origin)


def applyContracts(state, clauses, contracts: dict, engine, catas: dict) -> list[Clause]:
    """
    Applies contracts to every clause of ``clauses``. Changed clauses get a
    fresh clause id.
    """
    res = []
    for clause in clauses:
        new = applyContractsToClause(clause, contracts, engine, catas)
        if new is not clause:
            new = state.label(new)
            state.log("apply-contracts", clause.origin, [new.origin])
        res.append(new)
    return res
