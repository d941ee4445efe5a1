"""
Contracts and their goal encoding.

A contract for a program predicate ``pred`` has the form::

    pred(Z) ==> c, cata_1(X_1,T_1,Y_1), ..., cata_n(X_n,T_n,Y_n) => d

It is valid when every ``pred(Z)`` in the least model, whose catamorphism
values satisfy the precondition ``c``, also satisfies the postcondition
``d``. The goal `contractToGoal` builds is satisfiable together with the
program exactly when the contract is valid.
"""

import logging

from dataclasses import dataclass

from cataverify.chc.terms import (
    Atom,
    Clause,
    Op,
    Var,
    TRUE,
    FALSE,
    conj,
    disj,
    neg,
    conjuncts,
    freeVars,
)
from cataverify.chc.subst import applySubst, freshVars

__all__ = [
    "CataAtom",
    "Contract",
    "contractToGoal",
    "goalToContract",
    "trivialContract",
    "pushNegation",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CataAtom:
    """
    A catamorphism atom ``cata(X, T, Y)``: parameters, the ADT argument and
    outputs, in argument order.
    """

    pred: str
    inputs: tuple[Var, ...]
    adt: Var
    outputs: tuple[Var, ...]

    @property
    def atom(self) -> Atom:
        return Atom(self.pred, self.inputs + (self.adt,) + self.outputs)

    @classmethod
    def fromAtom(cls, atom: Atom, adt_index: int) -> "CataAtom":
        return cls(
            atom.pred,
            tuple(atom.args[:adt_index]),
            atom.args[adt_index],
            tuple(atom.args[adt_index + 1 :]),
        )


@dataclass(frozen=True)
class Contract:
    """
    A contract.

    Attributes:
        cid: Identifier, unique within a program, e.g. ``rev@12``.
        pred: The program predicate.
        z: The distinct head variables.
        pre: Precondition over parameters and head variables.
        catas: The catamorphism atoms.
        post: Postcondition.
        line: Source line, 0 when recovered or generated.
        implied: True for contracts derived from another one. They are
            used as assumptions but get no goal of their own.
    """

    cid: str
    pred: str
    z: tuple[Var, ...]
    pre: object
    catas: tuple[CataAtom, ...]
    post: object
    line: int = 0
    implied: bool = False

    @property
    def head(self) -> Atom:
        return Atom(self.pred, self.z)

    @property
    def isTrivial(self) -> bool:
        return not self.catas and self.post == TRUE

    def renamed(self) -> "Contract":
        """
        Returns a variant of the contract with fresh variables.
        """
        ren = freshVars(
            freeVars((self.z, self.pre, [c.atom for c in self.catas], self.post))
        )
        return Contract(
            self.cid,
            self.pred,
            applySubst(ren, self.z),
            applySubst(ren, self.pre),
            tuple(
                CataAtom(
                    c.pred,
                    applySubst(ren, c.inputs),
                    applySubst(ren, c.adt),
                    applySubst(ren, c.outputs),
                )
                for c in self.catas
            ),
            applySubst(ren, self.post),
            self.line,
            self.implied,
        )


def pushNegation(c):
    """
    Returns the negation of ``c`` with the negation pushed through ``&``,
    ``|`` and ``=>``. Relations and bool equalities are negated in place.
    """
    if isinstance(c, Op):
        if c.op == "~":
            return c.args[0]
        if c.op == "&":
            return disj(*(pushNegation(a) for a in c.args))
        if c.op == "|":
            return conj(*(pushNegation(a) for a in c.args))
        if c.op == "=>":
            return conj(c.args[0], pushNegation(c.args[1]))
    return neg(c)


def contractToGoal(k: Contract) -> Clause | None:
    """
    Builds the goal ``false :- ~d, c, pred(Z), Catas`` for a contract, with
    fresh variables.

    Returns:
        The goal, or None when the postcondition is ``true``, since such a
        goal can never be violated.
    """
    if k.post == TRUE:
        logger.warning("Contract %s has postcondition true, no goal generated", k.cid)
        return None
    k = k.renamed()
    constraint = conj(pushNegation(k.post), k.pre)
    return Clause(
        None,
        constraint,
        (k.head,) + tuple(c.atom for c in k.catas),
        f"goal:{k.cid}",
    )


def goalToContract(
    goal: Clause, cata_positions: dict[str, int], program_preds
) -> Contract | None:
    """
    Recovers a contract from a goal written directly in the input.

    The goal must have exactly one program atom with distinct variable
    arguments, and only catamorphism atoms otherwise, each on an ADT variable
    of the program atom. Constraint conjuncts over parameters and head
    variables only become the precondition, the rest is the negated
    postcondition.

    Args:
        goal: The goal clause.
        cata_positions: Catamorphism predicate to ADT argument index.
        program_preds: The program predicates.

    Returns:
        The contract, or None if the goal does not have the required shape.
    """
    prog = [a for a in goal.body if a.pred in program_preds]
    others = [a for a in goal.body if a.pred not in program_preds]
    if len(prog) != 1 or any(a.pred not in cata_positions for a in others):
        return None
    head = prog[0]
    z = head.args
    if not all(isinstance(v, Var) for v in z) or len(set(z)) != len(z):
        return None

    catas = []
    for a in others:
        cata = CataAtom.fromAtom(a, cata_positions[a.pred])
        if cata.adt not in z:
            return None
        if not all(isinstance(v, Var) for v in cata.inputs + cata.outputs):
            return None
        catas.append(cata)

    outputs = {v for c in catas for v in c.outputs}
    if len(outputs) != sum(len(c.outputs) for c in catas) or outputs & set(z):
        return None

    pre, violation = [], []
    for lit in conjuncts(goal.constraint):
        if any(v in outputs for v in freeVars(lit)):
            violation.append(lit)
        else:
            pre.append(lit)
    post = pushNegation(conj(*violation)) if violation else FALSE

    cid = f"{head.pred}@{goal.origin or 'goal'}"
    return Contract(cid, head.pred, tuple(z), conj(*pre), tuple(catas), post)


def trivialContract(pred: str, z: tuple[Var, ...]) -> Contract:
    """
    A contract without catamorphisms and postcondition ``true``. Used for
    program predicates that are not the subject of the current run.
    """
    return Contract(f"{pred}@trivial", pred, z, TRUE, (), TRUE)
