"""
Specialization of program atoms with constructor terms as arguments.

A body atom like ``delmin(node(B,U,V),M,D)`` is replaced by
``delmin_1(B,U,V,M,D)``, where ``delmin_1`` is defined by unfolding
``delmin(node(B,U,V),M,D)`` once against the clauses of ``delmin``. Atoms
with constructor arguments in the new clauses are specialized in turn, and
folded into an existing specialization when they are an instance of its
pattern.

The contracts of the original predicate carry over to the specialized one,
with the catamorphisms on constructor terms unfolded.
"""

import itertools
import logging

from dataclasses import dataclass, field

from cataverify.config import SPECIALIZE_DEPTH
from cataverify.chc.terms import Atom, Clause, Cons, Var, conj, freeVars
from cataverify.chc.subst import applySubst, match, mgu, renameApart
from cataverify.errors import TransformError
from cataverify.frontend.contracts import Contract

__all__ = ["Specialization", "specializeConstructorCalls"]

logger = logging.getLogger(__name__)


@dataclass
class Specialization:
    """
    Result of `specializeConstructorCalls`.

    Attributes:
        clauses: Program clauses, specialized predicates included.
        goals: The goals, with constructor calls replaced.
        contracts: Contracts derived for the specialized predicates.
        patterns: The specialized atom pattern by new predicate.
    """

    clauses: list[Clause]
    goals: list[Clause]
    contracts: list[Contract] = field(default_factory=list)
    patterns: dict[str, Atom] = field(default_factory=dict)


class _Specializer:
    """
    Worker for `specializeConstructorCalls`.
    """

    def __init__(self, clauses, contracts, catas: dict, depth: int):
        self.by_pred: dict[str, list[Clause]] = {}
        for c in clauses:
            self.by_pred.setdefault(c.head.pred, []).append(c)
        self.contracts: dict[str, list[Contract]] = {}
        for k in contracts:
            self.contracts.setdefault(k.pred, []).append(k)
        self.catas = catas
        self.depth = depth
        self.specs: list[tuple[str, Atom, tuple]] = []
        self.new_clauses: list[Clause] = []
        self.derived: list[Contract] = []
        self._ids = itertools.count(1)

    def needs(self, atom: Atom) -> bool:
        return atom.pred not in self.catas and any(isinstance(t, Cons) for t in atom.args)

    def clause(self, c: Clause, depth: int) -> Clause:
        if not any(self.needs(a) for a in c.body):
            return c
        body = tuple(self.replace(a, depth) if self.needs(a) else a for a in c.body)
        return Clause(c.head, c.constraint, body, c.origin)

    def replace(self, atom: Atom, depth: int) -> Atom:
        for name, pattern, w in self.specs:
            s = match(pattern, atom)
            if s is not None and all(isinstance(s[v], Var) for v in w):
                return Atom(name, tuple(s[v] for v in w))
        if depth >= self.depth:
            msg = f"Specialization of {atom.pred} does not stop after {self.depth} levels"
            logger.error(msg)
            raise TransformError(msg)
        return self.create(atom, depth)

    def create(self, atom: Atom, depth: int) -> Atom:
        pattern, _ = renameApart(atom)
        w = freeVars(pattern)
        name = f"{atom.pred}_{next(self._ids)}"
        self.specs.append((name, pattern, w))
        logger.debug("Specializing %s as %s/%s", atom.pred, name, len(w))

        head = Atom(name, w)
        for p in self.by_pred.get(atom.pred, []):
            p, _ = renameApart(p)
            s = mgu(p.head, pattern)
            if s is None:
                continue
            r = applySubst(s, Clause(head, p.constraint, p.body, f"spec:{name}"))
            self.new_clauses.append(self.clause(r, depth + 1))

        for k in self.contracts.get(atom.pred, []):
            self.derived.append(self.deriveContract(k, name, pattern, w))
        s = match(pattern, atom)
        return Atom(name, tuple(s[v] for v in w))

    def expandCata(self, atom: Atom, pre: list, out: list):
        info = self.catas[atom.pred]
        if isinstance(atom.args[info.adt_position], Var):
            out.append(info.split(atom))
            return
        for c in info.clauses:
            c, _ = renameApart(c)
            s = mgu(c.head, atom)
            if s is None:
                continue
            pre.append(applySubst(s, c.constraint))
            for b in c.body:
                self.expandCata(applySubst(s, b), pre, out)
            return
        raise TransformError(f"No clause of {atom.pred} matches {atom}")

    def deriveContract(self, k: Contract, name: str, pattern: Atom, w) -> Contract:
        k = k.renamed()
        s = dict(zip(k.z, pattern.args))
        pre, catas = [applySubst(s, k.pre)], []
        for cata in k.catas:
            self.expandCata(applySubst(s, cata.atom), pre, catas)
        return Contract(
            f"{k.cid}/{name}",
            name,
            tuple(w),
            conj(*pre),
            tuple(catas),
            applySubst(s, k.post),
            k.line,
            implied=True,
        )


def specializeConstructorCalls(
    clauses, goals, contracts, catas: dict, depth: int = SPECIALIZE_DEPTH
) -> Specialization:
    """
    Replaces program atoms with constructor arguments in clause bodies by
    atoms of specialized predicates.

    Args:
        clauses: The program clauses.
        goals: The goals.
        contracts: Contracts of the program predicates.
        catas: `CataInfo` by catamorphism.
        depth: Nesting limit for specializations introduced while
            specializing.

    Raises:
        TransformError: when specialization does not stop within ``depth``
            levels.

    Returns:
        The `Specialization`.
    """
    worker = _Specializer(clauses, contracts, catas, depth)
    new = [worker.clause(c, 0) for c in clauses]
    new_goals = [worker.clause(g, 0) for g in goals]
    if worker.specs:
        logger.debug("Introduced %s specialized predicates", len(worker.specs))
    return Specialization(
        new + worker.new_clauses,
        new_goals,
        worker.derived,
        {name: pattern for name, pattern, _ in worker.specs},
    )
