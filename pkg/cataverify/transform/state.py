"""
State of a transformation run: definitions, clause sets and the step log.
"""

import itertools
import logging

from dataclasses import dataclass, field

from cataverify.chc.terms import Atom, Clause, freeVars
from cataverify.chc.subst import varPartition

__all__ = ["Definition", "StepRecord", "TransformState"]

logger = logging.getLogger(__name__)


@dataclass
class Definition:
    """
    A definition ``new_pred(U) :- constraint, atom, catas``.

    Attributes:
        new_pred: The introduced predicate, ``new<k>`` or ``ext<k>``.
        head_vars: ``U``, the basic sorted variables of the body.
        constraint: Constraint over parameters of the catamorphisms and basic
            arguments of ``atom``.
        atom: The single program atom, with distinct variable arguments.
        catas: Catamorphism atoms on ADT variables of ``atom``.
        for_pred: The predicate of ``atom``.
        is_maximal: True for the most general definition of ``for_pred``.
    """

    new_pred: str
    head_vars: tuple
    constraint: object
    atom: Atom
    catas: tuple[Atom, ...]
    for_pred: str
    is_maximal: bool = True

    @property
    def head(self) -> Atom:
        return Atom(self.new_pred, self.head_vars)

    @property
    def clause(self) -> Clause:
        return Clause(self.head, self.constraint, (self.atom,) + self.catas, self.new_pred)

    @classmethod
    def build(cls, name: str, constraint, atom: Atom, catas) -> "Definition":
        """
        Creates a definition, computing the head variables in order of first
        occurrence over the program atom, the catamorphisms and the constraint.
        """
        bvars, _ = varPartition((atom,) + tuple(catas))
        extra = [v for v in freeVars(constraint) if v.sort.isBasic and v not in bvars]
        return cls(name, bvars + tuple(extra), constraint, atom, tuple(catas), atom.pred)


@dataclass(frozen=True)
class StepRecord:
    """
    One rule application: which rule, on which clause, producing which
    clauses.
    """

    iteration: int
    rule: str
    source: str
    outputs: tuple[str, ...]

    def line(self) -> str:
        return f"{self.iteration}\t{self.rule}\t{self.source}\t{','.join(self.outputs)}"

    @classmethod
    def parse(cls, line: str) -> "StepRecord":
        it, rule, source, outputs = line.rstrip("\n").split("\t")
        return cls(int(it), rule, source, tuple(o for o in outputs.split(",") if o))


@dataclass
class TransformState:
    """
    The clause sets of the transformation loop.

    Attributes:
        in_cls: Clauses still to be covered by definitions.
        defs: All definitions, in order of introduction.
        out_cls: Foldable clauses.
        step_log: The derivation records.
        iteration: Number of the current loop iteration.
        program: Program clauses by predicate, specialized ones included.
    """

    program: dict[str, list[Clause]]
    in_cls: list[Clause] = field(default_factory=list)
    defs: list[Definition] = field(default_factory=list)
    out_cls: list[Clause] = field(default_factory=list)
    step_log: list[StepRecord] = field(default_factory=list)
    iteration: int = 0
    _pred_ids: itertools.count = field(default_factory=lambda: itertools.count(1))
    _clause_ids: itertools.count = field(default_factory=lambda: itertools.count(1))

    def newPredName(self, prefix: str) -> str:
        return f"{prefix}{next(self._pred_ids)}"

    def label(self, clause: Clause) -> Clause:
        """
        Returns ``clause`` with a fresh clause id as its origin.
        """
        return Clause(
            clause.head, clause.constraint, clause.body, f"c{next(self._clause_ids)}"
        )

    def log(self, rule: str, source: str, outputs) -> None:
        rec = StepRecord(self.iteration, rule, source, tuple(outputs))
        self.step_log.append(rec)
        logger.debug("step %s", rec.line())

    def maximal(self, pred: str) -> Definition | None:
        return next((d for d in self.defs if d.for_pred == pred and d.is_maximal), None)

    def defsFor(self, pred: str) -> list[Definition]:
        return [d for d in self.defs if d.for_pred == pred]

    def addDefinition(self, d: Definition) -> None:
        """
        Registers ``d`` as the maximal definition of its predicate.
        """
        for other in self.defs:
            if other.for_pred == d.for_pred:
                other.is_maximal = False
        d.is_maximal = True
        self.defs.append(d)
