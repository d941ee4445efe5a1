"""
Decision services over integer and boolean constraints.

The `ConstraintEngine` answers satisfiability and entailment through an SMT
session (see `cataverify.smt`), and implements projection and widening on
top of those.

Queries are printed with variables renamed canonically (``x0``, ``x1``, ...
in order of first occurrence) so that the same question is always the same
text. Answers are cached on that text.
"""

import logging

from dataclasses import dataclass
from enum import Enum

from cataverify.chc.terms import (
    Var,
    Op,
    BoolConst,
    TRUE,
    FALSE,
    REL_OPS,
    conj,
    conjuncts,
    freeVars,
    neg,
)
from cataverify.chc.subst import applySubst
from .smt import SatResult, smtSort, smtTerm

__all__ = [
    "Entailment",
    "ConjunctiveView",
    "ConstraintEngine",
    "conjunctiveView",
    "buildQuery",
]

logger = logging.getLogger(__name__)


class Entailment(Enum):
    """
    Answer to an entailment query. Callers that need soundness treat
    `UNKNOWN` like `NO`.
    """

    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ConjunctiveView:
    """
    A constraint split into its top level conjuncts.

    Attributes:
        literals: Relations, boolean variables and their negations.
        residue: Other conjuncts (disjunctions, implications, ...), each
            treated as a single item.
    """

    literals: tuple
    residue: tuple

    @property
    def items(self) -> tuple:
        return self.literals + self.residue

    def formula(self):
        return conj(*self.items)


def _isLiteral(c) -> bool:
    if isinstance(c, (Var, BoolConst)):
        return True
    if isinstance(c, Op):
        if c.op == "~":
            return _isLiteral(c.args[0])
        return c.op in REL_OPS
    return False


def conjunctiveView(c) -> ConjunctiveView:
    """
    Returns the `ConjunctiveView` of a constraint. The items keep their order
    in ``c``.
    """
    lits, residue = [], []
    for item in conjuncts(c):
        (lits if _isLiteral(item) else residue).append(item)
    return ConjunctiveView(tuple(lits), tuple(residue))


def buildQuery(asserts, negated_exists: tuple | None = None) -> str:
    """
    Prints declarations and assertions for a satisfiability query.

    Args:
        asserts: Constraints to assert.
        negated_exists: An optional pair ``(vs, d)``, asserted as
            ``(not (exists vs d))``.

    The quantified variables are bound in ``d`` only. One that also occurs in
    ``asserts`` stays free there, and the binder shadows it inside ``d``.

    Returns:
        The SMT-LIB text, without ``check-sat``.
    """
    asserts = tuple(asserts)
    bound = set(negated_exists[0]) if negated_exists else set()
    in_asserts = set(freeVars(asserts))
    terms = asserts + ((negated_exists[1],) if negated_exists else ())
    names = {}
    for v in freeVars(terms):
        if v not in bound or v in in_asserts:
            names[v] = f"x{len(names)}"
    lines = [f"(declare-const {n} {smtSort(v.sort)})" for v, n in names.items()]
    lines.extend(f"(assert {smtTerm(a, names)})" for a in asserts)
    if negated_exists:
        d = negated_exists[1]
        qvars = [v for v in freeVars(d) if v in bound]
        if not qvars:
            lines.append(f"(assert (not {smtTerm(d, names)}))")
        else:
            local = dict(names)
            binders = []
            for k, v in enumerate(qvars):
                local[v] = f"e{k}"
                binders.append(f"(e{k} {smtSort(v.sort)})")
            lines.append(
                f"(assert (not (exists ({' '.join(binders)}) {smtTerm(d, local)})))"
            )
    return "\n".join(lines)


class ConstraintEngine:
    """
    Satisfiability, entailment, projection and widening.

    Attributes:
        session: The SMT session answering queries.
    """

    def __init__(self, session):
        self.session = session
        self._cache: dict[str, SatResult] = {}
        self.cache_hits = 0

    def _check(self, text: str) -> SatResult:
        if text in self._cache:
            self.cache_hits += 1
            return self._cache[text]
        res = self.session.check(text)
        self._cache[text] = res
        return res

    def isSat(self, c) -> SatResult:
        """
        Satisfiability of the existential closure of ``c``.
        """
        if c == TRUE:
            return SatResult.SAT
        if c == FALSE:
            return SatResult.UNSAT
        items = conjuncts(c)
        if FALSE in items or any(neg(i) in items for i in items):
            return SatResult.UNSAT
        return self._check(buildQuery(items))

    def entails(self, c, d, exists=()) -> Entailment:
        """
        Whether ``c`` entails ``∃ exists. d`` for all values of the other
        variables.
        """
        if d == TRUE or c == FALSE:
            return Entailment.YES
        c_items = conjuncts(c)
        if not exists and all(i in c_items for i in conjuncts(d)):
            return Entailment.YES
        if exists:
            text = buildQuery(c_items, (tuple(exists), d))
        else:
            text = buildQuery(c_items + (neg(d),))
        res = self._check(text)
        if res is SatResult.UNSAT:
            return Entailment.YES
        if res is SatResult.SAT:
            return Entailment.NO
        logger.debug("Entailment query timed out or unknown")
        return Entailment.UNKNOWN

    def project(self, c, vs) -> object:
        """
        An over-approximation of ``∃(vars(c) - vs). c`` that only mentions
        ``vs``.

        One round of equality propagation substitutes ``X = t`` into the
        other conjuncts when ``X`` is not in ``vs`` and ``t`` only mentions
        ``vs``. Then every conjunct mentioning a variable outside ``vs`` is
        dropped.
        """
        keep = set(vs)
        items = list(conjuncts(c))
        s = {}
        defining = set()
        for i, lit in enumerate(items):
            if not (isinstance(lit, Op) and lit.op == "="):
                continue
            for x, t in (lit.args, lit.args[::-1]):
                if (
                    isinstance(x, Var)
                    and x not in keep
                    and x not in s
                    and all(v in keep for v in freeVars(t))
                ):
                    s[x] = t
                    defining.add(i)
                    break
        if s:
            items = [applySubst(s, lit) for i, lit in enumerate(items) if i not in defining]
        return conj(*(lit for lit in items if all(v in keep for v in freeVars(lit))))

    def widen(self, c1, c2) -> object:
        """
        Keeps the items of ``c1`` that are entailed by ``c2``, in their
        order in ``c1``. The result is entailed by both.
        """
        if c1 == c2:
            return c1
        kept = [
            item
            for item in conjunctiveView(c1).items
            if self.entails(c2, item) is Entailment.YES
        ]
        return conj(*kept)

    def stats(self) -> dict:
        res = self.session.stats.asDict()
        res["cache_hits"] = self.cache_hits
        return res
