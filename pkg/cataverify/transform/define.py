"""
Introduction of definitions.

For every program atom ``A`` of a clause that is not yet covered by a
definition, a new definition is introduced. The first definition for a
predicate projects the clause constraint onto the inputs of ``A`` and its
catamorphisms. Later ones extend the maximal definition of the predicate:
the catamorphism atoms are joined and the constraint is widened.
"""

import itertools
import logging

from collections import Counter

from cataverify.chc.terms import Atom, Var, freeVars
from cataverify.chc.subst import applySubst, match, renameApart
from cataverify.constraints import Entailment
from cataverify.errors import TransformError
from .state import Definition

__all__ = [
    "programAtoms",
    "cataNeighborhood",
    "coveringSubst",
    "define",
]

logger = logging.getLogger(__name__)

# Upper bound on alternative catamorphism matchings tried per definition
MATCH_LIMIT = 64

# Upper bound on search nodes visited while looking for those matchings
SEARCH_LIMIT = 4096


def programAtoms(body, catas: dict) -> list[Atom]:
    return [a for a in body if a.pred not in catas]


def cataNeighborhood(a: Atom, body, catas: dict) -> tuple[Atom, ...]:
    """
    The catamorphism atoms of ``body`` whose ADT argument is an ADT variable
    of ``a``, in body order.
    """
    adt_vars = {v for v in freeVars(a) if not v.sort.isBasic}
    res = []
    for b in body:
        info = catas.get(b.pred)
        if info is None:
            continue
        t = b.args[info.adt_position]
        if isinstance(t, Var) and t in adt_vars and b not in res:
            res.append(b)
    return tuple(res)


def _inputVars(a: Atom, neigh, catas: dict) -> list[Var]:
    res = [v for v in freeVars(a) if v.sort.isBasic]
    for b in neigh:
        info = catas[b.pred]
        for v in freeVars(b.args[: info.adt_position]):
            if v not in res:
                res.append(v)
    return res


def _adtArg(b: Atom, catas: dict):
    return b.args[catas[b.pred].adt_position]


def _matchings(defn: Definition, a: Atom, neigh, catas: dict):
    """
    Substitutions mapping the definition's atom onto ``a`` and the atoms of
    ``neigh`` injectively onto catamorphism atoms of the definition.

    Candidates for a neighborhood atom have its predicate and its ADT
    argument under the atom matching. At most `SEARCH_LIMIT` candidate
    matches are tried, after which the search gives up.
    """
    s0 = match(defn.atom, a)
    if s0 is None:
        return
    keys = [(b.pred, s0.get(_adtArg(b, catas))) for b in defn.catas]
    need = Counter((x.pred, _adtArg(x, catas)) for x in neigh)
    have = Counter(keys)
    if any(n > have[k] for k, n in need.items()):
        return
    cands = [
        [j for j, k in enumerate(keys) if k == (x.pred, _adtArg(x, catas))] for x in neigh
    ]
    order = sorted(range(len(neigh)), key=lambda i: len(cands[i]))
    budget = [SEARCH_LIMIT]

    def extend(k, s, used):
        if k == len(order):
            yield s
            return
        i = order[k]
        for j in cands[i]:
            if j in used:
                continue
            budget[0] -= 1
            if budget[0] < 0:
                return
            s2 = match(defn.catas[j], neigh[i], s)
            if s2 is not None:
                yield from extend(k + 1, s2, used | {j})

    yield from extend(0, s0, frozenset())
    if budget[0] < 0:
        logger.debug("%s: matching search for %s stopped early", defn.new_pred, a.pred)


def _complete(s: dict, defn: Definition) -> dict:
    """
    Maps the definition variables that ``s`` leaves open to fresh ones.
    """
    s = dict(s)
    for v in freeVars(defn.clause):
        if v not in s:
            s[v] = v.fresh()
    return s


def coveringSubst(
    engine, defn: Definition, a: Atom, neigh, constraint, catas: dict
) -> dict | None:
    """
    Checks whether ``defn`` covers the program atom ``a`` with catamorphism
    neighborhood ``neigh`` in a clause with the given constraint.

    Returns:
        The substitution from the definition variables to clause terms, or
        None when ``defn`` does not cover ``a``.
    """
    for s in itertools.islice(_matchings(defn, a, neigh, catas), MATCH_LIMIT):
        full = _complete(s, defn)
        d = applySubst(full, defn.constraint)
        if engine.entails(constraint, d) is Entailment.YES:
            return full
    return None


def _isCovered(state, engine, a, neigh, constraint, catas) -> bool:
    return any(
        coveringSubst(engine, d, a, neigh, constraint, catas) is not None
        for d in state.defsFor(a.pred)
    )


def _fresh(defn: Definition) -> Definition:
    """
    Renames the variables of a definition apart from the clause it was built
    from.
    """
    (constraint, atom, catas), _ = renameApart((defn.constraint, defn.atom, defn.catas))
    return Definition.build(defn.new_pred, constraint, atom, catas)


def _project(state, engine, a, neigh, constraint, catas) -> Definition:
    c = engine.project(constraint, _inputVars(a, neigh, catas))
    return _fresh(Definition.build(state.newPredName("new"), c, a, neigh))


def _extend(state, engine, m: Definition, a, neigh, constraint, catas) -> Definition:
    """
    Generalizes the maximal definition ``m`` so that it also covers ``a``.
    """
    s = match(m.atom, a)
    if s is None:
        raise TransformError(f"{m.new_pred} does not match {a.pred}")
    merged, taken = [], set()
    for b in m.catas:
        info = catas[b.pred]
        cb = info.split(b)
        adt = s.get(cb.adt, cb.adt)
        hit = None
        for k, x in enumerate(neigh):
            if x.pred != b.pred or k in taken:
                continue
            cx = info.split(x)
            if cx.adt == adt and all(
                v not in s or s[v] == w for v, w in zip(cb.inputs, cx.inputs)
            ):
                hit = k
                break
        if hit is None:
            for v in freeVars(b):
                if v not in s:
                    s[v] = v.fresh()
            merged.append(applySubst(s, b))
        else:
            taken.add(hit)
            cx = info.split(neigh[hit])
            s.update(zip(cb.inputs, cx.inputs))
            s.update(zip(cb.outputs, cx.outputs))
            merged.append(neigh[hit])
    merged.extend(x for k, x in enumerate(neigh) if k not in taken)

    d = applySubst(s, m.constraint)
    c = engine.widen(d, constraint)
    return _fresh(Definition.build(state.newPredName("ext"), c, a, tuple(merged)))


def define(state, engine, catas: dict) -> list[Definition]:
    """
    Introduces definitions for the uncovered program atoms of
    ``state.in_cls``, clause by clause and left to right.

    Returns:
        The new definitions, which are also added to ``state.defs``.
    """
    new_defs = []
    for clause in state.in_cls:
        for a in programAtoms(clause.body, catas):
            neigh = cataNeighborhood(a, clause.body, catas)
            if _isCovered(state, engine, a, neigh, clause.constraint, catas):
                continue
            m = state.maximal(a.pred)
            if m is None:
                d = _project(state, engine, a, neigh, clause.constraint, catas)
                rule = "define-project"
            else:
                d = _extend(state, engine, m, a, neigh, clause.constraint, catas)
                rule = "define-extend"
            state.addDefinition(d)
            new_defs.append(d)
            state.log(rule, clause.origin, [d.new_pred])
            logger.debug(
                "%s: %s/%s with %s catamorphism atoms",
                rule,
                d.new_pred,
                len(d.head_vars),
                len(d.catas),
            )
    return new_defs
