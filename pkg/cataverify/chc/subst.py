"""
Substitutions, unification, matching and renaming.

A substitution is a plain ``dict`` from `Var` to term. The substitutions
returned from `mgu` and `match` are idempotent: no variable of the domain
occurs in the range.
"""

from .terms import (
    Var,
    IntConst,
    BoolConst,
    Cons,
    Op,
    Atom,
    Clause,
    freeVars,
    termSort,
)

__all__ = [
    "applySubst",
    "mgu",
    "unifyTerms",
    "match",
    "matchTerms",
    "renameApart",
    "freshVars",
    "varPartition",
    "isVariant",
]


def applySubst(s: dict, x):
    """
    Applies substitution ``s`` simultaneously to a term, atom, clause or a
    tuple/list of these.
    """
    # pylint: disable=too-many-return-statements
    if not s:
        return x
    if isinstance(x, Var):
        return s.get(x, x)
    if isinstance(x, (IntConst, BoolConst)):
        return x
    if isinstance(x, Cons):
        return Cons(x.name, tuple(applySubst(s, a) for a in x.args), x.sort)
    if isinstance(x, Op):
        return Op(x.op, tuple(applySubst(s, a) for a in x.args))
    if isinstance(x, Atom):
        return Atom(x.pred, tuple(applySubst(s, a) for a in x.args))
    if isinstance(x, Clause):
        return Clause(
            None if x.head is None else applySubst(s, x.head),
            applySubst(s, x.constraint),
            tuple(applySubst(s, a) for a in x.body),
            x.origin,
        )
    if isinstance(x, tuple):
        return tuple(applySubst(s, a) for a in x)
    if isinstance(x, list):
        return [applySubst(s, a) for a in x]
    raise TypeError(f"Can not apply a substitution to {type(x).__name__}")


def _resolve(t, s: dict):
    while isinstance(t, Var) and t in s:
        t = s[t]
    return t


def _occurs(v: Var, t, s: dict) -> bool:
    t = _resolve(t, s)
    if t == v:
        return True
    if isinstance(t, (Cons, Op)):
        return any(_occurs(v, a, s) for a in t.args)
    return False


def _unify(a, b, s: dict) -> bool:
    # pylint: disable=too-many-return-statements
    a = _resolve(a, s)
    b = _resolve(b, s)
    if a == b:
        return True
    if isinstance(a, Var):
        if termSort(b) != a.sort or _occurs(a, b, s):
            return False
        s[a] = b
        return True
    if isinstance(b, Var):
        if termSort(a) != b.sort or _occurs(b, a, s):
            return False
        s[b] = a
        return True
    if isinstance(a, Cons) and isinstance(b, Cons):
        if a.name != b.name or len(a.args) != len(b.args):
            return False
        return all(_unify(x, y, s) for x, y in zip(a.args, b.args))
    # Constants that differ, or interpreted operations, which are rigid here
    return False


def _idempotent(s: dict) -> dict:
    def full(t):
        t = _resolve(t, s)
        if isinstance(t, (Cons, Op)):
            return type(t)(*_rebuild(t, full))
        return t

    return {v: full(t) for v, t in s.items()}


def _rebuild(t, fn):
    if isinstance(t, Cons):
        return (t.name, tuple(fn(a) for a in t.args), t.sort)
    return (t.op, tuple(fn(a) for a in t.args))


def unifyTerms(pairs, s: dict | None = None) -> dict | None:
    """
    Unifies each pair of terms in ``pairs``, extending ``s``.

    Returns:
        The idempotent unifier, or None if there is none.
    """
    s = dict(s or {})
    for a, b in pairs:
        if not _unify(a, b, s):
            return None
    return _idempotent(s)


def mgu(a: Atom, b: Atom) -> dict | None:
    """
    Most general unifier of two atoms.

    When two variables are unified, the one from ``a`` is bound to the one from
    ``b``.

    Returns:
        The unifier, or None if the predicates differ or the arguments do not
        unify.
    """
    if a.pred != b.pred or len(a.args) != len(b.args):
        return None
    return unifyTerms(zip(a.args, b.args))


def matchTerms(pattern, target, s: dict) -> dict | None:
    """
    One way matching: extends ``s`` so that ``applySubst(s, pattern) ==
    target``. Variables in ``target`` are treated as constants.

    Returns:
        The extended substitution (a new dict) or None.
    """
    s = dict(s)
    stack = [(pattern, target)]
    while stack:
        p, t = stack.pop()
        if isinstance(p, Var):
            if p in s:
                if s[p] != t:
                    return None
            elif termSort(t) != p.sort:
                return None
            else:
                s[p] = t
        elif isinstance(p, Cons):
            if not isinstance(t, Cons) or t.name != p.name or len(t.args) != len(p.args):
                return None
            stack.extend(zip(p.args, t.args))
        elif isinstance(p, (Op, Atom)):
            if type(t) is not type(p) or len(t.args) != len(p.args):
                return None
            if (p.op if isinstance(p, Op) else p.pred) != (
                t.op if isinstance(t, Op) else t.pred
            ):
                return None
            stack.extend(zip(p.args, t.args))
        elif isinstance(p, (tuple, list)):
            if not isinstance(t, (tuple, list)) or len(p) != len(t):
                return None
            stack.extend(zip(p, t))
        elif isinstance(p, Clause):
            if not isinstance(t, Clause) or (p.head is None) != (t.head is None):
                return None
            stack.append(((p.head, p.constraint, p.body), (t.head, t.constraint, t.body)))
        elif p != t:
            return None
    return s


def match(pattern: Atom, target: Atom, s: dict | None = None) -> dict | None:
    """
    Matches atom ``pattern`` onto atom ``target``. See `matchTerms`.
    """
    if pattern.pred != target.pred or len(pattern.args) != len(target.args):
        return None
    return matchTerms(pattern.args, target.args, s or {})


def freshVars(vs) -> dict:
    """
    Returns a renaming of the variables ``vs`` to new variables.
    """
    return {v: v.fresh() for v in vs}


def renameApart(x):
    """
    Renames every variable of ``x`` to a new one.

    Returns:
        A tuple ``(renamed, renaming)``.
    """
    ren = freshVars(freeVars(x))
    return applySubst(ren, x), ren


def varPartition(atoms) -> tuple[tuple[Var, ...], tuple[Var, ...]]:
    """
    Splits the variables of the atoms into basic sorted ones and ADT sorted
    ones.

    Returns:
        A tuple ``(bvars, adt_vars)``, each in order of first occurrence.
    """
    vs = freeVars(tuple(atoms))
    return (
        tuple(v for v in vs if v.sort.isBasic),
        tuple(v for v in vs if not v.sort.isBasic),
    )


def isVariant(a, b) -> bool:
    """
    True if ``a`` and ``b`` are equal up to a bijective variable renaming.
    """
    s = matchTerms(a, b, {})
    if s is None:
        return False
    targets = list(s.values())
    return all(isinstance(t, Var) for t in targets) and len(set(targets)) == len(
        targets
    )
