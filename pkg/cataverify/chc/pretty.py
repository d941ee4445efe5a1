"""
Prolog style printing of terms, atoms and clauses.

The output is the concrete syntax accepted by `cataverify.frontend.parser`,
so printed clauses parse back to the same clause up to variable renaming.
"""

from .terms import (
    Var,
    IntConst,
    BoolConst,
    Cons,
    Op,
    Atom,
    Clause,
    TRUE,
    NIL,
    CONS,
    REL_OPS,
    conjuncts,
)

# Binding strength, loosest first
_PREC = {"=>": 1, "|": 2, "&": 3, "~": 4, "+": 6, "-": 6, "*": 7, "neg": 8}
_REL = 5
_ATOMIC = 9


def _name(v: Var, names: dict | None) -> str:
    if names is not None and v in names:
        return names[v]
    return v.name


def _wrap(text: str, prec: int, need: int) -> str:
    return f"({text})" if prec < need else text


def _show(t, names, spaced=False) -> tuple[str, int]:
    # pylint: disable=too-many-return-statements,too-many-branches
    if isinstance(t, Var):
        return _name(t, names), _ATOMIC
    if isinstance(t, IntConst):
        return str(t.value), (_PREC["neg"] if t.value < 0 else _ATOMIC)
    if isinstance(t, BoolConst):
        return ("true" if t.value else "false"), _ATOMIC
    if isinstance(t, Cons):
        return _showCons(t, names), _ATOMIC

    op, args = t.op, t.args
    if op == "ite":
        parts = ",".join(_show(a, names)[0] for a in args)
        return f"ite({parts})", _ATOMIC
    if op in REL_OPS:
        lhs = _wrap(*_show(args[0], names), _PREC["+"])
        rhs = _wrap(*_show(args[1], names), _PREC["+"])
        sep = f" {op} " if spaced else op
        return f"{lhs}{sep}{rhs}", _REL
    if op == "~":
        return "~" + _wrap(*_show(args[0], names), _PREC["~"]), _PREC["~"]
    if op == "neg":
        return "-" + _wrap(*_show(args[0], names), _PREC["neg"]), _PREC["neg"]
    if op == "=>":
        lhs = _wrap(*_show(args[0], names), _PREC["=>"] + 1)
        rhs = _wrap(*_show(args[1], names), _PREC["=>"])
        return f"{lhs} => {rhs}", _PREC["=>"]
    if op in ("&", "|"):
        prec = _PREC[op]
        items = [_wrap(*_show(a, names), prec + 1) for a in args]
        return f" {op} ".join(items), prec
    # + - *
    prec = _PREC[op]
    lhs = _wrap(*_show(args[0], names), prec)
    rhs = _wrap(*_show(args[1], names), prec + 1)
    return f"{lhs}{op}{rhs}", prec


def _showCons(t: Cons, names) -> str:
    if t.name == NIL:
        return "[]"
    if t.name == CONS:
        elems = []
        cur = t
        while isinstance(cur, Cons) and cur.name == CONS:
            elems.append(_wrap(*_show(cur.args[0], names), _PREC["+"]))
            cur = cur.args[1]
        body = ",".join(elems)
        if isinstance(cur, Cons) and cur.name == NIL:
            return f"[{body}]"
        return f"[{body}|{_wrap(*_show(cur, names), _PREC['+'])}]"
    if not t.args:
        return t.name
    return f"{t.name}({','.join(_show(a, names)[0] for a in t.args)})"


def showTerm(t, names: dict | None = None) -> str:
    """
    Prints a term or constraint.

    Args:
        t: The term.
        names: Optional map from `Var` to the name to print for it.
    """
    return _show(t, names)[0]


def showConstraint(c, names: dict | None = None) -> str:
    """
    Prints a constraint as a ``&`` separated list of its conjuncts, with the
    top level relations spaced out, e.g. ``N = ite(X=H,NT+1,NT)``.
    """
    parts = []
    for lit in conjuncts(c):
        text, prec = _show(lit, names, spaced=True)
        parts.append(_wrap(text, prec, _PREC["&"] + 1))
    return " & ".join(parts) if parts else "true"


def showAtom(a: Atom, names: dict | None = None) -> str:
    if not a.args:
        return a.pred
    return f"{a.pred}({','.join(showTerm(t, names) for t in a.args)})"


def showClause(c: Clause, names: dict | None = None) -> str:
    """
    Prints a clause, constraint first, terminated by a full stop.
    """
    head = "false" if c.head is None else showAtom(c.head, names)
    body = []
    if c.constraint != TRUE:
        body.append(showConstraint(c.constraint, names))
    body.extend(showAtom(a, names) for a in c.body)
    if not body:
        return f"{head}."
    return f"{head} :- {', '.join(body)}."
