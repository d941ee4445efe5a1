"""
Serialization of clause sets.

    - `emitProlog` prints clauses in the input syntax, one per line, with
      variables named ``A``, ``B``, ..., ``Z``, ``A1``, ... per clause.
    - `emitSmtlib` prints an SMT-LIB script in the HORN logic. ADT sorts, if
      any are left, are declared with ``declare-datatypes``.

Both are deterministic: the same clauses give the same text.
"""

import logging
import string

from cataverify.chc.terms import NIL, CONS, TRUE, Atom, SortTable, freeVars, termSort
from cataverify.chc.pretty import showClause
from .smt import smtSort, smtSymbol, smtTerm

__all__ = ["emitProlog", "emitSmtlib", "canonicalNames", "adtName", "consName"]

logger = logging.getLogger(__name__)


def canonicalNames(x) -> dict:
    """
    Names the variables of ``x`` ``A``, ``B``, ..., ``Z``, ``A1``, ``B1``,
    ... in order of first occurrence.
    """
    names = {}
    for i, v in enumerate(freeVars(x)):
        letter = string.ascii_uppercase[i % 26]
        names[v] = letter if i < 26 else f"{letter}{i // 26}"
    return names


def emitProlog(clauses, header: str | None = None) -> str:
    """
    Prints clauses in the input syntax.

    Args:
        clauses: The clauses.
        header: Optional comment lines, without the ``%`` prefix.
    """
    lines = []
    if header:
        lines.extend(f"% {line}" if line else "%" for line in header.splitlines())
    for c in clauses:
        lines.append(showClause(c, canonicalNames(c)))
    return "".join(line + "\n" for line in lines)


def adtName(sort) -> str:
    """
    SMT-LIB datatype name of an ADT sort: ``list(int)`` gives ``list_int``.
    """
    if sort.isBasic:
        return sort.name
    return "_".join([sort.name] + [adtName(p) for p in sort.params])


def _consBase(name: str, sort) -> str:
    if name == NIL:
        name = "nil"
    elif name == CONS:
        name = "cons"
    return f"{name}_{adtName(sort)}"


def consName(name: str, sort) -> str:
    """
    SMT-LIB constructor name: ``[|]`` of ``list(int)`` gives
    ``cons_list_int``.
    """
    return smtSymbol(_consBase(name, sort))


def _sortName(sort) -> str:
    return smtSort(sort, lambda s: smtSymbol(adtName(s)))


def _adtSorts(clauses, sorts: SortTable) -> list:
    """
    The ADT sorts used by the clauses, each after the sorts its
    constructors need.
    """
    order = []

    def visit(sort):
        if sort.isBasic or sort in order:
            return
        order.append(sort)
        for _, args in sorts.constructors(sort):
            for a in args:
                if a != sort:
                    visit(a)
        # Dependencies go first
        order.remove(sort)
        order.append(sort)

    for v in freeVars(list(clauses)):
        visit(v.sort)
    for c in clauses:
        for a in ([c.head] if c.head else []) + list(c.body):
            for t in a.args:
                visit(termSort(t))
    return order


def _datatype(sort, sorts: SortTable) -> str:
    alts = []
    for name, args in sorts.constructors(sort):
        cname = consName(name, sort)
        if not args:
            alts.append(f"({cname})")
            continue
        fields = " ".join(
            f"({smtSymbol(f'{_consBase(name, sort)}_{k}')} {_sortName(a)})"
            for k, a in enumerate(args)
        )
        alts.append(f"({cname} {fields})")
    name = smtSymbol(adtName(sort))
    return f"(declare-datatypes (({name} 0)) (({' '.join(alts)})))"


def _signatures(clauses) -> dict[str, tuple]:
    sigs = {}
    for c in clauses:
        for a in ([c.head] if c.head else []) + list(c.body):
            sigs.setdefault(a.pred, tuple(termSort(t) for t in a.args))
    return sigs


def _atom(a: Atom, names: dict) -> str:
    if not a.args:
        return smtSymbol(a.pred)
    args = " ".join(smtTerm(t, names, consName) for t in a.args)
    return f"({smtSymbol(a.pred)} {args})"


def _clause(c, names: dict) -> str:
    parts = []
    if c.constraint != TRUE:
        parts.append(smtTerm(c.constraint, names, consName))
    parts.extend(_atom(a, names) for a in c.body)
    if not parts:
        body = "true"
    elif len(parts) == 1:
        body = parts[0]
    else:
        body = f"(and {' '.join(parts)})"
    head = "false" if c.head is None else _atom(c.head, names)
    if not names:
        return f"(assert (=> {body} {head}))"
    binders = " ".join(f"({n} {_sortName(v.sort)})" for v, n in names.items())
    return f"(assert (forall ({binders}) (=> {body} {head})))"


def emitSmtlib(clauses, sorts: SortTable | None = None, header: str | None = None) -> str:
    """
    Prints an SMT-LIB script for the satisfiability of the clauses.

    Args:
        clauses: The clauses.
        sorts: The `SortTable`, needed when the clauses use ADT sorts.
        header: Optional comment lines.

    Returns:
        The script, ending with ``(check-sat)``.
    """
    clauses = list(clauses)
    lines = []
    if header:
        lines.extend(f"; {line}" if line else ";" for line in header.splitlines())
    lines.append("(set-logic HORN)")
    table = sorts or SortTable()
    for sort in _adtSorts(clauses, table):
        lines.append(_datatype(sort, table))
    for pred, sig in _signatures(clauses).items():
        args = " ".join(_sortName(s) for s in sig)
        lines.append(f"(declare-fun {smtSymbol(pred)} ({args}) Bool)")
    for c in clauses:
        lines.append(_clause(c, canonicalNames(c)))
    lines.append("(check-sat)")
    logger.debug("Emitted %s clauses as SMT-LIB", len(clauses))
    return "".join(line + "\n" for line in lines)
