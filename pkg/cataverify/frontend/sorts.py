"""
Sort inference for parsed programs.

Sorts are inferred by unification over sort terms, with one sort variable per
predicate argument position and per clause variable. Positions that are not
constrained by anything default to ``int``.
"""

import itertools
import logging

from dataclasses import dataclass, field

from cataverify.chc.terms import (
    Sort,
    SortKind,
    SortTable,
    TypeParam,
    INT,
    BOOL,
)
from cataverify.errors import SortError
from .parser import PVar, PInt, PBool, PApp, PNil, PCons, POp, ClauseItem, SpecItem

__all__ = ["SortInfo", "SortUnifier", "inferSorts"]

logger = logging.getLogger(__name__)

_ids = itertools.count()


@dataclass(frozen=True)
class SVar:
    """
    Sort variable.
    """

    ident: int = field(default_factory=lambda: next(_ids))


@dataclass(frozen=True)
class SApp:
    """
    Sort constructor applied to sort terms: ``int``, ``list(α)``, ...
    """

    name: str
    args: tuple = ()


S_INT = SApp("int")
S_BOOL = SApp("bool")


class SortUnifier:
    """
    Union-find over sort terms.
    """

    def __init__(self):
        self.parent: dict[SVar, object] = {}

    def find(self, t):
        while isinstance(t, SVar) and t in self.parent:
            t = self.parent[t]
        return t

    def _occurs(self, v: SVar, t) -> bool:
        t = self.find(t)
        if t == v:
            return True
        return isinstance(t, SApp) and any(self._occurs(v, a) for a in t.args)

    def unify(self, a, b) -> bool:
        """
        Unifies two sort terms.

        Returns:
            False on a clash.
        """
        a, b = self.find(a), self.find(b)
        if a == b:
            return True
        if isinstance(a, SVar):
            if self._occurs(a, b):
                return False
            self.parent[a] = b
            return True
        if isinstance(b, SVar):
            return self.unify(b, a)
        if a.name != b.name or len(a.args) != len(b.args):
            return False
        return all(self.unify(x, y) for x, y in zip(a.args, b.args))

    def resolve(self, t) -> Sort:
        """
        Converts a sort term to a `Sort`, defaulting unbound variables to
        ``int``.
        """
        t = self.find(t)
        if isinstance(t, SVar):
            return INT
        if t.name == "int":
            return INT
        if t.name == "bool":
            return BOOL
        return Sort(t.name, SortKind.ADT, tuple(self.resolve(a) for a in t.args))


def templateTerm(tmpl, env: dict):
    """
    Converts a constructor argument template to a sort term.
    """
    if isinstance(tmpl, TypeParam):
        return env[tmpl.name]
    return SApp(tmpl.name, tuple(templateTerm(p, env) for p in tmpl.params))


@dataclass
class SortInfo:
    """
    The result of sort inference.

    Attributes:
        signatures: Argument sorts per predicate.
        var_sorts: For every parse item (by index), the sort of each variable
            name.
        node_sorts: Sort of every constructor term node, keyed by ``id()``.
    """

    signatures: dict[str, tuple[Sort, ...]]
    var_sorts: list[dict[str, Sort]]
    node_sorts: dict[int, Sort]


class _Inferrer:
    """
    Collects sort equations for all items.
    """

    def __init__(self, table: SortTable):
        self.table = table
        self.u = SortUnifier()
        self.preds: dict[str, list[SVar]] = {}
        self.node_terms: dict[int, object] = {}
        self.item_vars: list[dict[str, SVar]] = []
        self.vars: dict[str, SVar] = {}
        self.line = 0

    def conflict(self, expr, msg="sort conflict"):
        name = _firstVar(expr)
        where = f" on {name}" if name else ""
        return SortError(f"line {self.line}: {msg}{where}")

    def need(self, a, b, expr):
        if not self.u.unify(a, b):
            raise self.conflict(expr)

    def predArgs(self, name: str, arity: int) -> list[SVar]:
        if name not in self.preds:
            self.preds[name] = [SVar() for _ in range(arity)]
        elif len(self.preds[name]) != arity:
            raise SortError(
                f"line {self.line}: {name} used with arity {arity} and "
                f"{len(self.preds[name])}"
            )
        return self.preds[name]

    def atom(self, a: PApp):
        if self.table.isConstructor(a.name):
            raise SortError(f"line {self.line}: constructor {a.name} used as an atom")
        sig = self.predArgs(a.name, len(a.args))
        for idx, (arg, s) in enumerate(zip(a.args, sig)):
            if not self.u.unify(self.expr(arg), s):
                raise SortError(f"line {self.line}: sort conflict", a.name, idx)

    def expr(self, e):
        """
        Returns the sort term of an expression.
        """
        # pylint: disable=too-many-return-statements,too-many-branches
        if isinstance(e, PVar):
            return self.vars.setdefault(e.name, SVar())
        if isinstance(e, PInt):
            return S_INT
        if isinstance(e, PBool):
            return S_BOOL
        if isinstance(e, PNil):
            t = SApp("list", (SVar(),))
            self.node_terms[id(e)] = t
            return t
        if isinstance(e, PCons):
            elem = SVar()
            t = SApp("list", (elem,))
            self.need(self.expr(e.head), elem, e)
            self.need(self.expr(e.tail), t, e)
            self.node_terms[id(e)] = t
            return t
        if isinstance(e, PApp):
            if not self.table.isConstructor(e.name):
                raise SortError(
                    f"line {self.line}: {e.name} is not a constructor and atoms "
                    "can not occur inside constraints"
                )
            decl = self.table.by_cons[e.name]
            env = {p: SVar() for p in decl.params}
            cons = next(c for c in decl.constructors if c.name == e.name)
            if len(cons.args) != len(e.args):
                raise SortError(
                    f"line {self.line}: constructor {e.name} takes "
                    f"{len(cons.args)} arguments"
                )
            for arg, tmpl in zip(e.args, cons.args):
                self.need(self.expr(arg), templateTerm(tmpl, env), e)
            t = SApp(decl.name, tuple(env[p] for p in decl.params))
            self.node_terms[id(e)] = t
            return t

        op, args = e.op, e.args
        if op in ("+", "-", "*", "neg"):
            for a in args:
                self.need(self.expr(a), S_INT, e)
            if op == "*" and not any(_isIntConst(a) for a in args):
                raise SortError(f"line {self.line}: non-linear multiplication")
            return S_INT
        if op in ("=<", ">=", "<", ">"):
            for a in args:
                self.need(self.expr(a), S_INT, e)
            return S_BOOL
        if op == "=":
            self.need(self.expr(args[0]), self.expr(args[1]), e)
            return S_BOOL
        if op in ("~", "&", "|", "=>"):
            for a in args:
                self.need(self.expr(a), S_BOOL, e)
            return S_BOOL
        # ite
        self.need(self.expr(args[0]), S_BOOL, e)
        t = self.expr(args[1])
        self.need(self.expr(args[2]), t, e)
        return t

    def literal(self, lit):
        if isinstance(lit, PApp) and not self.table.isConstructor(lit.name):
            self.atom(lit)
        else:
            self.need(self.expr(lit), S_BOOL, lit)

    def item(self, item):
        self.vars = {}
        self.line = item.line
        if isinstance(item, ClauseItem):
            if item.head is not None:
                self.atom(item.head)
            for lit in item.literals:
                self.literal(lit)
        elif isinstance(item, SpecItem):
            self.atom(item.head)
            for lit in item.literals:
                self.literal(lit)
            self.need(self.expr(item.post), S_BOOL, item.post)
        self.item_vars.append(self.vars)


def _isIntConst(e) -> bool:
    return isinstance(e, PInt) or (
        isinstance(e, POp) and e.op == "neg" and _isIntConst(e.args[0])
    )


def _firstVar(e):
    if isinstance(e, PVar):
        return e.name
    for sub in getattr(e, "args", ()) or ():
        name = _firstVar(sub)
        if name:
            return name
    if isinstance(e, PCons):
        return _firstVar(e.head) or _firstVar(e.tail)
    return None


def inferSorts(items: list, table: SortTable) -> SortInfo:
    """
    Infers the sorts of all predicates, variables and constructor terms.

    Args:
        items: Parse items. `DataItem` entries are skipped; their sorts must
            already be in ``table``.
        table: Known ADT declarations.

    Raises:
        SortError: on any inconsistent use.

    Returns:
        A `SortInfo`, with ``var_sorts`` in the same order as ``items``.
    """
    inf = _Inferrer(table)
    for item in items:
        inf.item(item)

    u = inf.u
    # An ADT equality in a constraint can only be seen once sorts are known
    signatures = {
        p: tuple(u.resolve(s) for s in sig) for p, sig in sorted(inf.preds.items())
    }
    var_sorts = [{n: u.resolve(s) for n, s in vs.items()} for vs in inf.item_vars]
    node_sorts = {k: u.resolve(t) for k, t in inf.node_terms.items()}
    for name, sort in node_sorts.items():
        if sort.name == "list" and not sort.params:
            node_sorts[name] = Sort("list", SortKind.ADT, (INT,))
    logger.debug("Inferred sorts for %s predicates", len(signatures))
    return SortInfo(signatures, var_sorts, node_sorts)

