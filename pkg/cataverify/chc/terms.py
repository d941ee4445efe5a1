"""
Many-sorted terms, atoms and clauses.

Everything in here is immutable. Variables carry a globally unique ``uid``
next to their printable name, so two variables are the same only if their
``uid`` is, and making a fresh variant never captures.

Constraints are bool-sorted terms built from `Op` nodes. The operators are:

    - arithmetic: ``+``, ``-``, ``*`` (by a constant only) and ``neg``
    - relations: ``=``, ``>=``, ``>``, ``=<``, ``<``
    - connectives: ``~``, ``&``, ``|``, ``=>``
    - ``ite`` with a bool condition and two branches of the same sort

``=`` on two bool terms is the bool equivalence used by clauses like
``Res = (X=<H & R)``.
"""

import itertools

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

__all__ = [
    "SortKind",
    "Sort",
    "INT",
    "BOOL",
    "listSort",
    "treeSort",
    "TypeParam",
    "ConsDecl",
    "AdtDecl",
    "SortTable",
    "Var",
    "IntConst",
    "BoolConst",
    "Cons",
    "Op",
    "Term",
    "TRUE",
    "FALSE",
    "Atom",
    "Clause",
    "NIL",
    "CONS",
    "LEAF",
    "NODE",
    "ARITH_OPS",
    "REL_OPS",
    "BOOL_OPS",
    "termSort",
    "conj",
    "disj",
    "neg",
    "implies",
    "eq",
    "conjuncts",
    "freeVars",
    "isGround",
    "termDepth",
]

# Built in constructor names
NIL = "[]"
CONS = "[|]"
LEAF = "leaf"
NODE = "node"

ARITH_OPS = frozenset(["+", "-", "*", "neg"])
REL_OPS = frozenset(["=", ">=", ">", "=<", "<"])
BOOL_OPS = frozenset(["~", "&", "|", "=>"])


class SortKind(Enum):
    """
    The kind of a `Sort`.
    """

    INT = "int"
    BOOL = "bool"
    ADT = "adt"


@dataclass(frozen=True)
class Sort:
    """
    A sort.

    Attributes:
        name: ``int``, ``bool`` or the ADT name, e.g. ``list``.
        kind: The `SortKind`.
        params: Sort arguments for parametric ADTs, e.g. ``(INT,)`` for
            ``list(int)``.
    """

    name: str
    kind: SortKind
    params: tuple["Sort", ...] = ()

    @property
    def isBasic(self) -> bool:
        """
        True for int and bool.
        """
        return self.kind is not SortKind.ADT

    def __str__(self):
        if not self.params:
            return self.name
        return f"{self.name}({','.join(str(p) for p in self.params)})"


INT = Sort("int", SortKind.INT)
BOOL = Sort("bool", SortKind.BOOL)


def listSort(elem: Sort) -> Sort:
    """
    The sort ``list(elem)``.
    """
    return Sort("list", SortKind.ADT, (elem,))


def treeSort(elem: Sort) -> Sort:
    """
    The sort ``tree(elem)``.
    """
    return Sort("tree", SortKind.ADT, (elem,))


@dataclass(frozen=True)
class TypeParam:
    """
    A type parameter in an ADT declaration, like the ``T`` in ``list(T)``.
    """

    name: str


@dataclass(frozen=True)
class ConsDecl:
    """
    A constructor declaration.

    Attributes:
        name: The constructor name.
        args: Argument sorts. Any of them may be a `TypeParam`, or a `Sort`
            with `TypeParam` params.
    """

    name: str
    args: tuple = ()


@dataclass(frozen=True)
class AdtDecl:
    """
    An ADT declaration, either built in (list, tree) or from a ``:- data``
    directive.
    """

    name: str
    params: tuple[str, ...]
    constructors: tuple[ConsDecl, ...]

    def instantiate(self, args: tuple[Sort, ...]) -> Sort:
        """
        Returns the ADT sort for the given type arguments.
        """
        return Sort(self.name, SortKind.ADT, tuple(args))

    def constructorSorts(self, sort: Sort) -> list[tuple[str, tuple[Sort, ...]]]:
        """
        Returns ``(name, arg_sorts)`` for every constructor, with the type
        parameters replaced by the params of ``sort``.
        """
        env = dict(zip(self.params, sort.params))

        def inst(s):
            if isinstance(s, TypeParam):
                return env[s.name]
            if s.params:
                return Sort(s.name, s.kind, tuple(inst(p) for p in s.params))
            return s

        return [(c.name, tuple(inst(a) for a in c.args)) for c in self.constructors]


_T = TypeParam("T")

BUILTIN_ADTS = (
    AdtDecl(
        "list",
        ("T",),
        (
            ConsDecl(NIL),
            ConsDecl(CONS, (_T, Sort("list", SortKind.ADT, (_T,)))),
        ),
    ),
    AdtDecl(
        "tree",
        ("T",),
        (
            ConsDecl(LEAF),
            ConsDecl(
                NODE,
                (Sort("tree", SortKind.ADT, (_T,)), _T, Sort("tree", SortKind.ADT, (_T,))),
            ),
        ),
    ),
)


class SortTable:
    """
    The known ADT declarations, indexed by ADT and by constructor name.
    """

    def __init__(self, decls: Iterable[AdtDecl] = ()):
        self.adts: dict[str, AdtDecl] = {}
        self.by_cons: dict[str, AdtDecl] = {}
        for decl in BUILTIN_ADTS:
            self.add(decl)
        for decl in decls:
            self.add(decl)

    def add(self, decl: AdtDecl):
        """
        Adds a declaration.

        Raises:
            ValueError: on a duplicate name, a declaration without constructors
                or one without a base case.
        """
        if decl.name in self.adts or decl.name in ("int", "bool"):
            raise ValueError(f"Duplicate sort declaration: {decl.name}")
        if not decl.constructors:
            raise ValueError(f"Sort {decl.name} has no constructors")

        def recursive(c):
            return any(
                isinstance(a, Sort) and a.name == decl.name for a in c.args
            )

        if all(recursive(c) for c in decl.constructors):
            raise ValueError(f"Sort {decl.name} has no base constructor")
        for c in decl.constructors:
            if c.name in self.by_cons:
                raise ValueError(f"Duplicate constructor: {c.name}")
        self.adts[decl.name] = decl
        for c in decl.constructors:
            self.by_cons[c.name] = decl

    def isConstructor(self, name: str) -> bool:
        return name in self.by_cons

    def constructors(self, sort: Sort) -> list[tuple[str, tuple[Sort, ...]]]:
        """
        Returns the instantiated constructors of an ADT sort.
        """
        return self.adts[sort.name].constructorSorts(sort)

    def consArgSorts(self, name: str, sort: Sort) -> tuple[Sort, ...]:
        """
        The argument sorts of constructor ``name`` building a term of ``sort``.
        """
        for cname, args in self.constructors(sort):
            if cname == name:
                return args
        raise KeyError(f"{name} is not a constructor of {sort}")

    def recursivePositions(self, name: str, sort: Sort) -> tuple[int, ...]:
        """
        Argument positions of constructor ``name`` that have ``sort`` itself.
        """
        return tuple(
            i for i, s in enumerate(self.consArgSorts(name, sort)) if s == sort
        )

    def adtSorts(self) -> list[str]:
        return sorted(self.adts)


_uids = itertools.count(1)


class Var:
    """
    A variable.

    Two variables are equal if, and only if, they have the same ``uid``.

    Attributes:
        name: Printable name. Not necessarily unique.
        sort: The `Sort` of the variable.
        uid: Globally unique id.
    """

    __slots__ = ("name", "sort", "uid")

    def __init__(self, name: str, sort: Sort, uid: int | None = None):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "sort", sort)
        object.__setattr__(self, "uid", next(_uids) if uid is None else uid)

    def __setattr__(self, key, val):
        raise AttributeError("Var is immutable")

    def __eq__(self, other):
        return isinstance(other, Var) and other.uid == self.uid

    def __hash__(self):
        return hash(self.uid)

    def __lt__(self, other):
        return self.uid < other.uid

    def __repr__(self):
        return f"{self.name}#{self.uid}"

    def fresh(self, name: str | None = None) -> "Var":
        """
        Returns a new variable with the same sort.
        """
        return Var(name or self.name, self.sort)


@dataclass(frozen=True)
class IntConst:
    """
    Integer constant.
    """

    value: int


@dataclass(frozen=True)
class BoolConst:
    """
    Boolean constant.
    """

    value: bool


@dataclass(frozen=True)
class Cons:
    """
    An ADT constructor application like ``[H|T]`` or ``leaf``.
    """

    name: str
    args: tuple
    sort: Sort


@dataclass(frozen=True)
class Op:
    """
    An arithmetic operation, relation, connective or ``ite``.
    """

    op: str
    args: tuple


Term = Var | IntConst | BoolConst | Cons | Op

TRUE = BoolConst(True)
FALSE = BoolConst(False)


@dataclass(frozen=True)
class Atom:
    """
    A predicate applied to terms.
    """

    pred: str
    args: tuple

    @property
    def arity(self) -> int:
        return len(self.args)


@dataclass(frozen=True)
class Clause:
    """
    A constrained Horn clause ``head :- constraint, body``.

    Attributes:
        head: The head atom, or None for a goal (head ``false``).
        constraint: A bool sorted term.
        body: The body atoms.
        origin: Provenance. A source line like ``line:12``, or the id of the
            derivation step that produced the clause.
    """

    head: Atom | None
    constraint: Term = TRUE
    body: tuple[Atom, ...] = ()
    origin: str = field(default="", compare=False)

    @property
    def isGoal(self) -> bool:
        return self.head is None


def termSort(t: Term) -> Sort:
    """
    Returns the sort of a term.
    """
    if isinstance(t, Var):
        return t.sort
    if isinstance(t, IntConst):
        return INT
    if isinstance(t, BoolConst):
        return BOOL
    if isinstance(t, Cons):
        return t.sort
    if t.op in ARITH_OPS:
        return INT
    if t.op == "ite":
        return termSort(t.args[1])
    return BOOL


def conjuncts(c: Term) -> tuple:
    """
    Returns the top level conjuncts of ``c``, with ``true`` dropped.
    """
    if c == TRUE:
        return ()
    if isinstance(c, Op) and c.op == "&":
        res = []
        for a in c.args:
            res.extend(conjuncts(a))
        return tuple(res)
    return (c,)


def conj(*cs: Term) -> Term:
    """
    Builds a flat conjunction, dropping ``true`` and duplicates.
    """
    parts = []
    for c in cs:
        for a in conjuncts(c):
            if a == FALSE:
                return FALSE
            if a not in parts:
                parts.append(a)
    if not parts:
        return TRUE
    if len(parts) == 1:
        return parts[0]
    return Op("&", tuple(parts))


def disj(*cs: Term) -> Term:
    """
    Builds a flat disjunction, dropping ``false``.
    """
    parts = []
    for c in cs:
        items = c.args if isinstance(c, Op) and c.op == "|" else (c,)
        for a in items:
            if a == TRUE:
                return TRUE
            if a != FALSE and a not in parts:
                parts.append(a)
    if not parts:
        return FALSE
    if len(parts) == 1:
        return parts[0]
    return Op("|", tuple(parts))


def neg(c: Term) -> Term:
    """
    Negation, removing double negations.
    """
    if isinstance(c, BoolConst):
        return BoolConst(not c.value)
    if isinstance(c, Op) and c.op == "~":
        return c.args[0]
    return Op("~", (c,))


def implies(a: Term, b: Term) -> Term:
    if a == TRUE or b == TRUE:
        return b if a == TRUE else TRUE
    if a == FALSE:
        return TRUE
    return Op("=>", (a, b))


def eq(a: Term, b: Term) -> Term:
    return Op("=", (a, b))


def _walk(x, out: dict):
    if isinstance(x, Var):
        out.setdefault(x, None)
    elif isinstance(x, (Cons, Op, Atom)):
        for a in x.args:
            _walk(a, out)
    elif isinstance(x, Clause):
        if x.head is not None:
            _walk(x.head, out)
        _walk(x.constraint, out)
        for a in x.body:
            _walk(a, out)
    elif isinstance(x, (tuple, list)):
        for a in x:
            _walk(a, out)


def freeVars(x) -> tuple[Var, ...]:
    """
    Returns the variables of a term, atom, clause or sequence of these, in
    order of first occurrence.
    """
    out = {}
    _walk(x, out)
    return tuple(out)


def isGround(t: Term) -> bool:
    return not freeVars(t)


def termDepth(t: Term) -> int:
    """
    Nesting depth of recursive constructors: list length or tree height.

    Element terms do not count, so ``[1,2]`` has depth 2 and
    ``node(leaf,1,leaf)`` has depth 1.
    """
    if not isinstance(t, Cons):
        return 0
    sub = [termDepth(a) for a in t.args if isinstance(a, (Cons, Var)) and _sameAdt(a, t)]
    return 1 + max(sub) if sub else (1 if t.args else 0)


def _sameAdt(a, t: Cons) -> bool:
    return termSort(a) == t.sort
