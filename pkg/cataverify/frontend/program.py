"""
Typed programs.

`parseProgram` is the entry point of the frontend: it parses the text, infers
sorts, builds typed and normalized clauses and checks the contracts.

Normalized form means:

    - basic sorted atom arguments are distinct variables, anything else is
      replaced by a fresh variable and an equality in the constraint
    - ADT arguments are kept as written, so that constructor terms are only
      taken apart by unification
    - interpreted operations never occur inside constructor terms
    - equalities between ADT terms at the top level of a constraint are
      solved by unification and disappear
"""

import logging

from dataclasses import dataclass, field
from pathlib import Path

from cataverify.chc.terms import (
    Sort,
    SortTable,
    AdtDecl,
    ConsDecl,
    TypeParam,
    SortKind,
    Var,
    IntConst,
    BoolConst,
    Cons,
    Op,
    Atom,
    Clause,
    INT,
    BOOL,
    NIL,
    CONS,
    conj,
    conjuncts,
    eq,
    freeVars,
    termSort,
)
from cataverify.chc.subst import applySubst, unifyTerms
from cataverify.errors import ContractError, ParseError, SortError
from .parser import (
    parseText,
    PVar,
    PInt,
    PBool,
    PApp,
    PNil,
    PCons,
    PSort,
    ClauseItem,
    SpecItem,
    DataItem,
)
from .sorts import inferSorts
from .contracts import CataAtom, Contract

__all__ = ["SourceProgram", "parseProgram", "parseFile", "normalizeClause"]

logger = logging.getLogger(__name__)


@dataclass
class SourceProgram:
    """
    A parsed and typed program.

    Attributes:
        clauses: Definite clauses and goals, normalized, in source order.
        contracts: Contracts from ``:- spec`` directives.
        sorts: The ADT declarations in scope.
        signatures: Argument sorts per predicate.
        diagnostics: ``(location, message)`` pairs for things that were
            accepted but look suspicious.
        path: The source file, if any.
    """

    clauses: list[Clause]
    contracts: list[Contract]
    sorts: SortTable
    signatures: dict[str, tuple[Sort, ...]]
    diagnostics: list[tuple[str, str]] = field(default_factory=list)
    path: str | None = None

    @property
    def definite(self) -> list[Clause]:
        return [c for c in self.clauses if not c.isGoal]

    @property
    def goals(self) -> list[Clause]:
        return [c for c in self.clauses if c.isGoal]

    def clausesFor(self, pred: str) -> list[Clause]:
        """
        The definite clauses with head predicate ``pred``.
        """
        return [c for c in self.clauses if c.head is not None and c.head.pred == pred]

    @property
    def name(self) -> str:
        return Path(self.path).stem if self.path else "<text>"


def _sortFromDecl(ps: PSort, decl_name: str, params: list[str], table: SortTable):
    """
    Converts a sort expression in a data declaration to a `Sort` template.
    """
    if ps.param:
        if ps.name not in params:
            raise SortError(f"Unknown type parameter {ps.name} in {decl_name}")
        return TypeParam(ps.name)
    if ps.name == "int" and not ps.args:
        return INT
    if ps.name == "bool" and not ps.args:
        return BOOL
    args = tuple(_sortFromDecl(a, decl_name, params, table) for a in ps.args)
    if ps.name == decl_name:
        if len(args) != len(params):
            raise SortError(f"{decl_name} used with the wrong number of parameters")
    elif ps.name in table.adts:
        if len(args) != len(table.adts[ps.name].params):
            raise SortError(f"{ps.name} used with the wrong number of parameters")
    else:
        raise SortError(f"Unknown sort {ps.name} in declaration of {decl_name}")
    return Sort(ps.name, SortKind.ADT, args)


def _buildAdt(item: DataItem, table: SortTable):
    conses = tuple(
        ConsDecl(name, tuple(_sortFromDecl(s, item.name, item.params, table) for s in sorts))
        for name, sorts in item.constructors
    )
    try:
        table.add(AdtDecl(item.name, tuple(item.params), conses))
    except ValueError as exc:
        raise SortError(f"line {item.line}: {exc}") from exc


class _Builder:
    """
    Builds typed terms for one item.
    """

    def __init__(self, var_sorts: dict[str, Sort], node_sorts: dict[int, Sort], line: int):
        self.var_sorts = var_sorts
        self.node_sorts = node_sorts
        self.line = line
        self.vars: dict[str, Var] = {}

    def var(self, name: str) -> Var:
        if name not in self.vars:
            self.vars[name] = Var(name, self.var_sorts.get(name, INT))
        return self.vars[name]

    def term(self, p):
        """
        Converts a parse expression to a term.
        """
        # pylint: disable=too-many-return-statements
        if isinstance(p, PVar):
            return self.var(p.name)
        if isinstance(p, PInt):
            return IntConst(p.value)
        if isinstance(p, PBool):
            return BoolConst(p.value)
        if isinstance(p, PNil):
            return Cons(NIL, (), self.node_sorts[id(p)])
        if isinstance(p, PCons):
            return Cons(CONS, (self.term(p.head), self.term(p.tail)), self.node_sorts[id(p)])
        if isinstance(p, PApp):
            return Cons(p.name, tuple(self.term(a) for a in p.args), self.node_sorts[id(p)])
        args = tuple(self.term(a) for a in p.args)
        if p.op == "neg" and isinstance(args[0], IntConst):
            return IntConst(-args[0].value)
        return Op(p.op, args)

    def atom(self, p: PApp) -> Atom:
        return Atom(p.name, tuple(self.term(a) for a in p.args))


def _isAdtEq(t) -> bool:
    return (
        isinstance(t, Op)
        and t.op == "="
        and not termSort(t.args[0]).isBasic
    )


def _checkNoAdtEq(t, line: int):
    if isinstance(t, Op):
        if _isAdtEq(t):
            raise SortError(
                f"line {line}: equality between ADT terms is only allowed as a "
                "top level conjunct"
            )
        for a in t.args:
            _checkNoAdtEq(a, line)


def _flattenCons(t, extra: list):
    """
    Replaces interpreted operations inside constructor terms by fresh
    variables, collecting the defining equalities in ``extra``.
    """
    if isinstance(t, Cons):
        return Cons(t.name, tuple(_flattenCons(a, extra) for a in t.args), t.sort)
    if isinstance(t, Op):
        v = Var("_N", termSort(t))
        extra.append(eq(v, t))
        return v
    return t


def _normalizeAtom(atom: Atom, extra: list) -> Atom:
    seen = set()
    args = []
    for t in atom.args:
        if termSort(t).isBasic:
            if isinstance(t, Var) and t not in seen:
                seen.add(t)
                args.append(t)
            else:
                v = Var("_N", termSort(t))
                extra.append(eq(v, t))
                args.append(v)
        else:
            args.append(_flattenCons(t, extra))
    return Atom(atom.pred, tuple(args))


def normalizeClause(clause: Clause) -> Clause | None:
    """
    Brings a clause into normalized form.

    Returns:
        The normalized clause, or None when a top level ADT equality can not
        be unified, in which case the clause can never fire.
    """
    lits = conjuncts(clause.constraint)
    adt_eqs = [lit for lit in lits if _isAdtEq(lit)]
    s = {}
    if adt_eqs:
        s = unifyTerms([lit.args for lit in adt_eqs])
        if s is None:
            return None
        clause = Clause(
            clause.head,
            conj(*(lit for lit in lits if not _isAdtEq(lit))),
            clause.body,
            clause.origin,
        )
        clause = applySubst(s, clause)

    extra = []
    head = None if clause.head is None else _normalizeAtom(clause.head, extra)
    body = tuple(_normalizeAtom(a, extra) for a in clause.body)
    return Clause(head, conj(clause.constraint, *extra), body, clause.origin)


def _buildClause(item: ClauseItem, b: _Builder, table: SortTable) -> Clause:
    constraint, body = [], []
    for lit in item.literals:
        if isinstance(lit, PApp) and not table.isConstructor(lit.name):
            body.append(b.atom(lit))
        else:
            t = b.term(lit)
            for c in conjuncts(t):
                if not _isAdtEq(c):
                    _checkNoAdtEq(c, item.line)
            constraint.append(t)
    head = None if item.head is None else b.atom(item.head)
    return Clause(head, conj(*constraint), tuple(body), f"line:{item.line}")


def _buildContract(
    item: SpecItem, b: _Builder, table: SortTable, signatures: dict, spec_heads: set
) -> Contract:
    # Well formedness checks, numbered as in ContractError, so
    # @pylint: disable=too-many-locals,too-many-branches
    line = item.line
    pred = item.head.name
    if not all(isinstance(a, PVar) for a in item.head.args):
        raise ContractError(f"the arguments of {pred} must be variables", 1, line)
    z = tuple(b.var(a.name) for a in item.head.args)
    if len(set(z)) != len(z):
        raise ContractError(f"the arguments of {pred} must be distinct", 1, line)

    pre, catas = [], []
    for lit in item.literals:
        if isinstance(lit, PApp) and not table.isConstructor(lit.name):
            if lit.name in spec_heads:
                raise ContractError(
                    f"{lit.name} has a contract itself and can not be used as a "
                    "catamorphism",
                    3,
                    line,
                )
            sig = signatures[lit.name]
            adt_pos = [i for i, s in enumerate(sig) if not s.isBasic]
            if len(adt_pos) != 1:
                raise ContractError(
                    f"{lit.name} must have exactly one ADT argument to be a catamorphism",
                    3,
                    line,
                )
            if not all(isinstance(a, PVar) for a in lit.args):
                raise ContractError(f"the arguments of {lit.name} must be variables", 4, line)
            cata = CataAtom.fromAtom(b.atom(lit), adt_pos[0])
            if cata.adt not in z:
                raise ContractError(
                    f"the ADT argument of {lit.name} is not an argument of {pred}", 5, line
                )
            catas.append(cata)
        else:
            pre.append(b.term(lit))

    inputs = {v for c in catas for v in c.inputs}
    outputs = [v for c in catas for v in c.outputs]
    if len(set(outputs)) != len(outputs):
        raise ContractError("catamorphism outputs must be distinct variables", 4, line)
    if set(outputs) & (inputs | set(z)):
        raise ContractError(
            "catamorphism outputs must differ from parameters and head variables", 4, line
        )

    basic_z = {v for v in z if v.sort.isBasic}
    pre_c = conj(*pre)
    bad = [v for v in freeVars(pre_c) if v not in inputs | basic_z]
    if bad:
        raise ContractError(
            f"precondition mentions {', '.join(v.name for v in bad)}", 2, line
        )
    post = b.term(item.post)
    bad = [v for v in freeVars(post) if v not in inputs | set(outputs) | basic_z]
    if bad:
        raise ContractError(
            f"postcondition mentions {', '.join(v.name for v in bad)}", 6, line
        )
    for c in conjuncts(pre_c) + (post,):
        _checkNoAdtEq(c, line)

    return Contract(f"{pred}@{line}", pred, z, pre_c, tuple(catas), post, line)


def parseProgram(text: str, path: str | None = None) -> SourceProgram:
    """
    Parses, sort checks and normalizes a program with its contracts.

    Args:
        text: The program source.
        path: The source file name, only used for naming and messages.

    Raises:
        ParseError: on a syntax error.
        SortError: on inconsistent use of sorts or arities.
        ContractError: when a contract is not well formed.

    Returns:
        The `SourceProgram`.
    """
    items = parseText(text)
    table = SortTable()
    for item in items:
        if isinstance(item, DataItem):
            _buildAdt(item, table)
    items = [i for i in items if not isinstance(i, DataItem)]

    info = inferSorts(items, table)
    spec_heads = {i.head.name for i in items if isinstance(i, SpecItem)}

    clauses, contracts, diagnostics = [], [], []
    for item, var_sorts in zip(items, info.var_sorts):
        b = _Builder(var_sorts, info.node_sorts, item.line)
        if isinstance(item, SpecItem):
            contracts.append(
                _buildContract(item, b, table, info.signatures, spec_heads)
            )
            continue
        clause = normalizeClause(_buildClause(item, b, table))
        if clause is None:
            diagnostics.append(
                (f"line {item.line}", "clause can never fire and was dropped")
            )
            continue
        if clause.constraint == BoolConst(False):
            diagnostics.append((f"line {item.line}", "clause has constraint false"))
        clauses.append(clause)

    for loc, msg in diagnostics:
        logger.warning("%s %s: %s", path or "<text>", loc, msg)

    logger.debug(
        "Parsed %s clauses and %s contracts from %s",
        len(clauses),
        len(contracts),
        path or "<text>",
    )
    return SourceProgram(clauses, contracts, table, info.signatures, diagnostics, path)


def parseFile(path: str | Path) -> SourceProgram:
    """
    Reads and parses a program file.

    Raises:
        ParseError: if the file can not be read, or see `parseProgram`.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"Can not read {path}: {exc.strerror}") from exc
    return parseProgram(text, str(path))

