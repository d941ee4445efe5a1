"""
Concrete syntax of programs, contracts and data declarations.

The syntax is Prolog like::

    rev([],[]).
    rev([H|T],R) :- rev(T,S), snoc(S,H,R).
    false :- BL & ~BR, rev(L,R), is_asorted(L,BL), is_dsorted(R,BR).
    :- spec rev(L,R) ==> is_asorted(L,BL), is_dsorted(R,BR) => (BL=>BR).
    :- data nat = z | s(nat).

This module only turns text into untyped parse items (`ClauseItem`,
`SpecItem`, `DataItem`). Sorts are inferred and typed clauses are built by
`cataverify.frontend.program`.

Attributes:
    parser: The Lark_ LALR parser for the grammar.

.. _Lark: https://lark-parser.readthedocs.io/
"""

import itertools

from dataclasses import dataclass

from lark import Lark, Token, Tree
from lark.exceptions import UnexpectedInput

from cataverify.errors import ParseError

parser = Lark(
    r"""
    start:          _item*
    _item:          clause | spec | data

    clause:         head "." | head ":-" body "."
    head:           "false"                     -> goal_head
                  | NAME "(" args ")"           -> atom_head
                  | NAME                        -> atom_head
    body:           formula ("," formula)*

    spec:           ":-" "spec" NAME "(" args ")" "==>" spec_lits "=>" formula "."
    spec_lits:      disj ("," disj)*

    data:           ":-" "data" NAME [sort_params] "=" cons_decl ("|" cons_decl)* "."
    sort_params:    "(" VAR ("," VAR)* ")"
    cons_decl:      NAME ["(" sort_expr ("," sort_expr)* ")"]
    sort_expr:      NAME ["(" sort_expr ("," sort_expr)* ")"] | VAR

    ?formula:       disj "=>" formula           -> implies
                  | disj
    ?disj:          disj "|" conj               -> or_
                  | conj
    ?conj:          conj "&" negation           -> and_
                  | negation
    ?negation:      "~" negation                -> not_
                  | comparison
    ?comparison:    sum "=" sum                 -> eq
                  | sum "=<" sum                -> le
                  | sum ">=" sum                -> ge
                  | sum "<" sum                 -> lt
                  | sum ">" sum                 -> gt
                  | sum
    ?sum:           sum "+" product             -> add
                  | sum "-" product             -> sub
                  | product
    ?product:       product "*" unary           -> mul
                  | unary
    ?unary:         "-" unary                   -> minus
                  | primary
    ?primary:       VAR                         -> var
                  | INT                         -> int
                  | "true"                      -> true
                  | "false"                     -> false
                  | "ite" "(" formula "," formula "," formula ")" -> ite
                  | NAME "(" args ")"           -> app
                  | NAME                        -> app
                  | "[" "]"                     -> nil
                  | "[" sum ("," sum)* ["|" sum] "]" -> list
                  | "(" formula ")"
    args:           formula ("," formula)*

    VAR:            /[A-Z_][A-Za-z0-9_]*/
    NAME:           /[a-z][A-Za-z0-9_]*/
    INT:            /[0-9]+/
    LINE_COMMENT:   /%[^\n]*/
    BLOCK_COMMENT:  /\/\*(.|\n)*?\*\//

    %import common.WS
    %ignore WS
    %ignore LINE_COMMENT
    %ignore BLOCK_COMMENT
    """,
    parser="lalr",
    propagate_positions=True,
    maybe_placeholders=True,
)


@dataclass(frozen=True)
class PVar:
    """
    A source variable. ``_`` is made unique per occurrence.
    """

    name: str


@dataclass(frozen=True)
class PInt:
    value: int


@dataclass(frozen=True)
class PBool:
    value: bool


@dataclass(frozen=True)
class PApp:
    """
    A name applied to arguments: an atom, or a constructor term.
    """

    name: str
    args: tuple = ()


@dataclass(frozen=True)
class PNil:
    pass


@dataclass(frozen=True)
class PCons:
    head: object
    tail: object


@dataclass(frozen=True)
class POp:
    """
    Operator application, using the operator names of `cataverify.chc.terms`.
    """

    op: str
    args: tuple


@dataclass(frozen=True)
class PSort:
    """
    A sort expression in a data declaration. ``param`` is True for a type
    variable.
    """

    name: str
    args: tuple = ()
    param: bool = False


@dataclass
class ClauseItem:
    """
    A parsed clause. ``head`` is None for a goal.
    """

    head: PApp | None
    literals: list
    line: int


@dataclass
class SpecItem:
    """
    A parsed ``:- spec`` directive.
    """

    head: PApp
    literals: list
    post: object
    line: int


@dataclass
class DataItem:
    """
    A parsed ``:- data`` directive.
    """

    name: str
    params: list[str]
    constructors: list[tuple[str, list[PSort]]]
    line: int


# Binary operators by tree alias
_BINOPS = {
    "implies": "=>",
    "or_": "|",
    "and_": "&",
    "eq": "=",
    "le": "=<",
    "ge": ">=",
    "lt": "<",
    "gt": ">",
    "add": "+",
    "sub": "-",
    "mul": "*",
}


class _Walker:
    """
    Walks the parse tree of one text. Keeps the counter for anonymous
    variables.
    """

    def __init__(self):
        self._anon = itertools.count(1)

    # start: _item*
    def parseStart(self, tree: Tree) -> list:
        items = []
        for item in tree.children:
            if item.data == "clause":
                items.append(self.parseClause(item))
            elif item.data == "spec":
                items.append(self.parseSpec(item))
            else:
                items.append(self.parseData(item))
        return items

    # clause: head "." | head ":-" body "."
    def parseClause(self, tree: Tree) -> ClauseItem:
        head = self.parseHead(tree.children[0])
        lits = []
        if len(tree.children) > 1:
            lits = [self.parseExpr(f) for f in tree.children[1].children]
        return ClauseItem(head, lits, tree.meta.line)

    # head: "false" | NAME "(" args ")" | NAME
    def parseHead(self, tree: Tree) -> PApp | None:
        if tree.data == "goal_head":
            return None
        name = tree.children[0].value
        args = ()
        if len(tree.children) > 1:
            args = tuple(self.parseExpr(a) for a in tree.children[1].children)
        return PApp(name, args)

    # spec: ":-" "spec" NAME "(" args ")" "==>" spec_lits "=>" formula "."
    def parseSpec(self, tree: Tree) -> SpecItem:
        name, args, lits, post = tree.children
        head = PApp(name.value, tuple(self.parseExpr(a) for a in args.children))
        return SpecItem(
            head,
            [self.parseExpr(lit) for lit in lits.children],
            self.parseExpr(post),
            tree.meta.line,
        )

    # data: ":-" "data" NAME [sort_params] "=" cons_decl ("|" cons_decl)* "."
    def parseData(self, tree: Tree) -> DataItem:
        name, params, *conses = tree.children
        pnames = [t.value for t in params.children] if params is not None else []
        decls = []
        for cons in conses:
            cname, *sorts = cons.children
            decls.append(
                (cname.value, [self.parseSort(s) for s in sorts if s is not None])
            )
        return DataItem(name.value, pnames, decls, tree.meta.line)

    # sort_expr: NAME ["(" sort_expr ("," sort_expr)* ")"] | VAR
    def parseSort(self, tree: Tree) -> PSort:
        first = tree.children[0]
        if first.type == "VAR":
            return PSort(first.value, param=True)
        args = tuple(self.parseSort(s) for s in tree.children[1:] if s is not None)
        return PSort(first.value, args)

    def parseExpr(self, tree):
        """
        Converts a formula or term subtree to `PVar`, `PInt`, `PBool`,
        `PApp`, `PNil`, `PCons` or `POp`.
        """
        # pylint: disable=too-many-return-statements
        if isinstance(tree, Token):
            raise ParseError(f"Unexpected token {tree}", tree.line, tree.column)
        kind = tree.data
        kids = tree.children
        if kind in _BINOPS:
            return POp(_BINOPS[kind], (self.parseExpr(kids[0]), self.parseExpr(kids[1])))
        if kind == "not_":
            return POp("~", (self.parseExpr(kids[0]),))
        if kind == "minus":
            arg = self.parseExpr(kids[0])
            if isinstance(arg, PInt):
                return PInt(-arg.value)
            return POp("neg", (arg,))
        if kind == "var":
            name = kids[0].value
            if name == "_":
                name = f"_G{next(self._anon)}"
            return PVar(name)
        if kind == "int":
            return PInt(int(kids[0].value))
        if kind in ("true", "false"):
            return PBool(kind == "true")
        if kind == "ite":
            return POp("ite", tuple(self.parseExpr(k) for k in kids))
        if kind == "app":
            args = ()
            if len(kids) > 1:
                args = tuple(self.parseExpr(a) for a in kids[1].children)
            return PApp(kids[0].value, args)
        if kind == "nil":
            return PNil()
        if kind == "list":
            *elems, tail = kids
            res = self.parseExpr(tail) if tail is not None else PNil()
            for elem in reversed(elems):
                res = PCons(self.parseExpr(elem), res)
            return res
        raise ParseError(f"Unexpected syntax: {kind}")


def parseText(text: str) -> list:
    """
    Parses program text into a list of parse items.

    Args:
        text: The program source.

    Raises:
        ParseError: with the line and column of the first syntax error.

    Returns:
        A list of `ClauseItem`, `SpecItem` and `DataItem` in source order.
    """
    try:
        tree = parser.parse(text)
    except UnexpectedInput as exc:
        line = getattr(exc, "line", -1)
        column = getattr(exc, "column", -1)
        if line is None or line < 0:
            # Unexpected end of input
            line = text.count("\n") + 1
            column = len(text.rsplit("\n", 1)[-1]) + 1
            raise ParseError("Unexpected end of input", line, column) from exc
        try:
            context = exc.get_context(text).strip().splitlines()[0]
        except (IndexError, AttributeError):
            context = ""
        raise ParseError(f"Syntax error near '{context}'", line, column) from exc
    return _Walker().parseStart(tree)
