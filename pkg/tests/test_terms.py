"""
Terms, substitutions and printing.
"""

import pytest

from cataverify.chc import (
    Atom,
    Clause,
    Cons,
    IntConst,
    Op,
    Var,
    INT,
    BOOL,
    TRUE,
    FALSE,
    NIL,
    CONS,
    LEAF,
    NODE,
    listSort,
    treeSort,
    conj,
    disj,
    neg,
    implies,
    eq,
    conjuncts,
    freeVars,
    termDepth,
    applySubst,
    mgu,
    match,
    renameApart,
    varPartition,
    isVariant,
    showClause,
    showConstraint,
    showTerm,
)

LIST = listSort(INT)
TREE = treeSort(INT)


def nil():
    return Cons(NIL, (), LIST)


def cons(h, t):
    return Cons(CONS, (h, t), LIST)


def ilist(*vals):
    res = nil()
    for v in reversed(vals):
        res = cons(IntConst(v), res)
    return res


def test_var_identity():
    a, b = Var("X", INT), Var("X", INT)
    assert a != b
    assert a == a
    assert a.fresh() != a
    assert a.fresh().sort == INT
    with pytest.raises(AttributeError):
        a.name = "Y"


def test_conj_flattens_and_drops_true():
    x, y = Var("X", BOOL), Var("Y", BOOL)
    assert conj() == TRUE
    assert conj(TRUE, x) == x
    assert conj(x, conj(y, x)) == Op("&", (x, y))
    assert conj(x, FALSE) == FALSE
    assert conjuncts(conj(x, y)) == (x, y)


def test_disj_neg_implies():
    x, y = Var("X", BOOL), Var("Y", BOOL)
    assert disj(FALSE, x) == x
    assert disj(x, TRUE) == TRUE
    assert neg(neg(x)) == x
    assert neg(TRUE) == FALSE
    assert implies(TRUE, y) == y
    assert implies(x, TRUE) == TRUE
    assert implies(FALSE, y) == TRUE


def test_free_vars_in_order():
    h, t, r = Var("H", INT), Var("T", LIST), Var("R", LIST)
    c = Clause(Atom("rev", (cons(h, t), r)), eq(h, IntConst(1)), (Atom("rev", (t, r)),))
    assert freeVars(c) == (h, t, r)


@pytest.mark.parametrize(
    "term, depth",
    [
        (ilist(), 0),
        (ilist(1, 2), 2),
        (Cons(LEAF, (), TREE), 0),
        (Cons(NODE, (Cons(LEAF, (), TREE), IntConst(1), Cons(LEAF, (), TREE)), TREE), 1),
    ],
)
def test_term_depth(term, depth):
    assert termDepth(term) == depth


def test_mgu_binds_left_to_right():
    h, t, s = Var("H", INT), Var("T", LIST), Var("S", LIST)
    a = Atom("rev", (cons(h, t), s))
    l, r = Var("L", LIST), Var("R", LIST)
    b = Atom("rev", (l, r))
    u = mgu(a, b)
    assert applySubst(u, a) == applySubst(u, b)
    assert u[s] == r


def test_mgu_fails():
    x = Var("X", LIST)
    assert mgu(Atom("p", (nil(),)), Atom("p", (ilist(1),))) is None
    assert mgu(Atom("p", (x,)), Atom("q", (x,))) is None
    # Occurs check
    h = Var("H", INT)
    assert mgu(Atom("p", (x,)), Atom("p", (cons(h, x),))) is None


def test_match_is_one_way():
    x, y = Var("X", INT), Var("Y", INT)
    assert match(Atom("p", (x, x)), Atom("p", (y, y))) == {x: y}
    assert match(Atom("p", (x, x)), Atom("p", (y, IntConst(1)))) is None
    assert match(Atom("p", (IntConst(1),)), Atom("p", (x,))) is None


def test_rename_apart_and_variants():
    h, t = Var("H", INT), Var("T", LIST)
    c = Clause(Atom("p", (cons(h, t),)), Op(">", (h, IntConst(0))), (Atom("p", (t,)),))
    renamed, ren = renameApart(c)
    assert set(ren) == {h, t}
    assert not set(freeVars(renamed)) & {h, t}
    assert isVariant(c, renamed)
    other = applySubst({t: nil()}, c)
    assert not isVariant(c, other)


def test_var_partition():
    n, t, b = Var("N", INT), Var("T", LIST), Var("B", BOOL)
    bvars, adts = varPartition([Atom("count", (n, t, b))])
    assert bvars == (n, b)
    assert adts == (t,)


def test_show_clause():
    h, t, r, s = Var("H", INT), Var("T", LIST), Var("R", LIST), Var("S", LIST)
    c = Clause(
        Atom("rev", (cons(h, t), r)),
        TRUE,
        (Atom("rev", (t, s)), Atom("snoc", (s, h, r))),
    )
    assert showClause(c) == "rev([H|T],R) :- rev(T,S), snoc(S,H,R)."
    assert showClause(Clause(Atom("rev", (nil(), nil())))) == "rev([],[])."
    assert showTerm(ilist(1, 2)) == "[1,2]"


def test_show_constraint_precedence():
    x, y, b = Var("X", INT), Var("Y", INT), Var("B", BOOL)
    c = conj(implies(b, Op("=<", (x, y))), Op("=", (x, Op("+", (y, IntConst(1))))))
    assert showConstraint(c) == "(B => X=<Y) & X = Y+1"
    assert showConstraint(TRUE) == "true"
    assert showTerm(Op("-", (x, Op("-", (y, IntConst(1)))))) == "X-(Y-1)"
