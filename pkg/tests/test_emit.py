"""
Prolog and SMT-LIB emission.
"""

import pytest

from cataverify.chc import Atom, Clause, IntConst, Op, Var, INT, BOOL, TRUE, NIL, CONS
from cataverify.chc import listSort, treeSort
from cataverify.emit import adtName, canonicalNames, consName, emitProlog, emitSmtlib
from cataverify.smt import smtSymbol

LIST = listSort(INT)


def test_canonical_names():
    vs = [Var(f"V{i}", INT) for i in range(28)]
    names = canonicalNames(Atom("p", tuple(vs)))
    assert [names[v] for v in vs[:3]] == ["A", "B", "C"]
    assert names[vs[25]] == "Z"
    assert names[vs[26]] == "A1"
    assert names[vs[27]] == "B1"


def test_emit_prolog(reverse):
    rec = reverse.clausesFor("rev")[1]
    text = emitProlog([rec], header="Transformed\n")
    assert text.splitlines() == [
        "% Transformed",
        "rev([A|B],C) :- rev(B,D), snoc(D,A,C).",
    ]


@pytest.mark.parametrize(
    "sort, name", [(LIST, "list_int"), (treeSort(INT), "tree_int"), (listSort(LIST), "list_list_int")]
)
def test_adt_names(sort, name):
    assert adtName(sort) == name


def test_constructor_names():
    assert consName(NIL, LIST) == "nil_list_int"
    assert consName(CONS, LIST) == "cons_list_int"
    assert consName("node", treeSort(INT)) == "node_tree_int"


@pytest.mark.parametrize(
    "name, symbol",
    [
        ("new1", "new1"),
        ("delmin_1", "delmin_1"),
        ("and", "|and|"),
        ("[|]", "|[_]|"),
        ("1st", "|1st|"),
        ("rev@19", "|rev@19|"),
    ],
)
def test_smt_symbols(name, symbol):
    assert smtSymbol(name) == symbol


def test_emit_smtlib_with_datatypes(reverse):
    text = emitSmtlib(reverse.clausesFor("rev"), reverse.sorts, header="Baseline")
    lines = text.splitlines()
    assert lines[0] == "; Baseline"
    assert lines[1] == "(set-logic HORN)"
    assert (
        "(declare-datatypes ((list_int 0)) (((nil_list_int) (cons_list_int "
        "(cons_list_int_0 Int) (cons_list_int_1 list_int)))))"
    ) in lines
    assert "(declare-fun rev (list_int list_int) Bool)" in lines
    assert "(assert (=> true (rev nil_list_int nil_list_int)))" in lines
    assert lines[-1] == "(check-sat)"


def test_emit_smtlib_adt_free():
    x, y, b = Var("X", INT), Var("Y", INT), Var("B", BOOL)
    clauses = [
        Clause(Atom("new1", (x, b)), Op(">", (x, IntConst(0))), ()),
        Clause(None, Op("~", (b,)), (Atom("new1", (x, b)),)),
        Clause(Atom("new2", (x, y)), Op("=", (y, Op("neg", (x,)))), ()),
        Clause(Atom("new3", ()), TRUE, ()),
    ]
    text = emitSmtlib(clauses)
    assert "declare-datatypes" not in text
    assert "(declare-fun new1 (Int Bool) Bool)" in text
    assert "(declare-fun new3 () Bool)" in text
    assert "(assert (forall ((A Int) (B Bool)) (=> (> A 0) (new1 A B))))" in text
    assert "(assert (forall ((A Bool) (B Int)) (=> (and (not A) (new1 B A)) false)))" in text
    assert "(assert (forall ((A Int) (B Int)) (=> (= B (- A)) (new2 A B))))" in text
    assert "(assert (=> true new3))" in text
    assert emitSmtlib(clauses) == text
