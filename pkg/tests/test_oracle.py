"""
The bounded least model oracle, and contract goals checked against it.
"""

import pytest

from cataverify.config import PROBLEM_TIMEOUT_S
from cataverify.chc import Atom, Cons, IntConst, BoolConst, Op, Var, INT, BOOL
from cataverify.chc import NIL, CONS, listSort
from cataverify.chc.oracle import Bounds, boundedLeastModel, bodyInstances, evalTerm
from cataverify.errors import OracleLimitError
from cataverify.frontend import contractToGoal, parseFile
from cataverify.cata import classify

from .conftest import DATA, corpusPath

LIST = listSort(INT)


def ilist(*vals):
    res = Cons(NIL, (), LIST)
    for v in reversed(vals):
        res = Cons(CONS, (IntConst(v), res), LIST)
    return res


def test_eval_term():
    x, b = Var("X", INT), Var("B", BOOL)
    t = Op("ite", (b, Op("+", (x, IntConst(1))), x))
    assert evalTerm(t, {x: IntConst(2), b: BoolConst(True)}) == 3
    assert evalTerm(t, {x: IntConst(2), b: BoolConst(False)}) == 2
    assert evalTerm(Op("=>", (b, BoolConst(False))), {b: BoolConst(False)}) is True


def test_ground_terms_within_depth():
    bounds = Bounds(depth=2, values=(0, 1))
    lists = bounds.groundTerms(LIST)
    # [], two of length 1 and four of length 2
    assert len(lists) == 7
    assert ilist(1, 0) in lists
    assert not bounds.inBounds(ilist(0, 0, 0))


def test_reverse_model(reverse):
    model = boundedLeastModel(reverse.definite, depth=2, value_range=(0, 1))
    assert Atom("rev", (ilist(0, 1), ilist(1, 0))) in model
    assert Atom("rev", (ilist(0, 1), ilist(0, 1))) not in model
    assert Atom("hd", (ilist(), BoolConst(False), IntConst(0))) in model
    assert Atom("is_asorted", (ilist(1, 0), BoolConst(False))) in model


def test_model_cap(reverse):
    with pytest.raises(OracleLimitError):
        boundedLeastModel(reverse.definite, depth=3, value_range=(0, 1, 2), cap=10)
    with pytest.raises(OracleLimitError, match="within 0 s"):
        boundedLeastModel(reverse.definite, depth=3, time_limit_s=0)


def test_valid_contracts_have_no_counterexample(reverse):
    cls = classify(reverse)
    bounds = Bounds(depth=3, values=(0, 1, 2))
    model = boundedLeastModel(reverse.definite, 3, (0, 1, 2))
    assert len(cls.contracts) == 2
    for k in cls.contracts:
        assert bodyInstances(contractToGoal(k), model, bounds) == []


def test_false_contract_has_counterexample():
    program = parseFile(DATA / "false_rev.pl")
    cls = classify(program)
    model = boundedLeastModel(program.definite, 2, (0, 1))
    rev = next(k for k in cls.contracts if k.pred == "rev")
    assert bodyInstances(contractToGoal(rev), model, Bounds(2, (0, 1)))


@pytest.mark.parametrize("name", ["insertion", "append", "permutation"])
def test_corpus_contracts_hold_in_bounds(name):
    program = parseFile(corpusPath(name))
    cls = classify(program)
    bounds = Bounds(depth=2, values=(0, 1))
    model = boundedLeastModel(
        program.definite, 2, (0, 1), sorts=program.sorts, time_limit_s=PROBLEM_TIMEOUT_S
    )
    for k in cls.contracts:
        goal = contractToGoal(k)
        assert bodyInstances(goal, model, bounds) == [], k.cid
