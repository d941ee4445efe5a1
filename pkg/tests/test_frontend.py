"""
Parsing, sort inference, normalization and contracts.
"""

import pytest

from cataverify.chc import Cons, Var, INT, BOOL, TRUE, listSort, freeVars
from cataverify.errors import ContractError, ParseError, SortError
from cataverify.frontend import contractToGoal, parseFile, parseProgram, trivialContract

from .conftest import corpusPath

LIST = listSort(INT)

LEN_PROGRAM = """
len([],N) :- N=0.
len([H|T],N) :- N=M+1, len(T,M).
p([],[]).
p([H|T],[H|S]) :- p(T,S).
"""


def test_reverse_program(reverse):
    assert reverse.name == "reverse"
    assert len(reverse.definite) == 12
    assert len(reverse.goals) == 2
    assert reverse.contracts == []
    assert reverse.signatures["rev"] == (LIST, LIST)
    assert reverse.signatures["hd"] == (LIST, BOOL, INT)
    assert reverse.signatures["leq_all"] == (INT, LIST, BOOL)
    assert [c.origin for c in reverse.goals] == ["line:22", "line:23"]


def test_spec_directives():
    program = parseFile(corpusPath("reverse_spec"))
    rev, snoc = program.contracts
    assert rev.cid == "rev@19"
    assert rev.pred == "rev"
    assert [c.pred for c in rev.catas] == ["is_asorted", "is_dsorted"]
    assert rev.pre == TRUE
    assert rev.catas[0].adt == rev.z[0]
    assert snoc.cid == "snoc@20"
    assert snoc.catas[1].inputs == (snoc.z[1],)
    assert set(freeVars(snoc.post)) == {o for c in snoc.catas for o in c.outputs}


def test_parse_error_position():
    with pytest.raises(ParseError) as exc:
        parseProgram("p(X) :- q(X).\np(X :- q(X).\n")
    assert exc.value.line == 2


def test_missing_file(tmp_path):
    with pytest.raises(ParseError):
        parseFile(tmp_path / "nope.pl")


@pytest.mark.parametrize(
    "text",
    [
        "p(X) :- X > 0, q(X).\nq([]).",
        "p(X) :- q(X, 1).\nq(X) :- X > 0.",
        "p(X,Y) :- Y = X*X.",
        "p(X) :- X = [] & X > 1.",
    ],
)
def test_sort_errors(text):
    with pytest.raises(SortError):
        parseProgram(text)


def test_data_declaration():
    program = parseProgram(
        """
        :- data nat = z | s(nat).
        plus(z,Y,Y).
        plus(s(X),Y,s(Z)) :- plus(X,Y,Z).
        """
    )
    sig = program.signatures["plus"]
    assert all(s.name == "nat" for s in sig)
    assert [c for c, _ in program.sorts.constructors(sig[0])] == ["z", "s"]


def test_data_declaration_without_base_case():
    with pytest.raises(SortError):
        parseProgram(":- data inf = more(inf).\np(more(X)).")


def test_normalization_makes_basic_head_args_distinct():
    (clause,) = parseProgram("q(X,X,3) :- X>0.").clauses
    args = clause.head.args
    assert all(isinstance(a, Var) for a in args)
    assert len(set(args)) == 3


def test_adt_equality_is_solved():
    (clause,) = parseProgram("r(L) :- L=[A], A>0.").clauses
    assert isinstance(clause.head.args[0], Cons)
    assert all(v.sort.isBasic for v in freeVars(clause.constraint))


def test_clause_that_never_fires_is_dropped():
    program = parseProgram("r(L) :- L=[], L=[1].\nr([]).")
    assert len(program.clauses) == 1
    assert program.diagnostics


@pytest.mark.parametrize(
    "spec, condition",
    [
        (":- spec p(X,X) ==> len(X,N) => N>=0.", 1),
        (":- spec p(X,Y) ==> K>0, len(X,N) => N>=0.", 2),
        (":- spec p(X,Y) ==> p(X,Y) => true.", 3),
        (":- spec p(X,Y) ==> len(X,N), len(Y,N) => true.", 4),
        (":- spec p(X,Y) ==> len(Z,N) => N>=0.", 5),
        (":- spec p(X,Y) ==> len(X,N) => M>=N.", 6),
    ],
)
def test_contract_conditions(spec, condition):
    with pytest.raises(ContractError) as exc:
        parseProgram(LEN_PROGRAM + spec)
    assert exc.value.condition == condition


def test_contract_with_precondition():
    program = parseProgram(
        LEN_PROGRAM
        + "s(K,[],[]).\ns(K,[H|T],[H|S]) :- s(K,T,S).\n"
        + ":- spec s(K,X,Y) ==> K>1, len(X,N), len(Y,M) => M=N."
    )
    (k,) = program.contracts
    assert k.pre != TRUE
    assert [c.pred for c in k.catas] == ["len", "len"]


def test_trivial_contract_has_no_goal():
    k = trivialContract("rev", (Var("L", LIST), Var("R", LIST)))
    assert k.isTrivial
    assert k.cid == "rev@trivial"
    assert contractToGoal(k) is None
