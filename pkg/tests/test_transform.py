"""
The transformation: its rules one at a time, and whole runs on the corpus.
"""

import re

from dataclasses import replace

import pytest

from cataverify.cata import classify, tupleAll
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
    conjuncts,
    freeVars,
    listSort,
)
from cataverify.config import PROBLEM_TIMEOUT_S
from cataverify.constraints import ConstraintEngine
from cataverify.emit import emitProlog
from cataverify.errors import TransformError
from cataverify.frontend import contractToGoal, parseFile
from cataverify.frontend.contracts import CataAtom, Contract
from cataverify.transform import (
    StepRecord,
    TransformState,
    cataNeighborhood,
    replayStepLog,
    runTcata,
    specializeConstructorCalls,
    unfoldStep,
)
from cataverify.transform.contracts import applyContractsToClause
from cataverify.transform.define import coveringSubst
from cataverify.transform.state import Definition
from cataverify.transform.unfold import applyFunctionality, unfoldCatas

from .conftest import CORPUS, corpusPath, isAdtFree

LIST = listSort(INT)


@pytest.fixture
def reverse_cls(reverse):
    return classify(reverse)


def test_cata_neighborhood(reverse, reverse_cls):
    goal = reverse.goals[0]
    rev = goal.body[0]
    neigh = cataNeighborhood(rev, goal.body, reverse_cls.catamorphisms)
    assert [a.pred for a in neigh] == ["is_asorted", "is_dsorted"]


def test_unfold_program_atom_then_catamorphisms(reverse, reverse_cls):
    catas = reverse_cls.catamorphisms
    goal = reverse.goals[0]
    base, step = unfoldStep(goal, 0, reverse.clausesFor("rev"))
    assert [a.pred for a in base.body] == ["is_asorted", "is_dsorted"]
    assert [a.pred for a in step.body][:2] == ["rev", "snoc"]

    base = unfoldCatas(base, catas)
    assert base.body == ()
    step = unfoldCatas(step, catas)
    assert [a.pred for a in step.body] == ["rev", "snoc", "hd", "is_asorted", "is_dsorted"]
    assert all(isinstance(a.args[catas[a.pred].adt_position], Var) for a in step.body[2:])


def test_unfold_catamorphisms_without_matching_clause(reverse_cls):
    catas = reverse_cls.catamorphisms
    hd = catas["hd"]
    broken = {"hd": replace(hd, base_clauses=())}
    b, h = Var("B", BOOL), Var("H", INT)
    clause = Clause(None, TRUE, (Atom("hd", (Cons("[]", (), LIST), b, h)),))
    assert unfoldCatas(clause, broken) is None


def test_functionality_merges_repeated_calls(reverse_cls):
    t = Var("T", LIST)
    d1, h1, d2, h2 = Var("D", BOOL), Var("H", INT), Var("E", BOOL), Var("K", INT)
    clause = Clause(None, TRUE, (Atom("hd", (t, d1, h1)), Atom("hd", (t, d2, h2))))
    merged = applyFunctionality(clause, reverse_cls.catamorphisms)
    assert merged.body == (Atom("hd", (t, d1, h1)),)
    assert merged.constraint != TRUE
    assert set(freeVars(merged.constraint)) == {d1, h1, d2, h2}


def test_contract_reusing_outputs_of_earlier_contract(reverse_cls, fake_session):
    lst, res = Var("L", LIST), Var("R", LIST)
    d, h = Var("D", BOOL), Var("H", INT)
    nonneg = Op(">=", (h, IntConst(0)))
    hd = (CataAtom("hd", (), lst, (d, h)),)
    contracts = {
        "rev": [
            Contract("rev@1", "rev", (lst, res), TRUE, hd, nonneg),
            Contract("rev@2", "rev", (lst, res), nonneg, hd, d),
        ]
    }
    session = fake_session()
    clause = Clause(None, TRUE, (Atom("rev", (lst, res)),))
    new = applyContractsToClause(
        clause, contracts, ConstraintEngine(session), reverse_cls.catamorphisms
    )
    assert [a.pred for a in new.body] == ["rev", "hd"]
    assert new.body[1].args[1] in conjuncts(new.constraint)
    assert session.queries == []


def _leqAll(x, t, b):
    return Atom("leq_all", (x, t, b))


def test_covering_search_is_bounded(reverse_cls, fake_session):
    catas = reverse_cls.catamorphisms
    t, c, x = Var("T", LIST), Var("C", LIST), Var("X", INT)
    xs = [Var(f"X{i}", INT) for i in range(12)]
    bs = [Var(f"B{i}", BOOL) for i in range(12)]
    u, w, y = Var("U", LIST), Var("W", LIST), Var("Y", INT)
    es = [Var(f"E{i}", BOOL) for i in range(13)]
    a = Atom("snoc", (u, y, w))
    neigh = tuple(_leqAll(y, u, e) for e in es[:12])
    engine = ConstraintEngine(fake_session())

    distinct = [_leqAll(xs[i], t, bs[i]) for i in range(12)]
    defn = Definition.build("new1", TRUE, Atom("snoc", (t, x, c)), distinct)
    s = coveringSubst(engine, defn, a, neigh, TRUE, catas)
    assert s is not None
    assert {s[b] for b in bs} == set(es[:12])

    # Two catamorphism atoms share an output, so no injective matching exists
    shared = distinct[:11] + [_leqAll(xs[11], t, bs[0])]
    defn = Definition.build("new2", TRUE, Atom("snoc", (t, x, c)), shared)
    assert coveringSubst(engine, defn, a, neigh, TRUE, catas) is None

    more = neigh + (_leqAll(y, u, es[12]),)
    assert coveringSubst(engine, defn, a, more, TRUE, catas) is None
    assert engine.session.queries == []


def test_step_record_line():
    rec = StepRecord(3, "unfold", "new2", ("c4", "c5"))
    assert rec.line() == "3\tunfold\tnew2\tc4,c5"
    assert StepRecord.parse(rec.line() + "\n") == rec
    assert StepRecord.parse("1\tgoal\trev@19\t").outputs == ()


def test_state_names():
    state = TransformState(program={})
    assert state.newPredName("new") == "new1"
    assert state.newPredName("ext") == "ext2"
    c = state.label(Clause(None, TRUE, ()))
    assert c.origin == "c1"


def test_specialize_constructor_calls():
    program = parseFile(corpusPath("bstdel"))
    cls = classify(program)
    catas = cls.catamorphisms
    clauses = [c for c in program.definite if c.head.pred not in catas]
    goals = [contractToGoal(k) for k in cls.contracts]
    spec = specializeConstructorCalls(clauses, goals, cls.contracts, catas)

    assert list(spec.patterns) == ["delmin_1"]
    assert spec.patterns["delmin_1"].pred == "delmin"
    for c in spec.clauses:
        for a in c.body:
            assert not any(isinstance(t, Cons) for t in a.args), a
    (derived,) = spec.contracts
    assert derived.pred == "delmin_1"
    assert derived.implied
    assert derived.cid.endswith("/delmin_1")


def test_specialization_depth_limit():
    program = parseFile(corpusPath("bstdel"))
    cls = classify(program)
    clauses = [c for c in program.definite if c.head.pred not in cls.catamorphisms]
    with pytest.raises(TransformError):
        specializeConstructorCalls(clauses, [], cls.contracts, cls.catamorphisms, depth=0)


@pytest.mark.solver
def test_reverse_is_adt_free(reverse, reverse_cls, engine):
    res = runTcata(reverse, reverse_cls, engine)
    assert isAdtFree(res.clauses)
    assert set(res.goals.values()) == {"rev@line:22", "snoc@line:23"}
    heads = {c.head.pred for c in res.clauses if c.head is not None}
    assert heads
    assert all(re.fullmatch(r"(new|ext)\d+", p) for p in heads)
    assert sum(c.head is None for c in res.clauses) == 2
    assert [r.rule for r in res.step_log[:2]] == ["goal", "goal"]
    assert res.step_log[-1].rule == "fold"
    assert res.iterations > 1


@pytest.mark.solver
def test_transformation_is_deterministic(reverse, engine):
    runs = []
    for _ in range(2):
        cls = classify(reverse)
        res = runTcata(reverse, cls, ConstraintEngine(engine.session))
        runs.append((emitProlog(res.clauses), res.traceText()))
    assert runs[0] == runs[1]


@pytest.mark.solver
def test_replay(reverse, reverse_cls, engine):
    lines = runTcata(reverse, reverse_cls, engine).traceText().splitlines()
    res = replayStepLog(lines, reverse, reverse_cls, engine)
    assert res["success"], res["msg"]
    assert res["records"] == len(lines)

    res = replayStepLog(lines[:3], reverse, reverse_cls, engine)
    assert not res["success"]
    assert res["diverged_at"] == 3

    lines[1] = lines[1].replace("\tgoal\t", "\tdefine-project\t")
    res = replayStepLog(lines, reverse, reverse_cls, engine)
    assert not res["success"]
    assert res["diverged_at"] == 1


@pytest.mark.solver
def test_iteration_cap(reverse, reverse_cls, engine):
    with pytest.raises(TransformError, match="1 iterations"):
        runTcata(reverse, reverse_cls, engine, iteration_cap=1)


@pytest.mark.solver
def test_time_limit(reverse, reverse_cls, engine):
    with pytest.raises(TransformError, match="within 0 s"):
        runTcata(reverse, reverse_cls, engine, time_limit_s=0)


@pytest.mark.solver
def test_per_contract_run(reverse, reverse_cls, engine):
    (rev, _) = reverse_cls.contracts
    res = runTcata(reverse, reverse_cls, engine, contracts=[rev])
    assert list(res.goals.values()) == ["rev@line:22"]
    assert isAdtFree(res.clauses)


@pytest.mark.solver
def test_tupled_reverse(reverse, engine):
    cls = classify(reverse)
    tupleAll(cls, reverse)
    assert [c.pred for c in cls.contracts[0].catas] == ["asorted_hd", "dsorted_hd"]
    res = runTcata(reverse, cls, engine)
    assert isAdtFree(res.clauses)


@pytest.mark.solver
@pytest.mark.slow
@pytest.mark.parametrize("path", sorted(CORPUS.glob("*.pl")), ids=lambda p: p.stem)
def test_corpus_is_adt_free(path, engine):
    program = parseFile(path)
    cls = classify(program)
    res = runTcata(program, cls, engine, time_limit_s=PROBLEM_TIMEOUT_S)
    assert isAdtFree(res.clauses)
    assert res.goals
