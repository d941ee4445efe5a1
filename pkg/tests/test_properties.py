"""
Properties checked on seeded random inputs: unifiers, projection, widening,
contract goals against the bounded model, and termination of the
transformation.
"""

import itertools

import pytest

from cataverify.cata import classify
from cataverify.chc import Atom, Var, INT, BOOL, conj, conjuncts, freeVars, listSort, neg
from cataverify.chc.oracle import Bounds, boundedLeastModel, bodyInstances, evalTerm
from cataverify.chc.subst import applySubst, matchTerms, mgu
from cataverify.config import ITERATION_CAP, PROBLEM_TIMEOUT_S
from cataverify.constraints import Entailment, conjunctiveView
from cataverify.frontend import contractToGoal, parseFile
from cataverify.transform import runTcata

from .conftest import (
    corpusPath,
    isAdtFree,
    randomConjunction,
    randomContract,
    randomTerm,
    seeded,
)

LIST = listSort(INT)
BOUNDS = Bounds(depth=1, values=(0, 1))


@pytest.fixture(scope="module")
def programs():
    """
    The reverse and append programs, classified, with their bounded models.
    """
    res = []
    for name in ("reverse", "append"):
        program = parseFile(corpusPath(name))
        model = boundedLeastModel(
            program.definite, 2, (0, 1), sorts=program.sorts, time_limit_s=PROBLEM_TIMEOUT_S
        )
        res.append((program, classify(program), model))
    return res


def _groundings(vs):
    for vals in itertools.product(*(BOUNDS.groundTerms(v.sort) for v in vs)):
        yield dict(zip(vs, vals))


@pytest.mark.parametrize("seed", range(100))
def test_mgu_is_most_general(seed):
    rng = seeded(seed)
    pool = [Var("L", LIST), Var("M", LIST), Var("X", INT)]
    a = Atom("p", (randomTerm(rng, LIST, pool), randomTerm(rng, INT, pool)))
    b = Atom("p", (randomTerm(rng, LIST, pool), randomTerm(rng, INT, pool)))
    vs = tuple(freeVars((a, b)))
    s = mgu(a, b)
    if s is not None:
        assert applySubst(s, a) == applySubst(s, b)
    for g in _groundings(vs):
        if applySubst(g, a) != applySubst(g, b):
            continue
        # Every ground unifier is an instance of the computed one
        assert s is not None
        assert matchTerms(applySubst(s, vs), applySubst(g, vs), {}) is not None


@pytest.mark.solver
@pytest.mark.parametrize("seed", range(40))
def test_project_is_entailed(seed, engine):
    rng = seeded(seed)
    ints = [Var(n, INT) for n in "XYZW"]
    bools = [Var("B", BOOL)]
    c = randomConjunction(rng, ints, bools, rng.randint(2, 5))
    keep = rng.sample(ints + bools, rng.randint(1, 3))
    p = engine.project(c, keep)
    assert set(freeVars(p)) <= set(keep)
    assert engine.entails(c, p) is Entailment.YES


@pytest.mark.solver
@pytest.mark.parametrize("seed", range(20))
def test_widen_stabilizes(seed, engine):
    rng = seeded(seed)
    ints = [Var(n, INT) for n in "XYZ"]
    bools = [Var("B", BOOL)]
    w = randomConjunction(rng, ints, bools, 4)
    bound = len(conjunctiveView(w).items)
    changes = 0
    for _ in range(6):
        c = randomConjunction(rng, ints, bools, rng.randint(1, 4))
        new = engine.widen(w, c)
        assert set(conjuncts(new)) <= set(conjuncts(w))
        assert engine.entails(c, new) is Entailment.YES
        assert engine.widen(new, c) == new
        changes += new != w
        w = new
    assert changes <= bound


def _violations(k, model) -> bool:
    """
    Whether some instance of the contract's predicate in ``model`` satisfies
    the precondition and falsifies the postcondition, found by evaluating
    the catamorphisms directly.
    """
    facts = {}
    for atom in model:
        facts.setdefault(atom.pred, []).append(atom)
    bad = conj(k.pre, neg(k.post))

    def extend(i, env):
        if i == len(k.catas):
            yield env
            return
        cata = k.catas[i]
        key = tuple(env[v] for v in cata.inputs) + (env[cata.adt],)
        for f in facts.get(cata.pred, ()):
            if f.args[: len(key)] == key:
                yield from extend(i + 1, {**env, **dict(zip(cata.outputs, f.args[len(key) :]))})

    for fact in facts.get(k.pred, ()):
        for env in extend(0, dict(zip(k.z, fact.args))):
            if evalTerm(bad, env):
                return True
    return False


@pytest.mark.parametrize("seed", range(60))
def test_contract_goal_matches_violations(seed, programs):
    rng = seeded(seed)
    program, cls, model = programs[seed % len(programs)]
    k = randomContract(rng, program, cls, f"rnd@{seed}")
    goal = contractToGoal(k)
    found = bodyInstances(goal, model, Bounds(2, (0, 1), sorts=program.sorts))
    assert bool(found) == _violations(k, model), k


@pytest.mark.solver
@pytest.mark.slow
@pytest.mark.parametrize("seed", range(200))
def test_transformation_terminates(seed, programs, engine):
    rng = seeded(seed)
    program, cls, _ = programs[seed % len(programs)]
    k = randomContract(rng, program, cls, f"rnd@{seed}")
    res = runTcata(program, cls, engine, contracts=[k], time_limit_s=PROBLEM_TIMEOUT_S)
    assert res.iterations <= ITERATION_CAP
    assert isAdtFree(res.clauses)
    assert list(res.goals.values()) == [k.cid]
