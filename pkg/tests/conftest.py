"""
Shared fixtures.

Tests that need a solver take the `engine` or `chc_solver` fixture, which
skip the test when no solver is available.
"""

import random
import stat

from pathlib import Path

import pytest

from cataverify.backend import resolveSolver
from cataverify.chc import NIL, CONS, Cons, IntConst, Op, Var, INT, BOOL, TRUE, conj, neg
from cataverify.chc import freeVars
from cataverify.config import RunConfig
from cataverify.constraints import ConstraintEngine
from cataverify.errors import SolverUnavailableError
from cataverify.frontend import parseFile, parseProgram
from cataverify.frontend.contracts import CataAtom, Contract
from cataverify.smt import SatResult, SessionStats, openSession

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
DATA = Path(__file__).resolve().parent / "data"


def corpusPath(name: str) -> Path:
    return CORPUS / f"{name}.pl"


@pytest.fixture
def reverse():
    return parseFile(corpusPath("reverse"))


@pytest.fixture
def parse():
    """
    Parses program text.
    """
    return parseProgram


class FakeSession:
    """
    A session that records the queries and answers from a list, ``unknown``
    when the list runs out.
    """

    name = "fake"

    def __init__(self, answers=()):
        self.answers = list(answers)
        self.queries = []
        self.stats = SessionStats()

    def check(self, script: str) -> SatResult:
        self.queries.append(script)
        res = self.answers.pop(0) if self.answers else SatResult.UNKNOWN
        self.stats.count(res, 0.0)
        return res

    def close(self):
        pass


@pytest.fixture
def fake_session():
    return FakeSession


@pytest.fixture
def engine():
    """
    A `ConstraintEngine` on a real solver.
    """
    try:
        session = openSession(RunConfig())
    except SolverUnavailableError as exc:
        pytest.skip(f"No SMT solver: {exc}")
    with session:
        yield ConstraintEngine(session)


@pytest.fixture
def chc_solver():
    try:
        return resolveSolver(RunConfig())
    except SolverUnavailableError as exc:
        pytest.skip(f"No CHC solver: {exc}")


@pytest.fixture
def stub_solver(tmp_path):
    """
    Returns a function making an executable that prints ``answer`` for any
    script, standing in for a CHC solver.
    """

    def make(answer: str) -> str:
        path = tmp_path / f"solver-{answer.split()[0] if answer else 'empty'}"
        path.write_text(f"#!/bin/sh\necho '{answer}'\n", encoding="utf-8")
        path.chmod(path.stat().st_mode | stat.S_IXUSR)
        return str(path)

    return make


@pytest.fixture
def run_cfg(tmp_path):
    """
    Returns a function building a `RunConfig` that writes to ``tmp_path``.
    """

    def make(**kwargs) -> RunConfig:
        kwargs.setdefault("output_dir", tmp_path / "out")
        return RunConfig(**kwargs)

    return make


def isAdtFree(clauses) -> bool:
    for c in clauses:
        if any(not v.sort.isBasic for v in freeVars(c)):
            return False
        atoms = ([c.head] if c.head else []) + list(c.body)
        if any(isinstance(t, Cons) for a in atoms for t in a.args):
            return False
    return True


# Seeded generators for the property tests. The same seed always gives the
# same object, so a failing case can be rebuilt from its test id.


def seeded(seed: int) -> random.Random:
    return random.Random(seed)


def randomTerm(rng: random.Random, sort, pool, depth: int = 2):
    """
    A random term of ``sort``: a variable of ``pool`` with that sort, a
    constant, or a list constructor while ``depth`` allows.
    """
    same = [v for v in pool if v.sort == sort]
    if sort == INT:
        if same and rng.random() < 0.6:
            return rng.choice(same)
        return IntConst(rng.randint(0, 1))
    if same and (depth == 0 or rng.random() < 0.4):
        return rng.choice(same)
    if depth == 0 or rng.random() < 0.3:
        return Cons(NIL, (), sort)
    head = randomTerm(rng, sort.params[0], pool, depth - 1)
    return Cons(CONS, (head, randomTerm(rng, sort, pool, depth - 1)), sort)


def randomLiteral(rng: random.Random, ints, bools):
    """
    A relation over ``ints`` and small constants, or a possibly negated
    variable of ``bools``.
    """
    if bools and (not ints or rng.random() < 0.4):
        b = rng.choice(bools)
        return b if rng.random() < 0.5 else neg(b)
    x = rng.choice(ints)
    if len(ints) > 1 and rng.random() < 0.5:
        other = rng.choice([v for v in ints if v != x])
        if rng.random() < 0.3:
            other = Op("+", (other, IntConst(rng.randint(-1, 1))))
    else:
        other = IntConst(rng.randint(0, 2))
    return Op(rng.choice(["=", ">=", "=<", ">", "<"]), (x, other))


def randomConjunction(rng: random.Random, ints, bools, size: int):
    return conj(*(randomLiteral(rng, ints, bools) for _ in range(size)))


def randomContract(rng: random.Random, program, classification, cid: str) -> Contract:
    """
    A random contract on a program predicate of ``classification``, with one
    or two catamorphisms on each ADT argument and random pre and
    postconditions over their outputs and the basic arguments.
    """
    catas = classification.catamorphisms
    pred = rng.choice(sorted(classification.program_preds))
    z = tuple(Var(f"Z{i}", s) for i, s in enumerate(program.signatures[pred]))
    params = [v for v in z if v.sort == INT]
    ints, bools, atoms = list(params), [v for v in z if v.sort == BOOL], []
    for t in (v for v in z if not v.sort.isBasic):
        usable = []
        for name in sorted(catas):
            sig = program.signatures[name]
            pos = catas[name].adt_position
            if sig[pos].name == t.sort.name and (params or pos == 0):
                usable.append(name)
        for name in rng.sample(usable, min(len(usable), rng.randint(1, 2))):
            sig = program.signatures[name]
            pos = catas[name].adt_position
            inputs = tuple(rng.choice(params) for _ in sig[:pos])
            outputs = tuple(
                Var(f"Y{len(atoms)}{j}", s) for j, s in enumerate(sig[pos + 1 :])
            )
            atoms.append(CataAtom(name, inputs, t, outputs))
            for v in outputs:
                (ints if v.sort == INT else bools).append(v)

    post = randomLiteral(rng, ints, bools)
    if rng.random() < 0.5:
        op = rng.choice(["&", "|", "=>"])
        post = Op(op, (post, randomLiteral(rng, ints, bools)))
    pre = TRUE if rng.random() < 0.5 else randomLiteral(rng, ints, bools)
    return Contract(cid, pred, z, pre, tuple(atoms), post)
