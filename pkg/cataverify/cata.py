"""
Catamorphism analysis.

Predicates of a program are split into program predicates, which are the
subject of contracts, and catamorphisms, which are only used inside
contracts. Every catamorphism must fit one of four schemata:

    - **A**: structural recursion over a list-like sort (at most one
      recursive constructor argument)::

          h(X,[],Res) :- base(X,Res).
          h(X,[H|T],Res) :- h(X,T,R), combine(X,H,R,Res).

    - **B**: the same over a tree-like sort, one recursive call per subtree.
    - **C** and **D**: like A and B, but the recursive clauses may also call
      auxiliary catamorphisms on the immediate subterms.

Positions before the ADT argument are the parameters ``X``, positions after
it are the outputs ``Res``.

Basic sorted predicates that are called from catamorphisms must be non
recursive and defined by a single clause; they are inlined before the
schemata are checked.
"""

import itertools
import logging

from dataclasses import dataclass, field

from cataverify.config import ORACLE_DEPTH, ORACLE_VALUES, ORACLE_CAP
from cataverify.chc.terms import (
    Var,
    Cons,
    Op,
    Atom,
    Clause,
    Sort,
    BoolConst,
    conj,
    conjuncts,
    eq,
    freeVars,
    neg,
)
from cataverify.chc.subst import applySubst, mgu, renameApart, unifyTerms
from cataverify.chc.oracle import Bounds, boundedLeastModel
from cataverify.chc.pretty import showTerm
from cataverify.errors import ClassificationError, SchemaError, OracleLimitError
from cataverify.frontend.contracts import CataAtom, Contract, goalToContract

__all__ = [
    "CataInfo",
    "PredicateClassification",
    "Tupling",
    "classify",
    "checkSchema",
    "checkOutputsDetermined",
    "tupleZygomorphism",
    "tupleContracts",
    "functionalityTotalityReport",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CataInfo:
    """
    The structure of a catamorphism.

    Attributes:
        pred: The predicate name.
        schema: One of ``"A"``, ``"B"``, ``"C"``, ``"D"``.
        sort: The sort of the ADT argument.
        param_arity: Number of parameters, possibly 0.
        adt_position: Argument index of the ADT argument.
        input_positions: Indices of the parameters.
        output_positions: Indices of the outputs.
        auxiliaries: The auxiliary catamorphisms of schemata C and D.
        base_clauses: Clauses for non recursive constructors.
        recursive_clauses: Clauses for recursive constructors.
    """

    pred: str
    schema: str
    sort: Sort
    param_arity: int
    adt_position: int
    input_positions: tuple[int, ...]
    output_positions: tuple[int, ...]
    auxiliaries: tuple["CataInfo", ...] = ()
    base_clauses: tuple[Clause, ...] = ()
    recursive_clauses: tuple[Clause, ...] = ()

    @property
    def clauses(self) -> tuple[Clause, ...]:
        """
        All clauses, with helper predicates inlined.
        """
        return self.base_clauses + self.recursive_clauses

    @property
    def arity(self) -> int:
        return self.adt_position + 1 + len(self.output_positions)

    @property
    def base_clause(self) -> Clause:
        return self.base_clauses[0]

    def allClauses(self) -> list[Clause]:
        """
        The clauses of this catamorphism and of all its auxiliaries.
        """
        res = list(self.clauses)
        for aux in self.auxiliaries:
            for c in aux.allClauses():
                if c not in res:
                    res.append(c)
        return res

    def split(self, atom: Atom) -> CataAtom:
        return CataAtom.fromAtom(atom, self.adt_position)


@dataclass
class PredicateClassification:
    """
    The split of predicates into program predicates and catamorphisms.

    Attributes:
        program_preds: Predicates that contracts are about.
        catamorphisms: `CataInfo` per catamorphism.
        helpers: Basic sorted predicates inlined into catamorphisms.
        contracts: Declared contracts followed by the ones recovered from
            goals.
        goals: Input goals that do not encode a contract.
    """

    program_preds: frozenset[str]
    catamorphisms: dict[str, CataInfo]
    helpers: frozenset[str] = frozenset()
    contracts: list[Contract] = field(default_factory=list)
    goals: list[Clause] = field(default_factory=list)

    def isCata(self, pred: str) -> bool:
        return pred in self.catamorphisms

    def cataPositions(self) -> dict[str, int]:
        return {p: i.adt_position for p, i in self.catamorphisms.items()}

    def cataClauses(self) -> list[Clause]:
        res = []
        for info in self.catamorphisms.values():
            res.extend(info.clauses)
        return res


def _callees(clauses) -> list[str]:
    res = []
    for c in clauses:
        for a in c.body:
            if a.pred not in res:
                res.append(a.pred)
    return res


def _looksLikeCata(pred: str, program) -> bool:
    """
    Cheap test for goal atoms: one ADT argument, and every clause has a
    constructor pattern in that position.
    """
    sig = program.signatures.get(pred, ())
    adt = [i for i, s in enumerate(sig) if not s.isBasic]
    clauses = program.clausesFor(pred)
    if len(adt) != 1 or not clauses:
        return False
    return all(isinstance(c.head.args[adt[0]], Cons) for c in clauses)


def _closure(seeds, program, stop=frozenset()) -> list[str]:
    """
    Predicates reachable from ``seeds`` in the call graph, in a
    deterministic order.
    """
    seen, todo = [], sorted(set(seeds))
    while todo:
        pred = todo.pop(0)
        if pred in seen or pred in stop:
            continue
        seen.append(pred)
        todo.extend(sorted(set(_callees(program.clausesFor(pred))) - set(seen)))
    return seen


def _inlineHelpers(clause: Clause, helpers: dict[str, Clause], depth: int = 0) -> Clause:
    if depth > len(helpers) + 1:
        raise SchemaError(clause.head.pred, "helper predicates are recursive")
    changed = False
    constraint, body = [clause.constraint], []
    for a in clause.body:
        if a.pred in helpers:
            h, _ = renameApart(helpers[a.pred])
            s = mgu(h.head, a)
            if s is None:
                raise SchemaError(a.pred, "helper does not unify with its call")
            constraint.append(applySubst(s, h.constraint))
            body.extend(applySubst(s, b) for b in h.body)
            changed = True
        else:
            body.append(a)
    res = Clause(clause.head, conj(*constraint), tuple(body), clause.origin)
    if changed:
        return _inlineHelpers(res, helpers, depth + 1)
    return res


def checkSchema(
    pred: str,
    clauses: list[Clause],
    program,
    known: dict[str, CataInfo] | None = None,
    helpers: dict[str, Clause] | None = None,
) -> CataInfo:
    """
    Checks that ``pred`` is a catamorphism and extracts its structure.

    Args:
        pred: The predicate.
        clauses: Its clauses.
        program: The `SourceProgram`, for signatures and ADT declarations.
        known: Catamorphisms already checked, which may be used as
            auxiliaries.
        helpers: Single clause basic predicates to inline.

    Raises:
        SchemaError: naming the failed condition.

    Returns:
        The `CataInfo`.
    """
    # A chain of independent schema conditions, so
    # @pylint: disable=too-many-locals,too-many-branches,too-many-statements
    known = known or {}
    sig = program.signatures.get(pred)
    if sig is None:
        raise SchemaError(pred, "predicate is not defined")
    adt = [i for i, s in enumerate(sig) if not s.isBasic]
    if len(adt) != 1:
        raise SchemaError(pred, "a catamorphism has exactly one ADT argument")
    pos = adt[0]
    sort = sig[pos]
    cons_sorts = dict(program.sorts.constructors(sort))

    by_cons: dict[str, Clause] = {}
    auxiliaries: dict[str, CataInfo] = {}
    tree_like = False
    for clause in clauses:
        clause = _inlineHelpers(clause, helpers or {})
        pattern = clause.head.args[pos]
        if not isinstance(pattern, Cons):
            raise SchemaError(pred, "the ADT argument of a clause head must be a constructor")
        kids = pattern.args
        if not all(isinstance(k, Var) for k in kids) or len(set(kids)) != len(kids):
            raise SchemaError(
                pred, f"the arguments of {pattern.name} must be distinct variables"
            )
        if pattern.name in by_cons:
            raise SchemaError(
                pred, f"more than one clause for {pattern.name}, so it is not functional"
            )
        by_cons[pattern.name] = clause

        inputs = clause.head.args[:pos]
        rec_kids = [k for k in kids if k.sort == sort]
        tree_like = tree_like or len(rec_kids) > 1
        used = set()
        outputs_seen = set()
        for a in clause.body:
            if a.pred == pred:
                child = a.args[pos]
                if child not in rec_kids:
                    raise SchemaError(pred, "recursion on a non-immediate subterm")
                if child in used:
                    raise SchemaError(pred, "more than one recursive call on a subterm")
                if tuple(a.args[:pos]) != tuple(inputs):
                    raise SchemaError(pred, "parameters must be passed on unchanged")
                used.add(child)
                outs = a.args[pos + 1 :]
            elif a.pred in known:
                aux = known[a.pred]
                child = a.args[aux.adt_position]
                if child not in kids:
                    raise SchemaError(
                        pred, f"auxiliary {a.pred} must be called on an immediate subterm"
                    )
                if not all(v in inputs for v in a.args[: aux.adt_position]):
                    raise SchemaError(
                        pred, f"auxiliary {a.pred} must be called with parameters of {pred}"
                    )
                auxiliaries[a.pred] = aux
                outs = a.args[aux.adt_position + 1 :]
            else:
                raise SchemaError(
                    pred,
                    f"calls {a.pred}, which is neither a catamorphism nor a total "
                    "basic function",
                )
            for v in outs:
                if not isinstance(v, Var) or v in outputs_seen or v in inputs:
                    raise SchemaError(pred, "outputs of calls must be distinct variables")
                outputs_seen.add(v)

    missing = [c for c in cons_sorts if c not in by_cons]
    if missing:
        raise SchemaError(pred, f"no clause for {', '.join(missing)}, so it is not total")

    if auxiliaries:
        schema = "D" if tree_like else "C"
    else:
        schema = "B" if tree_like else "A"

    base, rec = [], []
    for name, arg_sorts in cons_sorts.items():
        (rec if sort in arg_sorts else base).append(by_cons[name])

    info = CataInfo(
        pred=pred,
        schema=schema,
        sort=sort,
        param_arity=pos,
        adt_position=pos,
        input_positions=tuple(range(pos)),
        output_positions=tuple(range(pos + 1, len(sig))),
        auxiliaries=tuple(auxiliaries[p] for p in sorted(auxiliaries)),
        base_clauses=tuple(base),
        recursive_clauses=tuple(rec),
    )
    logger.debug("%s is a catamorphism of schema %s", pred, schema)
    return info


def _definedBy(lit, defined: set):
    """
    The variable that conjunct ``lit`` defines from the ``defined`` ones, or
    None.
    """
    if isinstance(lit, Var):
        return lit if lit not in defined else None
    if not isinstance(lit, Op):
        return None
    if lit.op == "~" and isinstance(lit.args[0], Var) and lit.args[0] not in defined:
        return lit.args[0]
    if lit.op == "=":
        for x, t in (lit.args, lit.args[::-1]):
            if (
                isinstance(x, Var)
                and x not in defined
                and all(v in defined for v in freeVars(t))
            ):
                return x
    return None


def checkOutputsDetermined(info: CataInfo) -> None:
    """
    Checks that every clause of a catamorphism computes its outputs.

    Starting from the parameters, the constructor arguments and the outputs
    of the calls, each conjunct of the clause constraint must define one more
    variable, as in ``N = M+1``, ``B`` or ``~B``. All outputs must be
    defined this way.

    Raises:
        SchemaError: for an output that is not defined, which makes the
            catamorphism a relation, or for a conjunct that only restricts
            the defined variables, which makes it partial.
    """
    pos = info.adt_position
    aux_pos = {a.pred: a.adt_position for a in info.auxiliaries}
    aux_pos[info.pred] = pos
    for clause in info.clauses:
        defined = set(clause.head.args[:pos]) | set(clause.head.args[pos].args)
        for a in clause.body:
            defined.update(a.args[aux_pos[a.pred] + 1 :])
        items = list(conjuncts(clause.constraint))
        used = set()
        changed = True
        while changed:
            changed = False
            for i, lit in enumerate(items):
                if i in used:
                    continue
                v = _definedBy(lit, defined)
                if v is not None:
                    defined.add(v)
                    used.add(i)
                    changed = True

        for v in clause.head.args[pos + 1 :]:
            if isinstance(v, Var) and v not in defined:
                raise SchemaError(
                    info.pred,
                    f"output {showTerm(v)} is not determined by the clause for "
                    f"{clause.head.args[pos].name}, so it is not functional",
                )
        guards = [lit for i, lit in enumerate(items) if i not in used]
        if guards:
            raise SchemaError(
                info.pred,
                f"{showTerm(guards[0])} restricts the clause for "
                f"{clause.head.args[pos].name}, so it is not total",
            )


def _checkOrder(preds: list[str], program, cata_set: set) -> list[str]:
    """
    Orders catamorphisms so that auxiliaries come first.
    """
    order, state = [], {}

    def visit(p, path):
        if state.get(p) == "done":
            return
        if state.get(p) == "busy":
            raise SchemaError(p, f"mutual recursion through {' -> '.join(path)}")
        state[p] = "busy"
        for q in sorted(set(_callees(program.clausesFor(p)))):
            if q != p and q in cata_set:
                visit(q, path + [q])
        state[p] = "done"
        order.append(p)

    for p in preds:
        visit(p, [p])
    return order


def classify(program) -> PredicateClassification:
    """
    Splits the predicates of a program into program predicates and
    catamorphisms, checks every catamorphism against the schemata and
    collects the contracts.

    Contracts come from ``:- spec`` directives, and from goals that have the
    shape of a contract goal. In goals without spec directives, atoms of a
    predicate with a single ADT argument that is defined by constructor
    patterns are taken as catamorphisms.

    Raises:
        ClassificationError: for a predicate that would be both a program
            predicate and a catamorphism, or a program predicate without a
            contract.
        SchemaError: for a catamorphism not fitting any schema.

    Returns:
        The `PredicateClassification`.
    """
    # pylint: disable=too-many-locals
    prog_seeds = {k.pred for k in program.contracts}
    cata_seeds = {c.pred for k in program.contracts for c in k.catas}
    for goal in program.goals:
        for a in goal.body:
            if a.pred in prog_seeds:
                continue
            if a.pred in cata_seeds or _looksLikeCata(a.pred, program):
                cata_seeds.add(a.pred)
            else:
                prog_seeds.add(a.pred)

    both = prog_seeds & cata_seeds
    if both:
        msg = f"Used as program predicate and catamorphism: {', '.join(sorted(both))}"
        logger.error(msg)
        raise ClassificationError(msg)

    cata_set = _closure(cata_seeds, program)
    prog_set = _closure(prog_seeds, program)
    both = set(cata_set) & set(prog_set)
    if both:
        msg = (
            "Required to be both a program predicate and a catamorphism: "
            f"{', '.join(sorted(both))}"
        )
        logger.error(msg)
        raise ClassificationError(msg)

    helpers = {}
    adt_catas = []
    for p in cata_set:
        sig = program.signatures.get(p, ())
        if all(s.isBasic for s in sig):
            clauses = program.clausesFor(p)
            if len(clauses) != 1:
                raise SchemaError(p, "a basic helper must be defined by exactly one clause")
            helpers[p] = clauses[0]
        else:
            adt_catas.append(p)

    catas: dict[str, CataInfo] = {}
    for p in _checkOrder(adt_catas, program, set(adt_catas)):
        catas[p] = checkSchema(p, program.clausesFor(p), program, catas, helpers)
        checkOutputsDetermined(catas[p])

    positions = {p: i.adt_position for p, i in catas.items()}
    contracts = list(program.contracts)
    goals = []
    for goal in program.goals:
        k = goalToContract(goal, positions, set(prog_set))
        if k is None:
            goals.append(goal)
        else:
            contracts.append(k)

    covered = {k.pred for k in contracts}
    for p in prog_set:
        if p not in covered:
            msg = f"Program predicate {p} has no contract"
            logger.error(msg)
            raise ClassificationError(msg)

    logger.debug(
        "Program predicates: %s; catamorphisms: %s",
        ", ".join(prog_set),
        ", ".join(catas),
    )
    return PredicateClassification(
        frozenset(prog_set), catas, frozenset(helpers), contracts, goals
    )


def shortName(pred: str) -> str:
    """
    Name fragment used for tupled predicates: ``is_asorted`` gives
    ``asorted`` and ``treemax`` gives ``max``.
    """
    for prefix in ("is_", "tree"):
        if pred.startswith(prefix) and len(pred) > len(prefix):
            pred = pred[len(prefix) :]
    return pred


@dataclass(frozen=True)
class Tupling:
    """
    A tupled catamorphism.

    Attributes:
        name: The new predicate.
        components: The catamorphism and its auxiliaries, in argument order.
        info: The `CataInfo` of the new predicate.
    """

    name: str
    components: tuple[CataInfo, ...]
    info: CataInfo
    signature: tuple[Sort, ...] = ()

    def offsets(self) -> list[tuple[int, int]]:
        """
        Start of each component's parameters and outputs in the new atom.
        """
        res, ins, outs = [], 0, 0
        for c in self.components:
            res.append((ins, outs))
            ins += c.param_arity
            outs += len(c.output_positions)
        return res


def _components(info: CataInfo) -> list[CataInfo]:
    res = [info]
    for aux in info.auxiliaries:
        for c in _components(aux):
            if all(c.pred != r.pred for r in res):
                res.append(c)
    return res


def _boolEqs(c):
    """
    Rewrites ``B = true`` and ``B = false`` conjuncts to ``B`` and ``~B``.
    """
    res = []
    for lit in conjuncts(c):
        if (
            isinstance(lit, Op)
            and lit.op == "="
            and isinstance(lit.args[0], Var)
            and isinstance(lit.args[1], BoolConst)
        ):
            res.append(lit.args[0] if lit.args[1].value else neg(lit.args[0]))
        else:
            res.append(lit)
    return conj(*res)


def tupleZygomorphism(info: CataInfo, program) -> tuple[CataInfo, Tupling | None]:
    """
    Tuples a catamorphism of schema C or D with its auxiliaries into a single
    catamorphism of schema A or B.

    The new clauses are derived per constructor by conjoining the clauses of
    all components, and merging the calls on the same subterm into one call
    of the new predicate. Calls of the same component on the same subterm
    have equal outputs, by functionality.

    Returns:
        ``(new_info, tupling)``, or ``(info, None)`` when ``info`` has schema
        A or B.

    Raises:
        SchemaError: when the auxiliaries are called with parameters that do
            not line up with their own, or on subterms of another sort.
    """
    # pylint: disable=too-many-locals
    if info.schema in ("A", "B"):
        return info, None

    comps = _components(info)
    name = "_".join(shortName(c.pred) for c in comps)
    sort = info.sort
    counter = itertools.count()

    def fresh(prefix, sorts):
        return tuple(Var(f"{prefix}{next(counter)}", s) for s in sorts)

    def argSorts(c: CataInfo):
        sig = program.signatures[c.pred]
        return [sig[i] for i in c.input_positions], [sig[i] for i in c.output_positions]

    clauses = []
    for cons_name, arg_sorts in program.sorts.constructors(sort):
        kids = fresh("A", arg_sorts)
        pattern = Cons(cons_name, kids, sort)
        head_ins = [fresh("X", argSorts(c)[0]) for c in comps]
        head_outs = [fresh("R", argSorts(c)[1]) for c in comps]
        constraint = []
        groups: dict[Var, dict[int, list]] = {}

        for j, comp in enumerate(comps):
            clause = next(c for c in comp.clauses if c.head.args[comp.adt_position].name == cons_name)
            clause, _ = renameApart(clause)
            s = unifyTerms(zip(clause.head.args, head_ins[j] + (pattern,) + head_outs[j]))
            if s is None:
                raise SchemaError(comp.pred, f"clause for {cons_name} does not unify")
            constraint.append(applySubst(s, clause.constraint))
            for a in applySubst(s, clause.body):
                k = next(i for i, c in enumerate(comps) if c.pred == a.pred)
                cata = comps[k].split(a)
                if cata.adt.sort != sort:
                    raise SchemaError(info.pred, "auxiliary on a subterm of another sort")
                groups.setdefault(cata.adt, {}).setdefault(k, []).append(cata)

        atoms = []
        for kid in kids:
            if kid not in groups:
                continue
            ins, outs = [], []
            for j, comp in enumerate(comps):
                calls = groups[kid].get(j, [])
                if not calls:
                    ins.extend(head_ins[j])
                    outs.extend(fresh("R", argSorts(comp)[1]))
                    continue
                first = calls[0]
                for other in calls[1:]:
                    if other.inputs != first.inputs:
                        raise SchemaError(
                            info.pred,
                            f"{comp.pred} is called with different parameters",
                        )
                    constraint.extend(eq(a, b) for a, b in zip(other.outputs, first.outputs))
                if first.inputs != head_ins[j]:
                    raise SchemaError(
                        info.pred, f"{comp.pred} is not called with its own parameters"
                    )
                ins.extend(first.inputs)
                outs.extend(first.outputs)
            atoms.append(Atom(name, tuple(ins) + (kid,) + tuple(outs)))

        head = Atom(
            name,
            tuple(v for vs in head_ins for v in vs)
            + (pattern,)
            + tuple(v for vs in head_outs for v in vs),
        )
        clauses.append(Clause(head, _boolEqs(conj(*constraint)), tuple(atoms), f"tuple:{name}"))

    program.signatures[name] = tuple(
        [s for c in comps for s in argSorts(c)[0]]
        + [sort]
        + [s for c in comps for s in argSorts(c)[1]]
    )
    new_info = checkSchema(name, clauses, program)
    logger.debug("Tupled %s into %s/%s", ", ".join(c.pred for c in comps), name, new_info.arity)
    return new_info, Tupling(name, tuple(comps), new_info, program.signatures[name])


def tupleCatas(catas: tuple[CataAtom, ...], tuplings: dict[str, Tupling]) -> tuple:
    """
    Replaces catamorphism atoms by atoms of tupled predicates. Atoms of the
    components on the same ADT variable are merged into one, components
    without an atom get fresh variables.
    """
    res = []
    consumed = set()
    for i, cata in enumerate(catas):
        if i in consumed:
            continue
        tup = tuplings.get(cata.pred)
        if tup is None:
            res.append(cata)
            continue
        ins, outs = [], []
        n_in = tup.info.adt_position
        for comp, (in_at, out_at) in zip(tup.components, tup.offsets()):
            match = next(
                (
                    k
                    for k, other in enumerate(catas)
                    if k not in consumed and other.pred == comp.pred and other.adt == cata.adt
                ),
                None,
            )
            if match is None:
                n_out = len(comp.output_positions)
                ins.extend(
                    Var("_P", s) for s in tup.signature[in_at : in_at + comp.param_arity]
                )
                outs.extend(
                    Var("_R", s)
                    for s in tup.signature[n_in + 1 + out_at : n_in + 1 + out_at + n_out]
                )
                continue
            consumed.add(match)
            ins.extend(catas[match].inputs)
            outs.extend(catas[match].outputs)
        res.append(CataAtom(tup.name, tuple(ins), cata.adt, tuple(outs)))
    return tuple(res)


def tupleContracts(contracts: list[Contract], tuplings: dict[str, Tupling]) -> list[Contract]:
    """
    Rewrites the catamorphism atoms of contracts with `tupleCatas`.
    """
    return [
        Contract(k.cid, k.pred, k.z, k.pre, tupleCatas(k.catas, tuplings), k.post, k.line)
        for k in contracts
    ]


def tupleAll(classification: PredicateClassification, program) -> dict[str, Tupling]:
    """
    Tuples every catamorphism of schema C or D in place.

    Returns:
        The tuplings by original predicate.
    """
    tuplings = {}
    for pred, info in list(classification.catamorphisms.items()):
        new_info, tup = tupleZygomorphism(info, program)
        if tup is not None:
            tuplings[pred] = tup
            classification.catamorphisms[tup.name] = new_info
    classification.contracts = tupleContracts(classification.contracts, tuplings)
    return tuplings


def functionalityTotalityReport(
    info: CataInfo,
    program,
    depth: int = ORACLE_DEPTH,
    values: tuple[int, ...] = ORACLE_VALUES,
    cap: int = ORACLE_CAP,
) -> dict:
    """
    Checks functionality and totality of a catamorphism on the bounded least
    model.

    Every parameter and ADT value within the bounds must have exactly one
    output tuple.

    Returns:
        A dictionary as follows:

        .. python::

            {
                'success': bool,        # Both properties hold in bounds
                'msg': str,             # Error message if not
                'functional': bool,
                'total': bool,
                'counterexample': str,  # First failing input, or None
                'checked': int,         # Number of inputs checked
            }
    """
    res = {
        "success": False,
        "msg": "",
        "functional": True,
        "total": True,
        "counterexample": None,
        "checked": 0,
    }
    bounds = Bounds(depth, values, cap, program.sorts)
    try:
        model = boundedLeastModel(info.allClauses(), depth, values, cap, program.sorts)
    except OracleLimitError as exc:
        res["msg"] = f"{info.pred}: {exc}"
        logger.error(res["msg"])
        return res

    table: dict[tuple, set] = {}
    n_in = info.adt_position + 1
    for atom in model:
        if atom.pred == info.pred:
            table.setdefault(atom.args[:n_in], set()).add(atom.args[n_in:])

    sig = program.signatures[info.pred]
    domains = [bounds.groundTerms(sig[i]) for i in info.input_positions]
    domains.append(bounds.groundTerms(info.sort))
    for inputs in itertools.product(*domains):
        res["checked"] += 1
        outs = table.get(tuple(inputs), set())
        shown = ", ".join(showTerm(t) for t in inputs)
        if not outs:
            res["total"] = False
            res["counterexample"] = res["counterexample"] or f"{info.pred}({shown})"
        elif len(outs) > 1:
            res["functional"] = False
            res["counterexample"] = res["counterexample"] or f"{info.pred}({shown})"

    if not (res["total"] and res["functional"]):
        what = "total" if not res["total"] else "functional"
        res["msg"] = f"{info.pred} is not {what}: counterexample {res['counterexample']}"
        logger.error(res["msg"])
        return res

    res["success"] = True
    return res
