"""Finite model finding: grounding, solving, enumeration and a brute-force oracle."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterable, Union

from .sat import Solver, SolverStats
from .schemes import Scheme
from .semantics import FiniteStructure, check_scheme, derived_N, holds
from .syntax import (
    And,
    Atom,
    Eq,
    Exists,
    ExistsUnique,
    ForAll,
    Formula,
    Implies,
    Not,
    Or,
    TAS_SIGNATURE,
    expand_unique_existence,
    predicates_of,
)

log = logging.getLogger(__name__)

# Largest n for which isomorphism classes are computed by trying every
# permutation of the domain.
DEDUP_MAX_SIZE = 5
# Largest total number of relation bits the brute-force oracle will scan.
ORACLE_BIT_BUDGET = 24

# Propositional circuits: True/False, an int literal, or (tag, children)
# with tag 0 for conjunction and 1 for disjunction.
_AND, _OR = 0, 1
Node = Union[bool, int, tuple]


def _junction(tag: int, parts: Iterable[Node]) -> Node:
    absorbing = tag == _OR      # True absorbs a disjunction, False a conjunction
    children: dict[Node, None] = {}
    for part in parts:
        if part is absorbing:
            return absorbing
        if part is (not absorbing):
            continue
        if isinstance(part, tuple) and part[0] == tag:
            children.update(dict.fromkeys(part[1]))
        else:
            children[part] = None
    lits = {c for c in children if isinstance(c, int)}
    if any(-c in lits for c in lits):
        return absorbing
    if not children:
        return not absorbing
    if len(children) == 1:
        return next(iter(children))
    return (tag, tuple(children))


@dataclass
class GroundProblem:
    """A scheme instantiated over {0, ..., n-1} as CNF.

    Variables 1..``num_atoms`` are relation atoms listed in ``atoms``;
    higher variables are auxiliary definitions introduced by clausification.
    ``provenance[i]`` names the axiom and universal instance behind clause i.
    """

    scheme: Scheme
    n: int
    predicates: tuple[str, ...]
    atoms: list[tuple[str, tuple[int, ...]]]
    atom_index: dict[tuple[str, tuple[int, ...]], int]
    clauses: list[tuple[int, ...]] = field(default_factory=list)
    provenance: list[tuple[str, dict]] = field(default_factory=list)
    num_vars: int = 0

    @property
    def num_atoms(self) -> int:
        return len(self.atoms)

    def atom(self, var: int) -> tuple[str, tuple[int, ...]] | None:
        """Relation atom of a variable, or None for an auxiliary one."""
        return self.atoms[var - 1] if 1 <= var <= len(self.atoms) else None

    def var(self, pred: str, args: tuple[int, ...]) -> int:
        return self.atom_index[(pred, tuple(args))]

    def to_dimacs(self) -> str:
        lines = [f"c scheme {self.scheme.name} size {self.n}"]
        for i, (pred, args) in enumerate(self.atoms, start=1):
            lines.append(f"c {i} {pred}({','.join(map(str, args))})")
        lines.append(f"p cnf {self.num_vars} {len(self.clauses)}")
        lines.extend(" ".join(map(str, c)) + " 0" for c in self.clauses)
        return "\n".join(lines) + "\n"


class _Grounder:
    def __init__(self, problem: GroundProblem):
        self.p = problem
        self.domain = range(problem.n)
        self.aux: dict[tuple, int] = {}
        self.label = ""
        self.instance: dict = {}

    def node(self, f: Formula, env: dict, positive: bool) -> Node:
        match f:
            case Atom(pred, args):
                lit = self.p.atom_index[(pred, tuple(env[a] for a in args))]
                return lit if positive else -lit
            case Eq(left, right):
                return (env[left] == env[right]) == positive
            case Not(body):
                return self.node(body, env, not positive)
            case And(l, r) | Or(l, r):
                conj = isinstance(f, And) == positive
                return _junction(_AND if conj else _OR,
                                 (self.node(l, env, positive), self.node(r, env, positive)))
            case Implies(l, r):
                tag = _OR if positive else _AND
                return _junction(tag, (self.node(l, env, not positive),
                                       self.node(r, env, positive)))
            case ForAll(v, body) | Exists(v, body):
                conj = isinstance(f, ForAll) == positive
                return _junction(_AND if conj else _OR,
                                 (self.node(body, {**env, v: e}, positive) for e in self.domain))
            case ExistsUnique():
                return self.node(expand_unique_existence(f), env, positive)
        raise TypeError(f"not a formula: {f!r}")

    def emit(self, clause: Iterable[int]) -> None:
        self.p.clauses.append(tuple(clause))
        self.p.provenance.append((self.label, self.instance))

    def literal(self, node: Node) -> int:
        if isinstance(node, int) and not isinstance(node, bool):
            return node
        key = node
        if key in self.aux:
            return self.aux[key]
        self.p.num_vars += 1
        d = self.p.num_vars
        self.aux[key] = d
        tag, children = node
        lits = [self.literal(c) for c in children]
        if tag == _AND:
            for lit in lits:
                self.emit((-d, lit))
        else:
            self.emit((-d, *lits))
        return d

    def assert_node(self, node: Node) -> None:
        if node is True:
            return
        if node is False:
            self.emit(())
            return
        if isinstance(node, int):
            self.emit((node,))
            return
        tag, children = node
        if tag == _AND:
            for child in children:
                self.assert_node(child)
        else:
            self.emit(tuple(self.literal(c) for c in children))


def ground(scheme: Scheme, n: int, *, pin_witness: bool = False) -> GroundProblem:
    """Instantiate every axiom of ``scheme`` over the domain {0, ..., n-1}.

    Equalities between elements are decided on the spot, negations are
    pushed to the atoms and nested connectives are named by auxiliary
    variables (one implication per name, so the clause set is equisatisfiable
    with the grounded axioms). ``pin_witness`` asserts T(0), which loses no
    models up to isomorphism when the scheme demands some thesis.
    """
    if n < 1:
        raise ValueError("domain size must be at least 1")
    preds = tuple(scheme.required_predicates)
    atoms = []
    for pred in preds:
        arity = TAS_SIGNATURE.arity(pred)
        atoms.extend((pred, args) for args in itertools.product(range(n), repeat=arity))
    problem = GroundProblem(scheme, n, preds, atoms, {a: i for i, a in enumerate(atoms, 1)})
    problem.num_vars = len(atoms)
    g = _Grounder(problem)
    for axiom in scheme.axioms:
        f = expand_unique_existence(axiom.formula)
        prefix = []
        while isinstance(f, ForAll):
            prefix.append(f.var)
            f = f.body
        g.label = axiom.label
        for values in itertools.product(range(n), repeat=len(prefix)):
            g.instance = dict(zip(prefix, values))
            g.assert_node(g.node(f, dict(g.instance), True))
    if pin_witness:
        if "T" not in preds:
            raise ValueError("pinning a witness needs the T predicate")
        g.label, g.instance = "pin", {"x": 0}
        g.emit((problem.var("T", (0,)),))
    return problem


@dataclass
class SolveOutcome:
    sat: bool
    structure: FiniteStructure | None
    stats: SolverStats

    def __bool__(self) -> bool:
        return self.sat


def _finish(n: int, tables: dict[str, Iterable], predicates: Iterable[str]) -> FiniteStructure:
    """Structure over range(n); N is added by derivation when it is defined."""
    s = FiniteStructure(range(n), tables)
    preds = set(predicates)
    if {"S", "D"} <= preds and "N" not in preds:
        s = s.replace(N=[(z,) for z in derived_N(s)])
    return s


def _extract(p: GroundProblem, model: list[bool]) -> FiniteStructure:
    tables: dict[str, list] = {pred: [] for pred in p.predicates}
    for var, (pred, args) in enumerate(p.atoms, start=1):
        if model[var]:
            tables[pred].append(args)
    s = _finish(p.n, tables, p.predicates)
    report = check_scheme(s, p.scheme)
    if not report.ok:
        raise AssertionError(f"solver produced a non-model:\n{report.format_text()}")
    return s


def _solve_with(solver: Solver, p: GroundProblem) -> SolveOutcome:
    if solver.solve():
        return SolveOutcome(True, _extract(p, solver.model()), solver.stats)
    return SolveOutcome(False, None, solver.stats)


def solve(p: GroundProblem, seed: int | None = None) -> SolveOutcome:
    """Decide ``p``; a satisfying assignment is read back as a structure
    and re-checked against the scheme before it is returned."""
    return _solve_with(Solver(p.num_vars, p.clauses, seed), p)


def find_model(scheme: Scheme, n: int, **kwargs) -> SolveOutcome:
    seed = kwargs.pop("seed", None)
    return solve(ground(scheme, n, **kwargs), seed)


def _assignment_clause(p: GroundProblem, s: FiniteStructure) -> list[int]:
    """Clause false exactly under the atom assignment that encodes ``s``."""
    clause = []
    for var, (pred, args) in enumerate(p.atoms, start=1):
        clause.append(-var if args in s.tables[pred] else var)
    return clause


def canonical_form(s: FiniteStructure, predicates: Iterable[str] | None = None) -> tuple:
    """Isomorphism-invariant key: least relabelling onto 0..n-1."""
    preds = sorted(predicates if predicates is not None else s.tables)
    best = None
    for perm in itertools.permutations(range(len(s.domain))):
        mapping = dict(zip(s.domain, perm))
        key = tuple(
            (p, tuple(sorted(tuple(mapping[e] for e in row) for row in s.tables[p])))
            for p in preds)
        if best is None or key < best:
            best = key
    return (len(s.domain), best)


def _images(s: FiniteStructure) -> set[FiniteStructure]:
    out = set()
    for perm in itertools.permutations(s.domain):
        mapping = dict(zip(s.domain, perm))
        tables = {p: [tuple(mapping[e] for e in row) for row in rows]
                  for p, rows in s.tables.items()}
        out.add(FiniteStructure(s.domain, tables))
    return out


def find_models(scheme: Scheme, n: int, limit: int | None = None, *, dedup: bool = False,
                pin_witness: bool = False, seed: int | None = None) -> list[FiniteStructure]:
    """Enumerate models of size ``n`` by solving and blocking.

    ``limit=None`` enumerates everything. With ``dedup`` one representative
    per isomorphism class is returned; each new model's whole orbit is
    blocked at once.
    """
    if limit is not None and limit < 0:
        raise ValueError("limit must be non-negative")
    if dedup and n > DEDUP_MAX_SIZE:
        raise ValueError(f"isomorphism filtering is limited to n <= {DEDUP_MAX_SIZE}")
    found: list[FiniteStructure] = []
    if limit == 0:
        return found
    p = ground(scheme, n, pin_witness=pin_witness)
    solver = Solver(p.num_vars, p.clauses, seed)
    while limit is None or len(found) < limit:
        outcome = _solve_with(solver, p)
        if not outcome.sat:
            break
        s = outcome.structure
        found.append(s)
        blocked = _images(s.restrict(p.predicates)) if dedup else [s]
        for image in blocked:
            if not solver.add_clause(_assignment_clause(p, image)):
                break
        if not solver.ok:
            break
    log.debug("found %d models of %s at n=%d", len(found), scheme.name, n)
    return found


class _Scratch:
    """Bare (domain, tables) pair read by the compiled evaluator."""

    __slots__ = ("domain", "tables")

    def __init__(self, domain, tables):
        self.domain = domain
        self.tables = tables


def oracle_bits(scheme: Scheme, n: int) -> int:
    return sum(n ** TAS_SIGNATURE.arity(p) for p in scheme.required_predicates)


def _oracle_order(scheme: Scheme) -> list[tuple[str, list]]:
    """Predicates ordered so axioms become checkable as early as possible."""
    remaining = list(scheme.required_predicates)
    chosen: list[str] = []
    plan = []
    pending = list(scheme.axioms)
    while remaining:
        def completes(p):
            done = set(chosen) | {p}
            return sum(1 for a in pending if predicates_of(a.formula) <= done)
        best = max(remaining, key=lambda p: (completes(p), -remaining.index(p)))
        remaining.remove(best)
        chosen.append(best)
        ready = [a for a in pending if predicates_of(a.formula) <= set(chosen)]
        pending = [a for a in pending if a not in ready]
        plan.append((best, [a.formula for a in ready]))
    return plan


def brute_force_models(scheme: Scheme, n: int) -> list[FiniteStructure]:
    """Every model of size ``n``, by scanning all relation tables.

    Independent of the grounder and solver: tables are enumerated
    predicate by predicate and each axiom is evaluated directly as soon as
    all its predicates have tables, which prunes without changing the
    result. Limited to ``ORACLE_BIT_BUDGET`` relation bits.
    """
    bits = oracle_bits(scheme, n)
    if bits > ORACLE_BIT_BUDGET:
        raise ValueError(f"{bits} relation bits exceed the oracle budget of {ORACLE_BIT_BUDGET}")
    domain = tuple(range(n))
    plan = _oracle_order(scheme)
    spaces = [list(itertools.product(domain, repeat=TAS_SIGNATURE.arity(p))) for p, _ in plan]
    scratch = _Scratch(domain, {})
    models: list[FiniteStructure] = []

    def search(level: int) -> None:
        if level == len(plan):
            models.append(_finish(n, dict(scratch.tables), scheme.required_predicates))
            return
        pred, ready = plan[level]
        space = spaces[level]
        for mask in range(1 << len(space)):
            scratch.tables[pred] = frozenset(t for i, t in enumerate(space) if mask >> i & 1)
            if all(holds(scratch, f, {}) for f in ready):
                search(level + 1)
        del scratch.tables[pred]

    search(0)
    return models
