"""Satisfaction over finite structures and bounded checking of infinite ones."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

from .schemes import MACRO_SIGNATURE, Scheme
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
    Signature,
    expand_unique_existence,
    format_formula,
    free_variables,
    predicates_of,
)

Element = Hashable
Env = dict

# Relation names accepted in structures. "Anti" lists the antitheses; no
# axiom refers to it, so checking ignores it.
STRUCTURE_SIGNATURE: Signature = MACRO_SIGNATURE


class StructureError(ValueError):
    """A structure violates its own well-formedness conditions."""


class StructureDefinitionError(StructureError):
    """A structure's declared data contradicts its definition.

    Raised when a declared N table disagrees with the derived one, or when a
    registered witness function hands back an element that does not work.
    """


class MissingPredicateError(LookupError):
    pass


class FiniteStructure:
    """Explicit finite domain plus extensional relation tables.

    Tables map predicate names to sets of tuples; unary tables hold
    1-tuples. Instances are immutable and hashable.
    """

    __slots__ = ("domain", "tables", "name", "_hash")

    def __init__(self, domain: Iterable[Element], tables: Mapping[str, Iterable[Sequence]],
                 signature: Signature = STRUCTURE_SIGNATURE, name: str = ""):
        domain = tuple(domain)
        if not domain:
            raise StructureError("domain must be non-empty")
        if len(set(domain)) != len(domain):
            raise StructureError("domain contains duplicate elements")
        members = set(domain)
        frozen: dict[str, frozenset] = {}
        for pred, tuples in tables.items():
            if pred not in signature:
                raise StructureError(f"unknown relation {pred}")
            arity = signature.arity(pred)
            rows = frozenset(tuple(t) for t in tuples)
            for row in rows:
                if len(row) != arity:
                    raise StructureError(f"{pred} tuple {row} does not have arity {arity}")
                for e in row:
                    if e not in members:
                        raise StructureError(f"{pred} tuple {row} leaves the domain")
            frozen[pred] = rows
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "tables", frozen)
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, key, value):
        raise AttributeError("FiniteStructure is immutable")

    def _key(self):
        return self.domain, tuple(sorted(self.tables.items(), key=lambda kv: kv[0]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteStructure):
            return NotImplemented
        return self.domain == other.domain and self.tables == other.tables

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self._key()))
        return self._hash

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<FiniteStructure{label} |D|={len(self.domain)} tables={sorted(self.tables)}>"

    def __len__(self) -> int:
        return len(self.domain)

    def table(self, pred: str) -> frozenset:
        try:
            return self.tables[pred]
        except KeyError:
            raise MissingPredicateError(f"structure has no {pred} table") from None

    def unary(self, pred: str) -> frozenset:
        """Elements of a unary table as a plain set."""
        return frozenset(t[0] for t in self.table(pred))

    def replace(self, name: str | None = None, **tables: Iterable[Sequence] | None) -> "FiniteStructure":
        """Copy with some tables replaced; ``None`` drops a table."""
        new = dict(self.tables)
        for pred, rows in tables.items():
            if rows is None:
                new.pop(pred, None)
            else:
                new[pred] = rows
        return FiniteStructure(self.domain, new, name=self.name if name is None else name)

    def restrict(self, predicates: Iterable[str]) -> "FiniteStructure":
        keep = set(predicates)
        return FiniteStructure(
            self.domain, {p: t for p, t in self.tables.items() if p in keep}, name=self.name)


# ---------------------------------------------------------------------------
# Finite satisfaction
#
# Formulas are compiled once into closures over (structure, env). The env
# dict is mutated in place by quantifiers and restored on exit.

_UNSET = object()


@lru_cache(maxsize=4096)
def _compile(f: Formula) -> Callable[[FiniteStructure, dict], bool]:
    match f:
        case Atom(pred, (a,)):
            return lambda s, env: (env[a],) in s.tables[pred]
        case Atom(pred, (a, b)):
            return lambda s, env: (env[a], env[b]) in s.tables[pred]
        case Atom(pred, (a, b, c)):
            return lambda s, env: (env[a], env[b], env[c]) in s.tables[pred]
        case Atom(pred, args):
            return lambda s, env: tuple([env[v] for v in args]) in s.tables[pred]
        case Eq(left, right):
            return lambda s, env: env[left] == env[right]
        case Not(body):
            g = _compile(body)
            return lambda s, env: not g(s, env)
        case And(l, r):
            gl, gr = _compile(l), _compile(r)
            return lambda s, env: gl(s, env) and gr(s, env)
        case Or(l, r):
            gl, gr = _compile(l), _compile(r)
            return lambda s, env: gl(s, env) or gr(s, env)
        case Implies(l, r):
            gl, gr = _compile(l), _compile(r)
            return lambda s, env: (not gl(s, env)) or gr(s, env)
        case ForAll(v, body) | Exists(v, body) | ExistsUnique(v, body):
            return _compile_quantifier(type(f), v, _compile(body))
    raise TypeError(f"not a formula: {f!r}")


def _compile_quantifier(kind, v, g):
    def run(s: FiniteStructure, env: dict) -> bool:
        saved = env.get(v, _UNSET)
        try:
            if kind is ForAll:
                for e in s.domain:
                    env[v] = e
                    if not g(s, env):
                        return False
                return True
            if kind is Exists:
                for e in s.domain:
                    env[v] = e
                    if g(s, env):
                        return True
                return False
            count = 0
            for e in s.domain:
                env[v] = e
                if g(s, env):
                    count += 1
                    if count > 1:
                        return False
            return count == 1
        finally:
            if saved is _UNSET:
                env.pop(v, None)
            else:
                env[v] = saved
    return run


def evaluate(s: FiniteStructure, f: Formula, env: Mapping[str, Element] | None = None) -> bool:
    """Tarskian satisfaction of ``f`` in ``s`` under ``env``.

    Quantifiers range over ``s.domain``, ``=`` is element identity and
    ``exists!`` holds iff exactly one element satisfies its body.
    """
    env = dict(env or {})
    missing = free_variables(f) - env.keys()
    if missing:
        raise ValueError(f"no value for free variables {sorted(missing)}")
    members = set(s.domain)
    for var, value in env.items():
        if value not in members:
            raise ValueError(f"{var}={value!r} is not a domain element")
    for pred in predicates_of(f):
        if pred not in s.tables:
            raise MissingPredicateError(f"structure has no {pred} table")
    return _compile(f)(s, env)


def holds(s: FiniteStructure, f: Formula, env: dict | None = None) -> bool:
    """Unchecked fast path of :func:`evaluate` for hot loops."""
    return _compile(f)(s, {} if env is None else env)


def derived_N(s: FiniteStructure) -> frozenset:
    """Elements z with some (z,x,y) in S such that D(z,x) and D(z,y)."""
    synth, diff = s.table("S"), s.table("D")
    return frozenset(z for (z, x, y) in synth if (z, x) in diff and (z, y) in diff)


def declared_N(s: FiniteStructure) -> frozenset | None:
    return s.unary("N") if "N" in s.tables else None


def with_derived_N(s: FiniteStructure) -> FiniteStructure:
    """Copy of ``s`` whose N table is the derived one (needs S and D)."""
    return s.replace(N=[(z,) for z in derived_N(s)])


def cross_check_N(s: FiniteStructure) -> None:
    """Raise if a declared N table disagrees with ``derived_N``."""
    declared = declared_N(s)
    if declared is None or "S" not in s.tables or "D" not in s.tables:
        return
    derived = derived_N(s)
    if declared != derived:
        raise StructureDefinitionError(
            f"declared N {sorted(declared, key=repr)} differs from derived N "
            f"{sorted(derived, key=repr)}")


# ---------------------------------------------------------------------------
# Reports


class Verdict(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped-missing-predicate"


@dataclass(frozen=True)
class AxiomResult:
    label: str
    verdict: Verdict
    assignment: dict | None = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict is not Verdict.FAIL


@dataclass(frozen=True)
class CheckReport:
    scheme: str
    structure: str
    results: tuple[AxiomResult, ...]
    window: dict | None = None

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def verdicts(self) -> tuple[tuple[str, Verdict], ...]:
        return tuple((r.label, r.verdict) for r in self.results)

    def __getitem__(self, label: str) -> AxiomResult:
        for r in self.results:
            if r.label == label:
                return r
        raise KeyError(label)

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "kind": "check",
            "scheme": self.scheme,
            "structure": self.structure,
            "ok": self.ok,
            "window": self.window,
            "axioms": [
                {
                    "label": r.label,
                    "verdict": r.verdict.value,
                    "assignment": None if r.assignment is None
                    else {k: jsonable(v) for k, v in r.assignment.items()},
                    "detail": r.detail,
                }
                for r in self.results
            ],
        }

    def format_text(self) -> str:
        lines = []
        head = f"{self.scheme} on {self.structure or 'structure'}"
        if self.window:
            head += " (bounded: " + ", ".join(
                f"{k}={v}" for k, v in self.window.items()) + ")"
        lines.append(head)
        for r in self.results:
            line = f"{r.verdict.name:<7} {r.label}"
            if r.assignment:
                line += "  counterexample: " + ", ".join(
                    f"{k}={v}" for k, v in r.assignment.items())
            elif r.verdict is Verdict.FAIL and r.assignment == {}:
                line += "  (no witness)"
            if r.detail:
                line += f"  [{r.detail}]"
            lines.append(line)
        lines.append("all axioms hold" if self.ok else "some axioms fail")
        return "\n".join(lines)


def jsonable(value: Any) -> Any:
    """Elements as JSON scalars; integers beyond 2**53 become strings."""
    if isinstance(value, bool):
        return value
    if isinstance(value, int):
        return value if abs(value) < 2**53 else str(value)
    return value if isinstance(value, (str, float)) or value is None else str(value)


def _split_prefix(f: Formula) -> tuple[list[str], Formula]:
    prefix = []
    while isinstance(f, ForAll):
        prefix.append(f.var)
        f = f.body
    return prefix, f


def _missing_result(axiom, missing: set[str]) -> AxiomResult:
    names = ", ".join(sorted(missing))
    if axiom.optional:
        return AxiomResult(axiom.label, Verdict.SKIPPED, None, f"missing predicate {names}")
    return AxiomResult(axiom.label, Verdict.FAIL, None, f"missing required predicate {names}")


def check_scheme(s: FiniteStructure, scheme: Scheme, *, cross_check: bool = True) -> CheckReport:
    """Evaluate every axiom of ``scheme`` in ``s`` in scheme order.

    When N is a defined predicate for the scheme, a declared N table is
    compared against :func:`derived_N` (``cross_check=False`` disables this);
    the axioms themselves never read N because it is expanded away.
    """
    if cross_check and "N" not in scheme.required_predicates:
        cross_check_N(s)
    results = []
    for axiom in scheme.axioms:
        missing = predicates_of(axiom.formula) - s.tables.keys()
        if missing:
            results.append(_missing_result(axiom, missing))
            continue
        results.append(_check_axiom(s, axiom.label, axiom.formula))
    return CheckReport(scheme.name, s.name, tuple(results))


def _check_axiom(s: FiniteStructure, label: str, f: Formula) -> AxiomResult:
    prefix, matrix = _split_prefix(f)
    test = _compile(matrix)
    env: dict = {}
    for values in itertools.product(s.domain, repeat=len(prefix)):
        env.update(zip(prefix, values))
        if not test(s, env):
            return AxiomResult(label, Verdict.FAIL, dict(zip(prefix, values)))
    return AxiomResult(label, Verdict.PASS)


def counterexample_holds(s: FiniteStructure, f: Formula, assignment: Mapping) -> bool:
    """Re-evaluate the matrix under a reported counterexample assignment."""
    prefix, matrix = _split_prefix(f)
    return evaluate(s, matrix, {v: assignment[v] for v in prefix})


# ---------------------------------------------------------------------------
# Infinite, intensionally given structures


WitnessFn = Callable[[str, Mapping[str, Any]], Any]


@dataclass(frozen=True)
class ComputableStructure:
    """A structure given by decision procedures rather than tables.

    ``membership[pred](*args)`` decides a relation, ``window(m)`` lists the
    first ``m`` domain elements, and ``witnesses[label](var, env)`` proposes
    an element for the existential variable ``var`` of axiom ``label`` given
    the current bindings (or ``None`` when it has nothing to offer).
    """

    name: str
    element_test: Callable[[Any], bool]
    window: Callable[[int], Sequence]
    membership: Mapping[str, Callable[..., bool]]
    witnesses: Mapping[str, WitnessFn] = field(default_factory=dict)

    def holds(self, pred: str, *args) -> bool:
        return self.membership[pred](*args)


class _Bounded:
    """Compiles formulas to closures evaluated under windowed quantifiers."""

    def __init__(self, cs: ComputableStructure, label: str,
                 universal: Sequence, existential: Sequence):
        self.cs = cs
        self.label = label
        self.universal = universal
        self.existential = existential
        self.witness = cs.witnesses.get(label)

    def compile(self, f: Formula) -> Callable[[dict], bool]:
        match f:
            case Atom(pred, args):
                test = self.cs.membership[pred]
                if len(args) == 1:
                    (a,) = args
                    return lambda env: test(env[a])
                if len(args) == 2:
                    a, b = args
                    return lambda env: test(env[a], env[b])
                return lambda env: test(*[env[v] for v in args])
            case Eq(left, right):
                return lambda env: env[left] == env[right]
            case Not(body):
                g = self.compile(body)
                return lambda env: not g(env)
            case And(l, r):
                gl, gr = self.compile(l), self.compile(r)
                return lambda env: gl(env) and gr(env)
            case Or(l, r):
                gl, gr = self.compile(l), self.compile(r)
                return lambda env: gl(env) or gr(env)
            case Implies(l, r):
                gl, gr = self.compile(l), self.compile(r)
                return lambda env: (not gl(env)) or gr(env)
            case ForAll(v, body):
                g = self.compile(body)
                universal = self.universal

                def every(env):
                    inner = dict(env)
                    for e in universal:
                        inner[v] = e
                        if not g(inner):
                            return False
                    return True
                return every
            case Exists(v, body):
                g = self.compile(body)
                existential = self.existential

                def some(env):
                    inner = dict(env)
                    for e in existential:
                        inner[v] = e
                        if g(inner):
                            return True
                    return self._from_witness(v, body, g, env)
                return some
            case ExistsUnique():
                return self.compile(expand_unique_existence(f))
        raise TypeError(f"not a formula: {f!r}")

    def _from_witness(self, v: str, body: Formula, g, env: dict) -> bool:
        if self.witness is None:
            return False
        w = self.witness(v, env)
        if w is None:
            return False
        if not self.cs.element_test(w):
            raise StructureDefinitionError(
                f"{self.cs.name}: witness {w!r} for {v} in {self.label} is not a domain element")
        if not g({**env, v: w}):
            raise StructureDefinitionError(
                f"{self.cs.name}: witness {v}={w!r} for {self.label} under {env} "
                f"does not satisfy {format_formula(body)}")
        return True


def _resolve_window(cs: ComputableStructure, window) -> list:
    elements = list(cs.window(window)) if isinstance(window, int) else list(window)
    for e in elements:
        if not cs.element_test(e):
            raise StructureDefinitionError(f"{cs.name}: window element {e!r} is not in the domain")
    return elements


def bounded_check(cs: ComputableStructure, scheme: Scheme,
                  universal_window: int | Sequence, existential_window: int | Sequence
                  ) -> CheckReport:
    """Check ``scheme`` on ``cs`` with quantifiers restricted to windows.

    Universal variables range over the universal window; existential
    variables are searched in the existential window and then offered to the
    structure's witness function for the axiom. A pass only means the axiom
    holds at these windows. A failure names an instance of the universal
    prefix; existential search never silently passes a bad witness because
    every witness is re-checked (a bad one raises
    :class:`StructureDefinitionError`).

    Windows are either sizes handed to ``cs.window`` or explicit element
    sequences.
    """
    if isinstance(universal_window, int) and isinstance(existential_window, int):
        if universal_window > existential_window:
            raise ValueError("universal window must not exceed the existential window")
    universal = _resolve_window(cs, universal_window)
    existential = _resolve_window(cs, existential_window)
    window = {
        "universal": universal_window if isinstance(universal_window, int)
        else [jsonable(e) for e in universal],
        "existential": existential_window if isinstance(existential_window, int)
        else [jsonable(e) for e in existential],
    }
    results = []
    for axiom in scheme.axioms:
        missing = predicates_of(axiom.formula) - cs.membership.keys()
        if missing:
            results.append(_missing_result(axiom, missing))
            continue
        f = expand_unique_existence(axiom.formula)
        prefix, matrix = _split_prefix(f)
        test = _Bounded(cs, axiom.label, universal, existential).compile(matrix)
        result = AxiomResult(axiom.label, Verdict.PASS)
        for values in itertools.product(universal, repeat=len(prefix)):
            env = dict(zip(prefix, values))
            if not test(env):
                result = AxiomResult(axiom.label, Verdict.FAIL, env)
                break
        results.append(result)
    return CheckReport(scheme.name, cs.name, tuple(results), window)
