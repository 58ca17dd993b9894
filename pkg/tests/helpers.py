"""Shared strategies and brute-force enumerators for the test suite."""

from __future__ import annotations

import itertools

from hypothesis import strategies as st

from tasmodels.semantics import FiniteStructure
from tasmodels.syntax import (
    And,
    Atom,
    Eq,
    Exists,
    ExistsUnique,
    ForAll,
    Implies,
    Not,
    Or,
    Signature,
    free_variables,
)

# two predicates, one unary and one binary
TEST_SIGNATURE = Signature((("U", 1), ("R", 2)))
VARIABLES = ("x", "y", "z", "u")


def atoms(signature: Signature = TEST_SIGNATURE):
    preds = st.sampled_from(signature.predicates)
    var = st.sampled_from(VARIABLES)
    pred_atom = preds.flatmap(
        lambda p: st.tuples(*[var] * p[1]).map(lambda args, name=p[0]: Atom(name, args)))
    return st.one_of(pred_atom, st.builds(Eq, var, var))


def formulas(signature: Signature = TEST_SIGNATURE, max_leaves: int = 8):
    var = st.sampled_from(VARIABLES)

    def extend(children):
        return st.one_of(
            st.builds(Not, children),
            st.builds(And, children, children),
            st.builds(Or, children, children),
            st.builds(Implies, children, children),
            st.builds(ForAll, var, children),
            st.builds(Exists, var, children),
            st.builds(ExistsUnique, var, children),
        )

    return st.recursive(atoms(signature), extend, max_leaves=max_leaves)


@st.composite
def closed_formulas(draw, signature: Signature = TEST_SIGNATURE, max_leaves: int = 8):
    """A formula closed by a random quantifier over each free variable."""
    f = draw(formulas(signature, max_leaves))
    for v in sorted(free_variables(f)):
        kind = draw(st.sampled_from((ForAll, Exists, ExistsUnique)))
        f = kind(v, f)
    return f


def unique_depth(f) -> int:
    match f:
        case Atom() | Eq():
            return 0
        case ExistsUnique(_, body):
            return 1 + unique_depth(body)
        case Not(body) | ForAll(_, body) | Exists(_, body):
            return unique_depth(body)
        case And(l, r) | Or(l, r) | Implies(l, r):
            return max(unique_depth(l), unique_depth(r))
    raise TypeError(f)


def all_structures(signature: Signature, n: int, domain=None):
    """Every structure over ``signature`` with an ``n``-element domain."""
    domain = list(range(n)) if domain is None else list(domain)
    per_pred = []
    for name, arity in signature.predicates:
        tuples = list(itertools.product(domain, repeat=arity))
        per_pred.append((name, tuples))
    bit_lists = [itertools.product((False, True), repeat=len(t)) for _, t in per_pred]
    for choice in itertools.product(*[list(b) for b in bit_lists]):
        tables = {
            name: [t for t, bit in zip(tuples, bits) if bit]
            for (name, tuples), bits in zip(per_pred, choice)
        }
        yield FiniteStructure(domain, tables, signature=signature)


def naive_closure(rules, premises) -> frozenset:
    """Iterate rule application until nothing changes."""
    known = set(premises)
    while True:
        new = {r[-1] for r in rules if set(r[:-1]) <= known} - known
        if not new:
            return frozenset(known)
        known |= new


@st.composite
def logic_systems(draw, max_language: int = 8, max_rules: int = 20, max_arity: int = 4):
    size = draw(st.integers(1, max_language))
    language = list(range(size))
    token = st.sampled_from(language)
    rules = draw(st.lists(st.lists(token, min_size=1, max_size=max_arity).map(tuple),
                          max_size=max_rules))
    return language, rules
