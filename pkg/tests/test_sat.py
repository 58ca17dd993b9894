import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tasmodels.sat import Solver, solve_clauses


def brute_sat(num_vars, clauses):
    for bits in itertools.product((False, True), repeat=num_vars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
            return True
    return False


def satisfies(model, clauses):
    return all(any(model[abs(l)] == (l > 0) for l in c) for c in clauses)


@st.composite
def cnfs(draw):
    n = draw(st.integers(1, 8))
    lit = st.integers(1, n).flatmap(lambda v: st.sampled_from((v, -v)))
    clauses = draw(st.lists(st.lists(lit, min_size=1, max_size=4), max_size=30))
    return n, clauses


@given(cnfs(), st.one_of(st.none(), st.integers(0, 1000)))
@settings(max_examples=400)
def test_solver_agrees_with_truth_tables(cnf, seed):
    n, clauses = cnf
    model, _ = solve_clauses(n, clauses, seed)
    assert (model is not None) == brute_sat(n, clauses)
    if model is not None:
        assert satisfies(model, clauses)


@given(cnfs())
@settings(max_examples=100)
def test_incremental_blocking_counts_all_models(cnf):
    n, clauses = cnf
    expected = sum(
        all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses)
        for bits in itertools.product((False, True), repeat=n))
    solver = Solver(n, clauses)
    seen = set()
    while solver.solve():
        model = tuple(solver.model()[1:])
        assert model not in seen
        seen.add(model)
        solver.add_clause([-(v + 1) if val else v + 1 for v, val in enumerate(model)])
    assert len(seen) == expected


def test_pigeonhole_three_into_two_is_unsat():
    var = {(p, h): 2 * p + h + 1 for p in range(3) for h in range(2)}
    clauses = [[var[p, 0], var[p, 1]] for p in range(3)]
    for h in range(2):
        for p, q in itertools.combinations(range(3), 2):
            clauses.append([-var[p, h], -var[q, h]])
    model, stats = solve_clauses(6, clauses)
    assert model is None and stats.conflicts > 0


def test_empty_clause_and_range():
    assert solve_clauses(1, [[]])[0] is None
    with pytest.raises(ValueError):
        Solver(2, [[3]])


def test_default_branching_is_false_first_and_deterministic():
    model, stats = solve_clauses(3, [[1, 2, 3]])
    assert model == [False, False, False, True]
    again = solve_clauses(3, [[1, 2, 3]])
    assert again[1].as_dict() == stats.as_dict()
