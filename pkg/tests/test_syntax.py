import pytest
from hypothesis import given, settings

from helpers import TEST_SIGNATURE, all_structures, closed_formulas, formulas, unique_depth
from tasmodels.semantics import evaluate
from tasmodels.syntax import (
    TAS_SIGNATURE,
    And,
    Atom,
    Eq,
    Exists,
    ExistsUnique,
    ForAll,
    FormulaError,
    Implies,
    Not,
    Signature,
    alpha_equivalent,
    expand_unique_existence,
    format_formula,
    free_variables,
    fresh_variable,
    parse_formula,
    substitute,
)


def test_parse_existential():
    assert parse_formula("exists x. T(x)") == Exists("x", Atom("T", ("x",)))


def test_parse_rule_r1():
    f = parse_formula("forall x. forall y. (A(y,x) -> (T(x) & ~A(x,y)))")
    expected = ForAll("x", ForAll("y", Implies(
        Atom("A", ("y", "x")),
        And(Atom("T", ("x",)), Not(Atom("A", ("x", "y")))))))
    assert f == expected


def test_quantifier_sugar_binds_several_variables():
    assert parse_formula("forall x y. A(x,y)") == parse_formula("forall x. forall y. A(x,y)")


def test_not_equal_is_negated_equality():
    assert parse_formula("x != y") == Not(Eq("x", "y"))


def test_arity_mismatch():
    with pytest.raises(FormulaError, match="arity"):
        parse_formula("T(x, y)")


def test_unknown_predicate():
    with pytest.raises(FormulaError, match="unknown predicate"):
        parse_formula("Q(x)")


def test_syntax_error_reports_position():
    with pytest.raises(FormulaError) as info:
        parse_formula("exists x. (T(x) &")
    assert info.value.position == len("exists x. (T(x) &")


def test_closed_context_rejects_free_variables():
    with pytest.raises(FormulaError, match="unbound"):
        parse_formula("exists y. A(y,x)", closed=True)
    parse_formula("exists y. A(y,x)")


def test_signature_validation():
    with pytest.raises(ValueError):
        Signature((("T", 1), ("T", 2)))
    with pytest.raises(ValueError):
        Signature((("=", 2),))
    with pytest.raises(ValueError):
        Signature((("Q", 0),))
    assert TAS_SIGNATURE.arity("S") == 3


@pytest.mark.parametrize("f, expected", [
    (Atom("A", ("y", "x")), {"x", "y"}),
    (ForAll("x", Atom("T", ("x",))), set()),
    (Exists("y", And(Atom("A", ("y", "x")), Atom("T", ("z",)))), {"x", "z"}),
])
def test_free_variables(f, expected):
    assert free_variables(f) == expected


def test_unique_existence_expansion_shape():
    f = parse_formula("exists! y. A(y,x)")
    expected = parse_formula("exists y. (A(y,x) & forall w. (A(w,x) -> w = y))")
    assert expand_unique_existence(f) == expected


def test_expansion_leaves_plain_formulas_alone():
    f = parse_formula("forall x. (T(x) -> exists y. A(y,x))")
    assert expand_unique_existence(f) == f


def test_expansion_under_binders_does_not_capture():
    f = parse_formula("forall x. forall y. (A(y,x) -> exists! z. S(z,x,y))")
    g = expand_unique_existence(f)
    inner = g.body.body.right
    fresh = inner.body.right.var
    assert fresh not in {"x", "y", "z"}
    assert free_variables(g) == frozenset()


def test_fresh_variable():
    assert fresh_variable("w", {"x"}) == "w"
    assert fresh_variable("w", {"w", "w1"}) == "w2"


def test_substitute_avoids_capture():
    f = parse_formula("exists y. A(y,x)")
    g = substitute(f, {"x": "y"})
    assert free_variables(g) == {"y"}
    assert alpha_equivalent(g.body, g.body)
    assert g.var != "y"


def test_format_examples():
    assert format_formula(parse_formula("forall x. (T(x) -> exists! y. A(y,x))")) == \
        "forall x. (T(x) -> (exists! y. A(y,x)))"
    assert format_formula(parse_formula("(T(x) -> T(y)) -> T(z)")) == "(T(x) -> T(y)) -> T(z)"


# -- properties ---------------------------------------------------------------


@given(formulas(TAS_SIGNATURE, max_leaves=12))
@settings(max_examples=300)
def test_parse_format_round_trip_tas(f):
    assert parse_formula(format_formula(f), TAS_SIGNATURE) == f


@given(formulas())
@settings(max_examples=300)
def test_parse_format_round_trip_small_signature(f):
    assert parse_formula(format_formula(f), TEST_SIGNATURE) == f


@given(formulas())
@settings(max_examples=300)
def test_expansion_preserves_free_variables(f):
    g = expand_unique_existence(f)
    assert free_variables(g) == free_variables(f)
    assert "ExistsUnique" not in repr(g)


STRUCTURES = [s for n in (1, 2) for s in all_structures(TEST_SIGNATURE, n)]


@given(closed_formulas(max_leaves=6))
@settings(max_examples=150, deadline=None)
def test_unique_existence_expansion_is_sound(f):
    if unique_depth(f) > 3:
        return
    g = expand_unique_existence(f)
    for s in STRUCTURES:
        assert evaluate(s, f) == evaluate(s, g)


def test_expansion_equivalence_e3_shape_exhaustive():
    sig = Signature((("U", 1), ("S", 3)))
    f = parse_formula("forall x. forall y. (U(x) -> exists! z. S(z,x,y))", sig)
    g = expand_unique_existence(f)
    for n in (1, 2):
        for s in all_structures(sig, n):
            assert evaluate(s, f) == evaluate(s, g)
