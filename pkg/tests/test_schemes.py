import pytest

from tasmodels.schemes import (
    AXIOM_TEXT,
    DEFINITIONS,
    MACRO_SIGNATURE,
    SchemeError,
    get_scheme,
    infinity_core,
    tas_scheme,
)
from tasmodels.syntax import (
    ExistsUnique,
    expand_definitions,
    format_formula,
    parse_formula,
    predicates_of,
    subformulas,
)


def test_tas1_layout():
    s = tas_scheme("TAS1")
    assert s.labels == ("E1", "E2", "E3", "R1", "R2")
    assert set(s.required_predicates) == {"T", "A", "S"}


def test_tas2_layout_and_n_expansion():
    s = tas_scheme("tas2")
    assert len(s) == 7
    assert set(s.labels) == {"E1", "E2", "E3", "E4", "E5", "R1", "R2"}
    e4 = s.axiom("E4").formula
    expected = parse_formula("exists z. exists x. exists y. (S(z,x,y) & D(z,x) & D(z,y))")
    # same shape up to the names of bound variables
    from tasmodels.syntax import alpha_equivalent
    assert alpha_equivalent(e4, expected)
    assert "N" not in predicates_of(e4)


def test_tas3_layout():
    s = tas_scheme("TAS3")
    assert s.labels == ("E1", "E2", "E3", "E4", "E5.1", "E6.1",
                        "R1.1", "R2.1", "R3.1", "R4.1")
    assert set(s.required_predicates) == {"T", "A", "S", "D", "P"}


def test_tas3_with_extension():
    s = tas_scheme("TAS3", with_extension=True)
    assert len(s) == 11
    ext = s.axiom("Ext")
    assert ext.optional
    assert predicates_of(ext.formula) == {"T", "A", "P"}
    assert s.optional_axioms == (ext,)


@pytest.mark.parametrize("scheme_id", ["tas1", "tas2"])
def test_extension_only_for_tas3(scheme_id):
    with pytest.raises(SchemeError):
        tas_scheme(scheme_id, with_extension=True)


def test_unknown_scheme():
    with pytest.raises(SchemeError):
        get_scheme("tas4")


def test_get_scheme_core():
    core = get_scheme("core")
    assert core.labels == ("E4", "E5.1", "R3.1", "R4.1")
    assert set(core.required_predicates) == {"N", "P"}
    assert core is infinity_core()


def test_all_axioms_closed_and_round_trip():
    for scheme_id in ("tas1", "tas2", "tas3"):
        for axiom in tas_scheme(scheme_id, scheme_id == "tas3"):
            assert parse_formula(format_formula(axiom.formula), MACRO_SIGNATURE,
                                 closed=True) == axiom.formula


def test_stored_text_round_trips():
    for label, text in AXIOM_TEXT.items():
        f = parse_formula(text, MACRO_SIGNATURE, closed=True)
        assert parse_formula(format_formula(f), MACRO_SIGNATURE) == f, label


def test_expansion_is_idempotent():
    for axiom in tas_scheme("tas3", True):
        assert expand_definitions(axiom.formula, DEFINITIONS) == axiom.formula


def test_shared_prefixes_are_identical():
    t1, t2, t3 = (tas_scheme(i) for i in ("tas1", "tas2", "tas3"))
    assert t2.axioms[:5] == t1.axioms
    for label in ("E1", "E2", "E3", "E4"):
        assert t3.axiom(label) == t2.axiom(label)


def test_r2_kept_asymmetric():
    r2 = tas_scheme("tas1").axiom("R2").text
    assert "~(S(x,z,y) | S(y,x,z))" in r2


def test_e5_uses_negated_equality():
    e5 = tas_scheme("tas2").axiom("E5").text
    assert "!=" in e5


def test_unique_quantifiers_survive_until_evaluation():
    e2 = tas_scheme("tas1").axiom("E2").formula
    assert any(isinstance(g, ExistsUnique) for g in subformulas(e2))


def test_restrict_keeps_only_used_predicates():
    sub = tas_scheme("tas1").restrict(["E1", "R1"])
    assert sub.labels == ("E1", "R1")
    assert set(sub.required_predicates) == {"T", "A"}
