"""The dialectical axiom schemes TAS1, TAS2, TAS3 as closed formulas."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .syntax import (
    TAS_SIGNATURE,
    Definition,
    Formula,
    Signature,
    expand_definitions,
    format_formula,
    free_variables,
    parse_formula,
    predicates_of,
)

# Antitheses of theses, used only by the optional TAS3 extension axiom.
MACRO_SIGNATURE = TAS_SIGNATURE.extend(("Anti", 1))

N_DEFINITION = Definition(
    "N", ("z",), parse_formula("exists x. exists y. (S(z,x,y) & D(z,x) & D(z,y))"))
ANTI_DEFINITION = Definition(
    "Anti", ("x",), parse_formula("exists y. (T(y) & A(x,y))"))
DEFINITIONS = {"N": N_DEFINITION, "Anti": ANTI_DEFINITION}

AXIOM_TEXT: dict[str, str] = {
    "E1": "exists x. T(x)",
    "E2": "forall x. (T(x) -> exists! y. A(y,x))",
    "E3": "forall x. forall y. (A(y,x) -> exists! z. S(z,x,y))",
    "E4": "exists x. N(x)",
    "E5": "forall x. (N(x) -> exists y. (N(y) & y != x))",
    "E5.1": "forall x. (N(x) -> exists y. (N(y) & P(x,y)))",
    "E6.1": "forall x. exists y. P(x,y)",
    "R1": "forall x. forall y. (A(y,x) -> T(x) & ~A(x,y))",
    "R2": ("forall x. forall y. forall z. (S(z,x,y) -> "
           "T(z) & (A(x,y) | A(y,x)) & ~(S(x,z,y) | S(y,x,z)))"),
    "R1.1": "forall x. forall y. (A(y,x) -> T(x) & P(x,y))",
    "R2.1": ("forall x. forall y. forall z. (S(z,x,y) -> "
             "T(z) & (A(x,y) | A(y,x)) & S(z,y,x) & P(x,z) & P(y,z))"),
    "R3.1": "forall x. forall y. (P(x,y) -> ~P(y,x))",
    "R4.1": "forall x. forall y. forall z. (P(x,y) & P(y,z) -> P(x,z))",
    "Ext": "forall x. (Anti(x) -> exists y. (Anti(y) & P(x,y)))",
}

_LAYOUT = {
    "tas1": (("E1", "E2", "E3", "R1", "R2"), ("T", "A", "S")),
    "tas2": (("E1", "E2", "E3", "R1", "R2", "E4", "E5"), ("T", "A", "S", "D")),
    "tas3": (("E1", "E2", "E3", "E4", "E5.1", "E6.1", "R1.1", "R2.1", "R3.1", "R4.1"),
             ("T", "A", "S", "D", "P")),
}
SCHEME_IDS = ("tas1", "tas2", "tas3")


class SchemeError(ValueError):
    pass


@dataclass(frozen=True)
class Axiom:
    label: str
    formula: Formula
    optional: bool = False

    @property
    def text(self) -> str:
        return format_formula(self.formula)


@dataclass(frozen=True)
class Scheme:
    """Named, ordered list of closed axioms over a set of predicates.

    Defined predicates have already been expanded away; ``exists!`` is kept
    and handled by the evaluators (the grounder expands it itself).
    """

    name: str
    axioms: tuple[Axiom, ...]
    required_predicates: tuple[str, ...]
    signature: Signature = field(default=TAS_SIGNATURE, compare=False)

    def __post_init__(self) -> None:
        labels = [a.label for a in self.axioms]
        if len(set(labels)) != len(labels):
            raise SchemeError(f"duplicate axiom labels in {self.name}")
        for axiom in self.axioms:
            if free_variables(axiom.formula):
                raise SchemeError(f"axiom {axiom.label} is not closed")
            extra = predicates_of(axiom.formula) - set(self.required_predicates)
            if extra:
                raise SchemeError(
                    f"axiom {axiom.label} uses undeclared predicates {sorted(extra)}")

    def __iter__(self):
        return iter(self.axioms)

    def __len__(self) -> int:
        return len(self.axioms)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(a.label for a in self.axioms)

    @property
    def optional_axioms(self) -> tuple[Axiom, ...]:
        return tuple(a for a in self.axioms if a.optional)

    def axiom(self, label: str) -> Axiom:
        for a in self.axioms:
            if a.label == label:
                return a
        raise KeyError(label)

    def restrict(self, labels, name: str | None = None) -> "Scheme":
        """Sub-scheme with the given axioms, over the predicates they use."""
        chosen = tuple(self.axiom(label) for label in labels)
        used = set().union(*(predicates_of(a.formula) for a in chosen))
        preds = tuple(p for p in self.required_predicates if p in used)
        return Scheme(name or f"{self.name}[{','.join(labels)}]", chosen, preds, self.signature)


@lru_cache(maxsize=None)
def axiom_formula(label: str, expand: bool = True) -> Formula:
    """The axiom named ``label``, with defined predicates inlined by default."""
    f = parse_formula(AXIOM_TEXT[label], MACRO_SIGNATURE, closed=True)
    return expand_definitions(f, DEFINITIONS) if expand else f


@lru_cache(maxsize=None)
def tas_scheme(scheme_id: str, with_extension: bool = False) -> Scheme:
    """Build TAS1, TAS2 or TAS3 (ids are case-insensitive).

    ``with_extension`` appends the antithesis-progression axiom, which is
    only defined for TAS3.
    """
    key = scheme_id.lower()
    if key not in _LAYOUT:
        raise SchemeError(f"unknown scheme {scheme_id!r}; expected one of {SCHEME_IDS}")
    labels, preds = _LAYOUT[key]
    axioms = [Axiom(label, axiom_formula(label)) for label in labels]
    if with_extension:
        if key != "tas3":
            raise SchemeError("the extension axiom is only defined for TAS3")
        axioms.append(Axiom("Ext", axiom_formula("Ext"), optional=True))
    return Scheme(key.upper(), tuple(axioms), preds)


@lru_cache(maxsize=None)
def infinity_core() -> Scheme:
    """E4, E5.1, R3.1, R4.1 with N as a primitive predicate.

    Every model of this sub-theory has an infinite N.
    """
    labels = ("E4", "E5.1", "R3.1", "R4.1")
    axioms = tuple(Axiom(label, axiom_formula(label, expand=False)) for label in labels)
    return Scheme("CORE", axioms, ("N", "P"))


def get_scheme(scheme_id: str, with_extension: bool = False) -> Scheme:
    """Look up a scheme by CLI identifier: tas1, tas2, tas3 or core."""
    if scheme_id.lower() not in SCHEME_IDS + ("core",):
        raise SchemeError(
            f"unknown scheme {scheme_id!r}; expected one of {', '.join(SCHEME_IDS)} or core")
    if scheme_id.lower() == "core":
        if with_extension:
            raise SchemeError("the extension axiom is only defined for TAS3")
        return infinity_core()
    return tas_scheme(scheme_id, with_extension)
