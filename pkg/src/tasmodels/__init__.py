"""Finite and computable models of the TAS axiom schemes."""

from .consequence import LogicSystem, closure, rules_from_synthesis
from .finder import brute_force_models, canonical_form, find_model, find_models, ground
from .schemes import Scheme, get_scheme, infinity_core, tas_scheme
from .semantics import (
    CheckReport,
    ComputableStructure,
    FiniteStructure,
    StructureDefinitionError,
    StructureError,
    Verdict,
    bounded_check,
    check_scheme,
    derived_N,
    evaluate,
    holds,
)
from .syntax import FormulaError, format_formula, parse_formula
from .zoo import build_model, build_model_c, build_model_d, zoo_models

__all__ = [
    "LogicSystem", "closure", "rules_from_synthesis",
    "brute_force_models", "canonical_form", "find_model", "find_models", "ground",
    "Scheme", "get_scheme", "infinity_core", "tas_scheme",
    "CheckReport", "ComputableStructure", "FiniteStructure", "StructureDefinitionError",
    "StructureError", "Verdict", "bounded_check", "check_scheme", "derived_N",
    "evaluate", "holds",
    "FormulaError", "format_formula", "parse_formula",
    "build_model", "build_model_c", "build_model_d", "zoo_models",
]
