"""First-order formulas with equality: AST, parser, printer and rewrites.

Concrete grammar (whitespace is insignificant)::

    formula     ::= implication
    implication ::= disjunction [ "->" implication ]
    disjunction ::= conjunction { "|" conjunction }
    conjunction ::= unary { "&" unary }
    unary       ::= "~" unary
                  | quantifier variable { variable } "." formula
                  | primary
    quantifier  ::= "forall" | "exists" | "exists!"
    primary     ::= "(" formula ")"
                  | predicate "(" variable { "," variable } ")"
                  | variable "=" variable
                  | variable "!=" variable

A quantifier body extends as far to the right as possible, so
``exists y. A(y,x) & T(x)`` binds ``y`` over the whole conjunction.
``x != y`` is sugar for ``~(x = y)``. Identifiers match
``[A-Za-z_][A-Za-z0-9_]*``; an identifier directly followed by ``(`` is a
predicate name, otherwise it is a variable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Union


class FormulaError(ValueError):
    """Raised for malformed formula text or signature violations."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


EQUALITY = "="
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass(frozen=True)
class Signature:
    """Predicate symbols with their arities; equality is built in."""

    predicates: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        names = [name for name, _ in self.predicates]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate predicate names in {names}")
        for name, arity in self.predicates:
            if not _IDENT.fullmatch(name) or name == EQUALITY:
                raise ValueError(f"invalid predicate name {name!r}")
            if arity < 1:
                raise ValueError(f"predicate {name} must have arity >= 1")

    def __contains__(self, name: object) -> bool:
        return any(name == p for p, _ in self.predicates)

    def arity(self, name: str) -> int:
        for p, arity in self.predicates:
            if p == name:
                return arity
        raise KeyError(name)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.predicates)

    def extend(self, *predicates: tuple[str, int]) -> "Signature":
        return Signature(self.predicates + tuple(predicates))


# T/1, N/1, A/2, D/2, P/2, S/3
TAS_SIGNATURE = Signature(
    (("T", 1), ("N", 1), ("A", 2), ("D", 2), ("P", 2), ("S", 3))
)


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class ForAll:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class ExistsUnique:
    var: str
    body: "Formula"


Formula = Union[Atom, Eq, Not, And, Or, Implies, ForAll, Exists, ExistsUnique]
Binary = (And, Or, Implies)
Quantifier = (ForAll, Exists, ExistsUnique)


def conjoin(*parts: Formula) -> Formula:
    """Left-nested conjunction of one or more formulas."""
    result = parts[0]
    for part in parts[1:]:
        result = And(result, part)
    return result


# ---------------------------------------------------------------------------
# Variables


def free_variables(f: Formula) -> frozenset[str]:
    """Variables with at least one free occurrence in ``f``."""
    match f:
        case Atom(_, args):
            return frozenset(args)
        case Eq(left, right):
            return frozenset((left, right))
        case Not(body):
            return free_variables(body)
        case And(l, r) | Or(l, r) | Implies(l, r):
            return free_variables(l) | free_variables(r)
        case ForAll(v, body) | Exists(v, body) | ExistsUnique(v, body):
            return free_variables(body) - {v}
    raise TypeError(f"not a formula: {f!r}")


def all_variables(f: Formula) -> frozenset[str]:
    """Every variable name occurring in ``f``, free or bound."""
    match f:
        case Atom(_, args):
            return frozenset(args)
        case Eq(left, right):
            return frozenset((left, right))
        case Not(body):
            return all_variables(body)
        case And(l, r) | Or(l, r) | Implies(l, r):
            return all_variables(l) | all_variables(r)
        case ForAll(v, body) | Exists(v, body) | ExistsUnique(v, body):
            return all_variables(body) | {v}
    raise TypeError(f"not a formula: {f!r}")


def predicates_of(f: Formula) -> frozenset[str]:
    match f:
        case Atom(pred, _):
            return frozenset((pred,))
        case Eq():
            return frozenset()
        case Not(body) | ForAll(_, body) | Exists(_, body) | ExistsUnique(_, body):
            return predicates_of(body)
        case And(l, r) | Or(l, r) | Implies(l, r):
            return predicates_of(l) | predicates_of(r)
    raise TypeError(f"not a formula: {f!r}")


def fresh_variable(base: str, used: Iterable[str]) -> str:
    """``base`` itself if unused, else its stem plus the smallest free numeric suffix."""
    used = set(used)
    if base not in used:
        return base
    stem = base.rstrip("0123456789") or "v"
    i = 1
    while f"{stem}{i}" in used:
        i += 1
    return f"{stem}{i}"


def substitute(f: Formula, mapping: Mapping[str, str], avoid: Iterable[str] = ()) -> Formula:
    """Capture-avoiding replacement of free variables by variables.

    Bound variables that would capture a replacement are renamed to names
    outside ``avoid`` and the variables already present.
    """
    used = set(all_variables(f)) | set(mapping.values()) | set(avoid)
    return _subst(f, dict(mapping), used)


def _subst(f: Formula, mapping: dict[str, str], used: set[str]) -> Formula:
    match f:
        case Atom(pred, args):
            return Atom(pred, tuple(mapping.get(a, a) for a in args))
        case Eq(left, right):
            return Eq(mapping.get(left, left), mapping.get(right, right))
        case Not(body):
            return Not(_subst(body, mapping, used))
        case And(l, r):
            return And(_subst(l, mapping, used), _subst(r, mapping, used))
        case Or(l, r):
            return Or(_subst(l, mapping, used), _subst(r, mapping, used))
        case Implies(l, r):
            return Implies(_subst(l, mapping, used), _subst(r, mapping, used))
        case ForAll(v, body) | Exists(v, body) | ExistsUnique(v, body):
            inner = {k: t for k, t in mapping.items() if k != v}
            live = free_variables(body)
            targets = {t for k, t in inner.items() if k in live}
            if v in targets:
                new = fresh_variable(v, used)
                used.add(new)
                inner[v] = new
                v = new
            return type(f)(v, _subst(body, inner, used))
    raise TypeError(f"not a formula: {f!r}")


def alpha_equivalent(f: Formula, g: Formula) -> bool:
    """Structural equality up to renaming of bound variables."""
    return _alpha(f, g, {}, {})


def _alpha(f: Formula, g: Formula, fm: dict[str, int], gm: dict[str, int]) -> bool:
    def same(a: str, b: str) -> bool:
        return fm.get(a, a) == gm.get(b, b) if (a in fm) == (b in gm) else False

    if type(f) is not type(g):
        return False
    match f:
        case Atom(pred, args):
            return pred == g.pred and len(args) == len(g.args) and all(
                same(a, b) for a, b in zip(args, g.args))
        case Eq(left, right):
            return same(left, g.left) and same(right, g.right)
        case Not(body):
            return _alpha(body, g.body, fm, gm)
        case And(l, r) | Or(l, r) | Implies(l, r):
            return _alpha(l, g.left, fm, gm) and _alpha(r, g.right, fm, gm)
        case ForAll(v, body) | Exists(v, body) | ExistsUnique(v, body):
            depth = len(fm)
            return _alpha(body, g.body, {**fm, v: depth}, {**gm, g.var: depth})
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Rewrites


def expand_unique_existence(f: Formula) -> Formula:
    """Replace every ``exists! y. phi`` by its with-equality definition.

    ``exists! y. phi(y)`` becomes
    ``exists y. (phi(y) & forall w. (phi(w) -> w = y))`` where ``w`` is a
    variable occurring nowhere in ``f``. Formulas without ``exists!`` come
    back unchanged.
    """
    used = set(all_variables(f))
    return _expand_unique(f, used)


def _expand_unique(f: Formula, used: set[str]) -> Formula:
    match f:
        case Atom() | Eq():
            return f
        case Not(body):
            return Not(_expand_unique(body, used))
        case And(l, r):
            return And(_expand_unique(l, used), _expand_unique(r, used))
        case Or(l, r):
            return Or(_expand_unique(l, used), _expand_unique(r, used))
        case Implies(l, r):
            return Implies(_expand_unique(l, used), _expand_unique(r, used))
        case ForAll(v, body):
            return ForAll(v, _expand_unique(body, used))
        case Exists(v, body):
            return Exists(v, _expand_unique(body, used))
        case ExistsUnique(v, body):
            body = _expand_unique(body, used)
            w = fresh_variable("w", used)
            used.add(w)
            other = substitute(body, {v: w}, avoid=used)
            return Exists(v, And(body, ForAll(w, Implies(other, Eq(w, v)))))
    raise TypeError(f"not a formula: {f!r}")


@dataclass(frozen=True)
class Definition:
    """A defined predicate ``name(params) := body``."""

    name: str
    params: tuple[str, ...]
    body: Formula

    def __post_init__(self) -> None:
        extra = free_variables(self.body) - set(self.params)
        if extra:
            raise ValueError(f"definition of {self.name} has free variables {sorted(extra)}")


def expand_definitions(f: Formula, definitions: Mapping[str, Definition]) -> Formula:
    """Inline defined predicates.

    Bound variables of an inlined body are renamed whenever they clash with
    any variable of the host formula, so every quantifier in the result binds
    a distinct name.
    """
    used = set(all_variables(f))
    return _inline(f, definitions, used)


def _inline(f: Formula, defs: Mapping[str, Definition], used: set[str]) -> Formula:
    match f:
        case Atom(pred, args) if pred in defs:
            d = defs[pred]
            if len(args) != len(d.params):
                raise FormulaError(f"{pred} expects {len(d.params)} arguments")
            body = _inline(d.body, defs, set(all_variables(d.body)))
            body = _rename_bound(body, used)
            return substitute(body, dict(zip(d.params, args)), avoid=used)
        case Atom() | Eq():
            return f
        case Not(body):
            return Not(_inline(body, defs, used))
        case And(l, r):
            return And(_inline(l, defs, used), _inline(r, defs, used))
        case Or(l, r):
            return Or(_inline(l, defs, used), _inline(r, defs, used))
        case Implies(l, r):
            return Implies(_inline(l, defs, used), _inline(r, defs, used))
        case ForAll(v, body) | Exists(v, body) | ExistsUnique(v, body):
            return type(f)(v, _inline(body, defs, used))
    raise TypeError(f"not a formula: {f!r}")


def _rename_bound(f: Formula, used: set[str]) -> Formula:
    """Rename every bound variable of ``f`` that is in ``used``; updates ``used``."""
    match f:
        case Atom() | Eq():
            return f
        case Not(body):
            return Not(_rename_bound(body, used))
        case And(l, r):
            return And(_rename_bound(l, used), _rename_bound(r, used))
        case Or(l, r):
            return Or(_rename_bound(l, used), _rename_bound(r, used))
        case Implies(l, r):
            return Implies(_rename_bound(l, used), _rename_bound(r, used))
        case ForAll(v, body) | Exists(v, body) | ExistsUnique(v, body):
            if v in used:
                new = fresh_variable(v, used | all_variables(body))
                body = substitute(body, {v: new})
                v = new
            used.add(v)
            return type(f)(v, _rename_bound(body, used))
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Printing

_PREC = {Implies: 1, Or: 2, And: 3}
_OPS = {Implies: "->", Or: "|", And: "&"}
_KEYWORD = {ForAll: "forall", Exists: "exists", ExistsUnique: "exists!"}


def format_formula(f: Formula) -> str:
    """Render ``f`` in the concrete grammar; ``parse_formula`` inverts it."""
    match f:
        case Atom(pred, args):
            return f"{pred}({','.join(args)})"
        case Eq(left, right):
            return f"{left} = {right}"
        case Not(Eq(left, right)):
            return f"{left} != {right}"
        case Not(body):
            return "~" + _operand(body)
        case ForAll(v, body) | Exists(v, body) | ExistsUnique(v, body):
            inner = format_formula(body)
            if isinstance(body, Binary):
                inner = f"({inner})"
            return f"{_KEYWORD[type(f)]} {v}. {inner}"
        case And(l, r) | Or(l, r) | Implies(l, r):
            prec = _PREC[type(f)]
            right_assoc = isinstance(f, Implies)
            left = _child(l, prec, parenthesize_equal=right_assoc)
            right = _child(r, prec, parenthesize_equal=not right_assoc)
            return f"{left} {_OPS[type(f)]} {right}"
    raise TypeError(f"not a formula: {f!r}")


def _operand(f: Formula) -> str:
    text = format_formula(f)
    if isinstance(f, Binary + Quantifier) or (isinstance(f, Eq)):
        return f"({text})"
    return text


def _child(f: Formula, prec: int, parenthesize_equal: bool) -> str:
    text = format_formula(f)
    if isinstance(f, Quantifier):
        return f"({text})"
    if isinstance(f, Binary):
        child = _PREC[type(f)]
        if child < prec or (child == prec and parenthesize_equal):
            return f"({text})"
    return text


# ---------------------------------------------------------------------------
# Parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<op>->|!=|exists!|[()~&|=.,])|(?P<ident>[A-Za-z_][A-Za-z0-9_]*))"
)
_KEYWORDS = {"forall", "exists"}


@dataclass(frozen=True)
class _Tok:
    kind: str  # "op", "ident" or "end"
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    tokens: list[_Tok] = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise FormulaError(f"unexpected character {text[pos]!r}", pos)
        start = m.start("op") if m.group("op") else m.start("ident")
        if m.group("op"):
            tokens.append(_Tok("op", m.group("op"), start))
        else:
            word = m.group("ident")
            if word == "exists" and text.startswith("!", m.end()) and not text.startswith("!=", m.end()):
                tokens.append(_Tok("op", "exists!", start))
                pos = m.end() + 1
                continue
            tokens.append(_Tok("ident", word, start))
        pos = m.end()
    tokens.append(_Tok("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, signature: Signature):
        self.tokens = _tokenize(text)
        self.i = 0
        self.signature = signature

    @property
    def tok(self) -> _Tok:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> _Tok:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def advance(self) -> _Tok:
        tok = self.tok
        self.i += 1
        return tok

    def expect(self, text: str) -> _Tok:
        if self.tok.text != text or self.tok.kind == "end":
            found = self.tok.text or "end of input"
            raise FormulaError(f"expected {text!r}, found {found!r}", self.tok.pos)
        return self.advance()

    def at(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def variable(self) -> str:
        tok = self.tok
        if tok.kind != "ident" or tok.text in _KEYWORDS:
            found = tok.text or "end of input"
            raise FormulaError(f"expected a variable, found {found!r}", tok.pos)
        if tok.text in self.signature:
            raise FormulaError(f"predicate {tok.text} used as a variable", tok.pos)
        self.advance()
        return tok.text

    def formula(self) -> Formula:
        left = self.disjunction()
        if self.at("->"):
            self.advance()
            return Implies(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.at("|"):
            self.advance()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        while self.at("&"):
            self.advance()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        tok = self.tok
        if self.at("~"):
            self.advance()
            return Not(self.unary())
        if (tok.kind == "ident" and tok.text in _KEYWORDS) or self.at("exists!"):
            self.advance()
            kind = {"forall": ForAll, "exists": Exists, "exists!": ExistsUnique}[tok.text]
            names = [self.variable()]
            while self.tok.kind == "ident":
                names.append(self.variable())
            self.expect(".")
            body = self.formula()
            for name in reversed(names):
                body = kind(name, body)
            return body
        return self.primary()

    def primary(self) -> Formula:
        tok = self.tok
        if self.at("("):
            self.advance()
            inner = self.formula()
            self.expect(")")
            return inner
        if tok.kind == "ident" and self.peek().text == "(" and self.peek().kind == "op":
            if tok.text not in self.signature:
                raise FormulaError(f"unknown predicate {tok.text}", tok.pos)
            self.advance()
            self.expect("(")
            args = [self.variable()]
            while self.at(","):
                self.advance()
                args.append(self.variable())
            self.expect(")")
            arity = self.signature.arity(tok.text)
            if len(args) != arity:
                raise FormulaError(
                    f"{tok.text} has arity {arity} but got {len(args)} arguments", tok.pos)
            return Atom(tok.text, tuple(args))
        left = self.variable()
        if self.at("="):
            self.advance()
            return Eq(left, self.variable())
        if self.at("!="):
            self.advance()
            return Not(Eq(left, self.variable()))
        found = self.tok.text or "end of input"
        raise FormulaError(f"expected '=' or '!=' after variable {left}, found {found!r}",
                           self.tok.pos)


def parse_formula(text: str, signature: Signature = TAS_SIGNATURE, *,
                  closed: bool = False) -> Formula:
    """Parse ``text`` against ``signature``.

    With ``closed=True`` a formula with free variables is rejected.
    """
    parser = _Parser(text, signature)
    f = parser.formula()
    if parser.tok.kind != "end":
        raise FormulaError(f"unexpected {parser.tok.text!r}", parser.tok.pos)
    if closed:
        free = free_variables(f)
        if free:
            raise FormulaError(f"unbound variables {', '.join(sorted(free))} in closed formula")
    return f


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    match f:
        case Not(body) | ForAll(_, body) | Exists(_, body) | ExistsUnique(_, body):
            yield from subformulas(body)
        case And(l, r) | Or(l, r) | Implies(l, r):
            yield from subformulas(l)
            yield from subformulas(r)
