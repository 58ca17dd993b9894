"""Concrete models of the schemes: A, B, C, D_k and relabelled copies.

Model C and large D_k are infinite or too large to tabulate, so they are
returned as :class:`ComputableStructure` objects with membership procedures
and witness functions for bounded checking.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from .semantics import (
    STRUCTURE_SIGNATURE,
    ComputableStructure,
    FiniteStructure,
    StructureError,
)

# Largest number of S tuples (k + 1) materialised by ``build_model_d``.
EXTENSIONAL_LIMIT = 10**6


def _unary(elements: Iterable) -> list[tuple]:
    return [(e,) for e in elements]


def build_model(model_id: str, *, alternative_n: bool = False) -> FiniteStructure:
    """Model A (three elements) or Model B (four elements).

    ``alternative_n`` gives Model A the alternative N = {1, 2}; that table
    disagrees with the derived N, so checking it needs ``cross_check=False``.
    """
    key = model_id.upper()
    if key == "A":
        tables = {
            "T": _unary([1, 2, 3]),
            "Anti": _unary([1, 2, 3]),
            "A": [(1, 2), (2, 3), (3, 1)],
            "S": [(1, 3, 2), (2, 1, 3), (3, 2, 1)],
            "D": [(1, 3), (1, 2), (2, 1), (2, 3), (3, 2), (3, 1)],
            "N": _unary([1, 2] if alternative_n else [1, 2, 3]),
        }
        return FiniteStructure([1, 2, 3], tables, name="model-A")
    if alternative_n:
        raise ValueError("the alternative N table exists only for Model A")
    if key == "B":
        tables = {
            "T": _unary([1, 2]),
            "Anti": _unary([3, 4]),
            "A": [(3, 1), (4, 2)],
            "S": [(2, 1, 3), (1, 2, 4)],
            "D": [(2, 1), (2, 3), (1, 2), (1, 4)],
            "N": _unary([1, 2]),
        }
        return FiniteStructure([1, 2, 3, 4], tables, name="model-B")
    raise ValueError(f"unknown finite model {model_id!r}; expected A or B")


# ---------------------------------------------------------------------------
# Model C


@dataclass(frozen=True)
class SequenceTriple:
    index: int
    a: int
    b: int
    c: int


class _Sequences:
    """Lazily extended table of (a_i, b_i, c_i) following the recurrences."""

    def __init__(self) -> None:
        self.a = [3]
        self.b = [4]
        self.c = [7]
        self.a_index = {3: 0}
        self.b_index = {4: 0}

    def _grow(self) -> None:
        c = self.c[-1]
        i = len(self.a)
        self.a.append(c)
        self.b.append(c + 1)
        self.c.append(2 * c + 1)
        self.a_index[c] = i
        self.b_index[c + 1] = i

    def upto(self, i: int) -> None:
        while len(self.a) <= i:
            self._grow()

    def covering(self, value: int) -> None:
        while self.b[-1] < value:
            self._grow()

    def triple(self, i: int) -> SequenceTriple:
        self.upto(i)
        return SequenceTriple(i, self.a[i], self.b[i], self.c[i])

    def index_a(self, v) -> int | None:
        if type(v) is not int or v < 3:
            return None
        self.covering(v)
        return self.a_index.get(v)

    def index_b(self, v) -> int | None:
        if type(v) is not int or v < 4:
            return None
        self.covering(v)
        return self.b_index.get(v)

    def index_c(self, v) -> int | None:
        i = self.index_a(v)
        return None if i is None or i == 0 else i - 1


_SEQ = _Sequences()


def model_c_sequences(i: int) -> SequenceTriple:
    """(a_i, b_i, c_i) with a_0 = 3, b_0 = 4, c_0 = 7 and
    a_{i+1} = c_i, b_{i+1} = c_i + 1, c_{i+1} = 2 c_i + 1."""
    if i < 0:
        raise ValueError("index must be non-negative")
    return _SEQ.triple(i)


def _witness_table(roles: Mapping[str, Mapping[str, Callable[[Mapping], object]]]):
    def make(per_var):
        def witness(var, env):
            fn = per_var.get(var)
            return None if fn is None else fn(env)
        return witness
    return {label: make(per_var) for label, per_var in roles.items()}


def _n_roles(first: Callable, second: Callable, subject: str, u: str, v: str) -> dict:
    """Witnesses for the two inner variables of an inlined N(subject)."""
    return {
        u: lambda env: first(env[subject]),
        v: lambda env: second(env[subject], env[u]),
    }


def build_model_c() -> ComputableStructure:
    """The denumerable Model C on {a_i} ∪ {b_i} with P the numeric order."""
    seq = _SEQ

    def is_a(v):
        return seq.index_a(v) is not None

    def is_b(v):
        return seq.index_b(v) is not None

    def in_domain(v):
        return is_a(v) or is_b(v)

    def antithesis_of(x, y):
        i = seq.index_a(x)
        return i is not None and seq.index_b(y) == i

    def synthesis(z, x, y):
        i = seq.index_c(z)
        if i is None:
            return False
        pair = (seq.a[i], seq.b[i])
        return (x, y) == pair or (y, x) == pair

    def different(z, x):
        i = seq.index_c(z)
        return i is not None and x in (seq.a[i], seq.b[i])

    def nodal(z):
        return seq.index_c(z) is not None

    def precedes(x, y):
        return in_domain(x) and in_domain(y) and x < y

    def window(m):
        seq.upto(m)
        return [e for i in range(m) for e in (seq.a[i], seq.b[i])]

    # witness helpers; each returns None outside its intended arguments
    def b_for_a(x):
        i = seq.index_a(x)
        return None if i is None else seq.b[i]

    def a_for_b(x):
        i = seq.index_b(x)
        return None if i is None else seq.a[i]

    def c_for(x):
        i = seq.index_a(x)
        if i is None:
            i = seq.index_b(x)
        return None if i is None else seq.triple(i).c

    def n_first(z):
        i = seq.index_c(z)
        return None if i is None else seq.a[i]

    def n_second(z, first):
        i = seq.index_c(z)
        if i is None:
            return None
        a, b = seq.a[i], seq.b[i]
        return b if first == a else a if first == b else None

    def next_c(z):
        i = seq.index_c(z)
        return None if i is None else seq.triple(i + 1).c

    def successor(x):
        return b_for_a(x) if is_a(x) else c_for(x) if is_b(x) else None

    def next_b(x):
        i = seq.index_b(x)
        return None if i is None else seq.triple(i + 1).b

    n_x = _n_roles(n_first, n_second, "x", "x1", "y1")
    n_y = _n_roles(n_first, n_second, "y", "x2", "y2")
    witnesses = _witness_table({
        "E1": {"x": lambda env: seq.a[0]},
        "E2": {"y": lambda env: b_for_a(env["x"])},
        "E3": {"z": lambda env: c_for(env["x"])},
        "E4": {"x": lambda env: seq.c[0], **_n_roles(n_first, n_second, "x", "x1", "y")},
        "E5": {**n_x, **n_y, "y": lambda env: next_c(env["x"])},
        "E5.1": {**n_x, **n_y, "y": lambda env: next_c(env["x"])},
        "E6.1": {"y": lambda env: successor(env["x"])},
        "Ext": {
            "y1": lambda env: a_for_b(env["x"]),
            "y": lambda env: next_b(env["x"]),
            "y2": lambda env: a_for_b(env["y"]),
        },
    })
    membership = {
        "T": is_a,
        "Anti": is_b,
        "A": lambda y, x: antithesis_of(x, y),
        "S": synthesis,
        "D": different,
        "N": nodal,
        "P": precedes,
    }
    return ComputableStructure("model-C", in_domain, window, membership, witnesses)


# ---------------------------------------------------------------------------
# Model D_k


def _model_d_tables(k: int) -> dict[str, list[tuple]]:
    return {
        "T": _unary(range(k + 1)),
        "Anti": [(k + 1,)],
        "A": [(k + 1, i) for i in range(k + 1)],
        "S": [(i + 1, i, k + 1) for i in range(k)] + [(0, k, k + 1)],
        "D": [(1, 0), (1, k + 1), (2, 1), (2, k + 1)],
        "N": _unary([1, 2]),
    }


def build_model_d(k: int, form: str = "auto") -> FiniteStructure | ComputableStructure:
    """Model D_k on {0, ..., k+1} with the single antithesis k + 1.

    ``form`` is ``"extensional"``, ``"intensional"`` or ``"auto"``; the
    latter tabulates while k + 1 <= ``EXTENSIONAL_LIMIT``. The intensional
    form accepts arbitrarily large k, which is how the hyperfinite
    structure with an infinite parameter is emulated.
    """
    if type(k) is not int or k < 2:
        raise ValueError(f"Model D needs an integer k >= 2, got {k!r}")
    if form not in ("auto", "extensional", "intensional"):
        raise ValueError(f"unknown form {form!r}")
    if form == "extensional" or (form == "auto" and k + 1 <= EXTENSIONAL_LIMIT):
        return FiniteStructure(range(k + 2), _model_d_tables(k), name=f"model-D{k}")
    return _model_d_intensional(k)


def _model_d_intensional(k: int) -> ComputableStructure:
    top = k + 1

    def in_domain(v):
        return type(v) is int and 0 <= v <= top

    def thesis(v):
        return type(v) is int and 0 <= v <= k

    def synthesis(z, x, y):
        if y != top or not thesis(x):
            return False
        return z == x + 1 if x < k else z == 0

    def n_first(z):
        return {1: 0, 2: 1}.get(z)

    def n_second(z, first):
        return top if first is not None and first == n_first(z) else None

    witnesses = _witness_table({
        "E1": {"x": lambda env: 0},
        "E2": {"y": lambda env: top if thesis(env["x"]) else None},
        "E3": {"z": lambda env: None if not thesis(env["x"])
               else env["x"] + 1 if env["x"] < k else 0},
        "E4": {"x": lambda env: 1, **_n_roles(n_first, n_second, "x", "x1", "y")},
        "E5": {
            **_n_roles(n_first, n_second, "x", "x1", "y1"),
            **_n_roles(n_first, n_second, "y", "x2", "y2"),
            "y": lambda env: {1: 2, 2: 1}.get(env["x"]),
        },
    })
    membership = {
        "T": thesis,
        "Anti": lambda v: v == top,
        "A": lambda y, x: y == top and thesis(x),
        "S": synthesis,
        "D": lambda z, x: (z, x) in {(1, 0), (1, top), (2, 1), (2, top)},
        "N": lambda z: z in (1, 2),
    }
    return ComputableStructure(
        f"model-D[k={k}]", in_domain, lambda m: range(min(m, k + 2)), membership, witnesses)


def lambda_window(k: int) -> list[int]:
    """{0, 1, 2, 3, k-2, k-1, k, k+1}: both ends of the D_k domain."""
    return sorted({0, 1, 2, 3, k - 2, k - 1, k, k + 1})


# ---------------------------------------------------------------------------
# Relabelling and restriction


def relabel(s: FiniteStructure, f: Mapping | Callable) -> FiniteStructure:
    """Image of ``s`` under an injection on its domain, table by table."""
    image = f if callable(f) else f.__getitem__
    try:
        mapping = {e: image(e) for e in s.domain}
    except KeyError as exc:
        raise ValueError(f"relabelling is undefined on {exc.args[0]!r}") from None
    if len(set(mapping.values())) != len(mapping):
        raise ValueError("relabelling is not injective on the domain")
    tables = {p: [tuple(mapping[e] for e in row) for row in rows] for p, rows in s.tables.items()}
    return FiniteStructure([mapping[e] for e in s.domain], tables, name=s.name)


def materialize(cs: ComputableStructure, elements: Sequence,
                predicates: Iterable[str] | None = None) -> FiniteStructure:
    """The finite substructure of ``cs`` induced by ``elements``."""
    elements = list(elements)
    preds = [p for p in (predicates or cs.membership) if p in cs.membership]
    tables = {}
    for p in preds:
        arity = STRUCTURE_SIGNATURE.arity(p)
        tables[p] = [t for t in itertools.product(elements, repeat=arity) if cs.membership[p](*t)]
    return FiniteStructure(elements, tables, name=f"{cs.name}[{len(elements)}]")


def zoo_models() -> dict[str, FiniteStructure]:
    """Every finite model in the zoo: A, B and D_k for k = 2..12."""
    models = {"A": build_model("A"), "B": build_model("B")}
    for k in range(2, 13):
        models[f"D{k}"] = build_model_d(k, "extensional")
    return models


def is_isomorphic(s: FiniteStructure, t: FiniteStructure,
                  predicates: Iterable[str] | None = None) -> bool:
    """Brute-force isomorphism test on the given (default: shared) tables."""
    if len(s.domain) != len(t.domain):
        return False
    preds = list(predicates) if predicates is not None else sorted(s.tables.keys() & t.tables.keys())
    if any(len(s.table(p)) != len(t.table(p)) for p in preds):
        return False
    for perm in itertools.permutations(t.domain):
        mapping = dict(zip(s.domain, perm))
        if all({tuple(mapping[e] for e in row) for row in s.table(p)} == t.table(p)
               for p in preds):
            return True
    return False


__all__ = [
    "EXTENSIONAL_LIMIT", "SequenceTriple", "StructureError", "build_model", "build_model_c",
    "build_model_d", "is_isomorphic", "lambda_window", "materialize", "model_c_sequences",
    "relabel", "zoo_models",
]
