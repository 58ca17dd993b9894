"""Reading and writing structures in the line-oriented ``.dlm`` format.

Example::

    # Model A
    name: model-A
    domain: 1 2 3
    T: (1) (2) (3)
    A: (1,2) (2,3) (3,1)
    S: (1,3,2) (2,1,3) (3,2,1)
    N: (1) (2) (3)

Labels made only of digits (with an optional minus sign) are read as
integers, anything else as strings. ``#`` starts a comment. A declared ``N``
line is kept for cross-checking against the derived N; it is never trusted
by the checker.
"""

from __future__ import annotations

import logging
import re
from typing import Hashable, Iterable

from .semantics import STRUCTURE_SIGNATURE, FiniteStructure, StructureError

log = logging.getLogger(__name__)

TABLE_ORDER = ("T", "Anti", "A", "S", "D", "P", "N")

_LABEL = re.compile(r"[^\s(),#:]+")
_TUPLE = re.compile(r"\(([^()]*)\)")
_INT = re.compile(r"-?\d+")


class DlmError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def _label(text: str, line: int) -> Hashable:
    text = text.strip()
    if not _LABEL.fullmatch(text):
        raise DlmError(f"bad element label {text!r}", line)
    return int(text) if _INT.fullmatch(text) else text


def _tuples(body: str, line: int) -> list[tuple]:
    rows = []
    pos = 0
    for m in _TUPLE.finditer(body):
        if body[pos:m.start()].strip():
            raise DlmError(f"unexpected text {body[pos:m.start()].strip()!r}", line)
        rows.append(tuple(_label(part, line) for part in m.group(1).split(",")))
        pos = m.end()
    if body[pos:].strip():
        raise DlmError(f"unexpected text {body[pos:].strip()!r}", line)
    return rows


def loads(text: str) -> FiniteStructure:
    """Parse ``.dlm`` text into a structure; raises :class:`DlmError`."""
    name = ""
    domain: list | None = None
    tables: dict[str, list[tuple]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, body = line.partition(":")
        key = key.strip()
        if not sep:
            raise DlmError("expected 'name: ...'", lineno)
        if key == "name":
            name = body.strip()
            continue
        if key == "domain":
            if domain is not None:
                raise DlmError("second domain line", lineno)
            domain = [_label(t, lineno) for t in body.split()]
            continue
        if domain is None:
            raise DlmError("relation before the domain line", lineno)
        if key not in STRUCTURE_SIGNATURE:
            raise DlmError(f"unknown relation {key!r}", lineno)
        if key in tables:
            raise DlmError(f"relation {key} given twice", lineno)
        rows = _tuples(body, lineno)
        arity = STRUCTURE_SIGNATURE.arity(key)
        for row in rows:
            if len(row) != arity:
                raise DlmError(f"{key} expects {arity}-tuples, got {row}", lineno)
        if len(set(rows)) != len(rows):
            log.warning("line %d: duplicate %s tuples collapsed", lineno, key)
        tables[key] = rows
    if domain is None:
        raise DlmError("missing domain line")
    try:
        return FiniteStructure(domain, tables, name=name)
    except StructureError as exc:
        raise DlmError(str(exc)) from None


def load(path) -> FiniteStructure:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def dumps(s: FiniteStructure, comment: str | None = None) -> str:
    """Canonical text: tables in a fixed order, tuples in domain order."""
    position = {e: i for i, e in enumerate(s.domain)}
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    if s.name:
        lines.append(f"name: {s.name}")
    lines.append("domain: " + " ".join(str(e) for e in s.domain))
    for pred in _ordered(s.tables):
        rows = sorted(s.tables[pred], key=lambda row: [position[e] for e in row])
        cells = " ".join("(" + ",".join(str(e) for e in row) + ")" for row in rows)
        if pred == "N":
            lines.append("# declared N, cross-checked against the derived N")
        lines.append(f"{pred}: {cells}".rstrip())
    return "\n".join(lines) + "\n"


def dump(s: FiniteStructure, path, comment: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(s, comment))


def _ordered(names: Iterable[str]) -> list[str]:
    names = set(names)
    return [p for p in TABLE_ORDER if p in names] + sorted(names - set(TABLE_ORDER))
