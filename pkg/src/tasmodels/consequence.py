"""Inverse synthesis relations as finitary inference rules, and their closure."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .semantics import FiniteStructure

Token = Hashable
Rule = tuple  # (p_1, ..., p_{m-1}, q): from the premises infer q


@dataclass(frozen=True)
class LogicSystem:
    """A language of tokens with rules ``(premise, ..., conclusion)``.

    A 1-tuple rule ``(q,)`` makes ``q`` derivable from nothing. Premises are
    used as a set: their order and repetition do not matter for firing.
    """

    language: frozenset
    rules: frozenset

    def __init__(self, language: Iterable[Token], rules: Iterable[Sequence[Token]]):
        language = frozenset(language)
        rules = frozenset(tuple(r) for r in rules)
        for rule in rules:
            if not rule:
                raise ValueError("a rule needs at least a conclusion")
            outside = [t for t in rule if t not in language]
            if outside:
                raise ValueError(f"rule {rule} uses tokens outside the language: {outside}")
        object.__setattr__(self, "language", language)
        object.__setattr__(self, "rules", rules)


def rules_from_synthesis(s: FiniteStructure) -> LogicSystem:
    """Rules (y, x, z) for every (z, x, y) in S: from y and x infer z."""
    return LogicSystem(s.domain, ((y, x, z) for (z, x, y) in s.table("S")))


def closure(system: LogicSystem, premises: Iterable[Token]) -> frozenset:
    """Least superset of ``premises`` closed under every rule.

    Each rule keeps a count of premises not yet derived; a token entering
    the worklist decrements the counts of the rules that use it, and a rule
    whose count reaches zero adds its conclusion.
    """
    premises = frozenset(premises)
    outside = premises - system.language
    if outside:
        raise ValueError(f"premises outside the language: {sorted(outside, key=repr)}")
    waiting: dict[Rule, int] = {}
    users: dict[Token, list[Rule]] = defaultdict(list)
    derived = set(premises)
    agenda = list(premises)
    for rule in system.rules:
        needed = set(rule[:-1])
        waiting[rule] = len(needed)
        for token in needed:
            users[token].append(rule)
        if not needed and rule[-1] not in derived:
            derived.add(rule[-1])
            agenda.append(rule[-1])
    while agenda:
        token = agenda.pop()
        for rule in users.get(token, ()):
            waiting[rule] -= 1
            if waiting[rule] == 0 and rule[-1] not in derived:
                derived.add(rule[-1])
                agenda.append(rule[-1])
    return frozenset(derived)
