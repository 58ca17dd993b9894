"""A small CDCL solver: two watched literals, first-UIP learning, no restarts.

Variables are 1..n and literals are signed integers, as in DIMACS. The
default branching rule picks the lowest-numbered unassigned variable and
tries it false first, which makes runs reproducible. Passing a ``seed``
switches to random variable and polarity choices drawn from that seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence


@dataclass
class SolverStats:
    decisions: int = 0
    propagations: int = 0
    conflicts: int = 0
    learned: int = 0

    def as_dict(self) -> dict[str, int]:
        return {
            "decisions": self.decisions,
            "propagations": self.propagations,
            "conflicts": self.conflicts,
            "learned": self.learned,
        }


class Solver:
    def __init__(self, num_vars: int, clauses: Iterable[Sequence[int]] = (),
                 seed: int | None = None):
        self.num_vars = num_vars
        n = num_vars + 1
        self.value = [0] * n          # +1 true, -1 false, 0 unassigned
        self.level = [0] * n
        self.reason: list[list[int] | None] = [None] * n
        self.watches: dict[int, list[list[int]]] = {}
        for v in range(1, n):
            self.watches[v] = []
            self.watches[-v] = []
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.ok = True
        self.stats = SolverStats()
        self._scan = 1
        self._rng = random.Random(seed) if seed is not None else None
        for clause in clauses:
            if not self.add_clause(clause):
                break

    # -- assignment -------------------------------------------------------

    def lit_value(self, lit: int) -> int:
        v = self.value[lit] if lit > 0 else -self.value[-lit]
        return v

    def _enqueue(self, lit: int, reason: list[int] | None) -> None:
        var = abs(lit)
        self.value[var] = 1 if lit > 0 else -1
        self.level[var] = len(self.trail_lim)
        self.reason[var] = reason
        self.trail.append(lit)

    def _backtrack(self, level: int) -> None:
        if len(self.trail_lim) <= level:
            return
        start = self.trail_lim[level]
        for lit in self.trail[start:]:
            var = abs(lit)
            self.value[var] = 0
            self.reason[var] = None
            if var < self._scan:
                self._scan = var
        del self.trail[start:]
        del self.trail_lim[level:]
        self.qhead = len(self.trail)

    # -- clauses ----------------------------------------------------------

    def add_clause(self, lits: Iterable[int]) -> bool:
        """Add a clause at decision level 0; returns False once unsatisfiable."""
        if not self.ok:
            return False
        self._backtrack(0)
        clause: list[int] = []
        seen = set()
        for lit in lits:
            if lit == 0 or abs(lit) > self.num_vars:
                raise ValueError(f"literal {lit} out of range")
            if -lit in seen:
                return True
            if lit in seen:
                continue
            val = self.lit_value(lit)
            if val > 0:
                return True
            seen.add(lit)
            if val == 0:
                clause.append(lit)
        if not clause:
            self.ok = False
            return False
        if len(clause) == 1:
            self._enqueue(clause[0], None)
            if self._propagate() is not None:
                self.ok = False
            return self.ok
        self.watches[-clause[0]].append(clause)
        self.watches[-clause[1]].append(clause)
        return True

    def _propagate(self) -> list[int] | None:
        """Unit propagation; returns a conflicting clause or None."""
        value = self.value
        watches = self.watches
        trail = self.trail
        while self.qhead < len(trail):
            lit = trail[self.qhead]
            self.qhead += 1
            self.stats.propagations += 1
            false_lit = -lit
            watching = watches[lit]
            i = 0
            j = 0
            end = len(watching)
            conflict = None
            while i < end:
                clause = watching[i]
                i += 1
                if clause[0] == false_lit:
                    clause[0], clause[1] = clause[1], false_lit
                first = clause[0]
                fv = value[first] if first > 0 else -value[-first]
                if fv > 0:
                    watching[j] = clause
                    j += 1
                    continue
                for k in range(2, len(clause)):
                    other = clause[k]
                    ov = value[other] if other > 0 else -value[-other]
                    if ov >= 0:
                        clause[1], clause[k] = other, false_lit
                        watches[-other].append(clause)
                        break
                else:
                    watching[j] = clause
                    j += 1
                    if fv < 0:
                        conflict = clause
                        while i < end:
                            watching[j] = watching[i]
                            j += 1
                            i += 1
                    else:
                        self._enqueue(first, clause)
            del watching[j:]
            if conflict is not None:
                self.qhead = len(trail)
                return conflict
        return None

    def _analyze(self, conflict: list[int]) -> tuple[list[int], int]:
        seen = [False] * (self.num_vars + 1)
        learnt = [0]
        counter = 0
        current = len(self.trail_lim)
        index = len(self.trail) - 1
        clause = conflict
        p = 0
        while True:
            for q in clause:
                if q == p:
                    continue
                var = abs(q)
                if not seen[var] and self.level[var] > 0:
                    seen[var] = True
                    if self.level[var] == current:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[abs(self.trail[index])]:
                index -= 1
            p = self.trail[index]
            index -= 1
            seen[abs(p)] = False
            counter -= 1
            if counter == 0:
                break
            clause = self.reason[abs(p)]
        learnt[0] = -p
        if len(learnt) == 1:
            return learnt, 0
        best = max(range(1, len(learnt)), key=lambda k: self.level[abs(learnt[k])])
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, self.level[abs(learnt[1])]

    def _pick(self) -> int:
        if self._rng is not None:
            free = [v for v in range(1, self.num_vars + 1) if self.value[v] == 0]
            if not free:
                return 0
            var = self._rng.choice(free)
            return var if self._rng.random() < 0.5 else -var
        v = self._scan
        while v <= self.num_vars and self.value[v] != 0:
            v += 1
        self._scan = v
        return -v if v <= self.num_vars else 0

    # -- search -----------------------------------------------------------

    def solve(self) -> bool:
        if not self.ok:
            return False
        self._backtrack(0)
        if self._propagate() is not None:
            self.ok = False
            return False
        while True:
            conflict = self._propagate()
            if conflict is not None:
                self.stats.conflicts += 1
                if not self.trail_lim:
                    self.ok = False
                    return False
                learnt, level = self._analyze(conflict)
                self._backtrack(level)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    self.watches[-learnt[0]].append(learnt)
                    self.watches[-learnt[1]].append(learnt)
                    self.stats.learned += 1
                    self._enqueue(learnt[0], learnt)
                continue
            lit = self._pick()
            if lit == 0:
                return True
            self.stats.decisions += 1
            self.trail_lim.append(len(self.trail))
            self._enqueue(lit, None)

    def model(self) -> list[bool]:
        """Truth values indexed by variable (index 0 unused)."""
        return [False] + [self.value[v] > 0 for v in range(1, self.num_vars + 1)]


def solve_clauses(num_vars: int, clauses: Iterable[Sequence[int]],
                  seed: int | None = None) -> tuple[list[bool] | None, SolverStats]:
    solver = Solver(num_vars, clauses, seed)
    sat = solver.solve()
    return (solver.model() if sat else None), solver.stats
