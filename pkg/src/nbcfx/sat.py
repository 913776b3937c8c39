"""Complete DPLL solver with assumptions.

The clause sets produced from decision diagrams have few variables (tens)
and many long clauses (up to ~10^5), so unit propagation is done over the
whole clause matrix at once: one round is two matrix-vector products that
count, per clause, true literals and unassigned literals.

Branching is fixed for reproducibility: after unit propagation, the
lowest-index unassigned variable is tried with value 0 first.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .encoder import CnfFormula

__all__ = ["SatResult", "Solver", "solve"]


@dataclass(frozen=True)
class SatResult:
    """``model`` maps each variable 1..n to 0/1 when satisfiable, else None."""

    sat: bool
    model: dict | None = None

    def __bool__(self):
        return self.sat


UNSAT = SatResult(False)


class Solver:
    """Clause database that can be solved repeatedly under assumptions.

    Clauses may be added between calls; no search state carries over.
    Not thread-safe.
    """

    def __init__(self, n_vars: int, clauses: Iterable[Sequence[int]] = ()):
        self.n_vars = n_vars
        self.calls = 0
        self._rows = []
        self._pending = []
        self._pos = np.zeros((0, n_vars), dtype=np.float32)
        self._neg = np.zeros((0, n_vars), dtype=np.float32)
        for c in clauses:
            self.add_clause(c)

    @classmethod
    def from_formula(cls, f: CnfFormula) -> "Solver":
        return cls(f.n_vars, f.clauses)

    def __len__(self):
        return len(self._pos) + len(self._pending)

    def add_clause(self, clause: Sequence[int]):
        lits = set()
        for lit in clause:
            if lit == 0 or abs(lit) > self.n_vars:
                raise ValueError(f"literal {lit} out of range 1..{self.n_vars}")
            if -lit in lits:
                return  # tautology
            lits.add(lit)
        self._pending.append(lits)

    def _matrices(self):
        if self._pending:
            pos = np.zeros((len(self._pending), self.n_vars), dtype=np.float32)
            neg = np.zeros_like(pos)
            for r, lits in enumerate(self._pending):
                for lit in lits:
                    if lit > 0:
                        pos[r, lit - 1] = 1
                    else:
                        neg[r, -lit - 1] = 1
            self._pos = np.vstack([self._pos, pos])
            self._neg = np.vstack([self._neg, neg])
            self._pending = []
        return self._pos, self._neg

    def solve(self, assumptions: Sequence[int] = ()) -> SatResult:
        self.calls += 1
        n = self.n_vars
        pos, neg = self._matrices()
        # 1 true, -1 false, 0 unassigned; index = variable - 1
        value = np.zeros(n, dtype=np.int8)
        for lit in assumptions:
            if lit == 0 or abs(lit) > n:
                raise ValueError(f"assumption {lit} out of range 1..{n}")
            want = 1 if lit > 0 else -1
            if value[abs(lit) - 1] == -want:
                return UNSAT
            value[abs(lit) - 1] = want

        if not _propagate(pos, neg, value):
            return UNSAT

        # saved assignments before each open decision: (snapshot, var, flipped)
        decisions = []
        while True:
            free = np.flatnonzero(value == 0)
            if free.size == 0:
                return SatResult(True, {v + 1: int(value[v] > 0) for v in range(n)})
            var = int(free[0])
            decisions.append((value.copy(), var, False))
            value[var] = -1
            while not _propagate(pos, neg, value):
                while decisions and decisions[-1][2]:
                    decisions.pop()
                if not decisions:
                    return UNSAT
                saved, var, _ = decisions.pop()
                decisions.append((saved, var, True))
                value = saved.copy()
                value[var] = 1


def _propagate(pos, neg, value) -> bool:
    """Unit propagation in place; False on conflict."""
    if pos.shape[0] == 0:
        return True
    while True:
        t = (value == 1).astype(np.float32)
        f = (value == -1).astype(np.float32)
        u = (value == 0).astype(np.float32)
        satisfied = (pos @ t + neg @ f) > 0
        free = pos @ u + neg @ u
        open_rows = ~satisfied
        if np.any(open_rows & (free == 0)):
            return False
        unit_rows = np.flatnonzero(open_rows & (free == 1))
        if unit_rows.size == 0:
            return True
        # the single unassigned literal of each unit row
        p = pos[unit_rows] * u
        q = neg[unit_rows] * u
        forced_true = p.any(axis=0)
        forced_false = q.any(axis=0)
        if np.any(forced_true & forced_false):
            return False
        value[forced_true] = 1
        value[forced_false] = -1


def solve(f: CnfFormula, assumptions: Sequence[int] = ()) -> SatResult:
    """Decide ``f`` under the given assumption literals."""
    return Solver.from_formula(f).solve(assumptions)
