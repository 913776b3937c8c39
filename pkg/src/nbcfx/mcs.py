"""Minimal correction subsets over unit soft clauses.

Every soft clause is a unit literal on its own variable, so a correction
subset is identified with the set of variables whose soft literal gets
dropped.  Enumeration grows a maximal satisfiable subset from a model of
the hard part and blocks the complement with one clause over the soft
literals themselves; no selector variables are needed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .encoder import CnfFormula
from .errors import NoCounterfactualExists
from .sat import Solver

__all__ = [
    "McsProblem",
    "Mcs",
    "McsEnumeration",
    "enumerate_mcs",
    "brute_force_mcs",
    "BRUTE_FORCE_LIMIT",
]

BRUTE_FORCE_LIMIT = 20


@dataclass(frozen=True)
class McsProblem:
    """Hard clauses plus unit soft clauses over distinct variables.

    ``costs`` maps variables to positive rationals (missing = 1).
    ``immutable`` variables have their soft literal hardened.
    """

    hard: CnfFormula
    soft: tuple[int, ...]
    costs: Mapping[int, Fraction] = field(default_factory=dict)
    immutable: frozenset = frozenset()

    def __post_init__(self):
        soft = []
        for c in self.soft:
            lit = c if isinstance(c, int) else _unit(c)
            soft.append(lit)
        object.__setattr__(self, "soft", tuple(soft))
        variables = [abs(lit) for lit in soft]
        if len(set(variables)) != len(variables):
            raise ValueError("soft clauses must be over pairwise distinct variables")
        for v in variables:
            if v < 1 or v > self.hard.n_vars:
                raise ValueError(f"soft variable {v} out of range")
        object.__setattr__(self, "immutable", frozenset(self.immutable))
        if not self.immutable <= set(variables):
            raise ValueError("immutable variables must carry a soft clause")
        costs = {int(v): Fraction(c) for v, c in dict(self.costs).items()}
        if any(c <= 0 for c in costs.values()):
            raise ValueError("costs must be positive")
        object.__setattr__(self, "costs", costs)

    @property
    def soft_vars(self) -> tuple[int, ...]:
        return tuple(abs(lit) for lit in self.soft)

    def cost(self, variables) -> Fraction:
        return sum((self.costs.get(v, Fraction(1)) for v in variables), Fraction(0))

    def hardened(self) -> tuple[list[int], list[int]]:
        """Split soft literals into (hardened units, relaxable literals)."""
        hard_units = [lit for lit in self.soft if abs(lit) in self.immutable]
        relaxable = [lit for lit in self.soft if abs(lit) not in self.immutable]
        return hard_units, relaxable


def _unit(clause):
    clause = tuple(clause)
    if len(clause) != 1:
        raise ValueError(f"soft clause {clause} is not a unit clause")
    return clause[0]


@dataclass(frozen=True)
class Mcs:
    features: frozenset
    cost: Fraction

    def sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.features))


@dataclass
class McsEnumeration:
    mcses: list
    complete: bool
    sat_calls: int = 0
    iterations: int = 0

    def __iter__(self):
        return iter(self.mcses)

    def __len__(self):
        return len(self.mcses)

    def sets(self) -> set:
        return {m.features for m in self.mcses}


def _sort_key(problem: McsProblem, with_cost: bool):
    def key(m: Mcs):
        base = (len(m.features), m.sorted())
        return (m.cost,) + base if with_cost else base

    return key


def _finish(problem, sets):
    mcses = [Mcs(frozenset(s), problem.cost(s)) for s in sets]
    mcses.sort(key=_sort_key(problem, bool(problem.costs)))
    return mcses


def enumerate_mcs(problem: McsProblem, max_count: int | None = None) -> McsEnumeration:
    """All MCSs of ``problem``, sorted by (cost,) cardinality, then variables.

    Raises :class:`NoCounterfactualExists` if the hard part (with immutable
    literals) is unsatisfiable.  With ``max_count`` the result may be
    partial; ``complete`` tells which.
    """
    if max_count is not None and max_count < 1:
        raise ValueError("max_count must be positive")
    hard_units, relaxable = problem.hardened()
    solver = Solver.from_formula(problem.hard)
    for lit in hard_units:
        solver.add_clause([lit])

    found = []
    iterations = 0
    complete = True
    while True:
        iterations += 1
        result = solver.solve()
        if not result.sat:
            if iterations == 1:
                raise NoCounterfactualExists("hard clauses are unsatisfiable")
            break
        model = result.model
        kept = [lit for lit in relaxable if _holds(model, lit)]
        dropped = [lit for lit in relaxable if not _holds(model, lit)]
        if not dropped:
            # hard and soft agree: nothing to correct
            break
        pending = sorted(dropped, key=abs)
        dropped = []
        while pending:
            lit = pending.pop(0)
            grown = solver.solve(kept + [lit])
            if grown.sat:
                kept.append(lit)
                model = grown.model
                still = []
                for other in pending:
                    (kept if _holds(model, other) else still).append(other)
                pending = still
            else:
                dropped.append(lit)
        if not dropped:
            # hard and all soft clauses are jointly satisfiable
            break
        found.append(frozenset(abs(lit) for lit in dropped))
        solver.add_clause(dropped)
        if max_count is not None and len(found) >= max_count:
            complete = not solver.solve().sat
            break

    return McsEnumeration(_finish(problem, found), complete, solver.calls, iterations)


def _holds(model, lit):
    return model[abs(lit)] == (1 if lit > 0 else 0)


def brute_force_mcs(problem: McsProblem) -> list[Mcs]:
    """Reference enumeration over every subset of the relaxable variables."""
    hard_units, relaxable = problem.hardened()
    if len(relaxable) > BRUTE_FORCE_LIMIT:
        raise ValueError(
            f"brute force limited to {BRUTE_FORCE_LIMIT} soft clauses, got {len(relaxable)}"
        )
    base = Solver.from_formula(problem.hard)
    for lit in hard_units:
        base.add_clause([lit])
    if not base.solve().sat:
        raise NoCounterfactualExists("hard clauses are unsatisfiable")

    minimal = []
    for size in range(len(relaxable) + 1):
        for removed in combinations(relaxable, size):
            rm = frozenset(abs(lit) for lit in removed)
            if any(m <= rm for m in minimal):
                continue
            rest = [lit for lit in relaxable if abs(lit) not in rm]
            if base.solve(rest).sat:
                minimal.append(rm)
        if minimal and minimal[0] == frozenset():
            return []
    return _finish(problem, minimal)


def is_correction_set(problem: McsProblem, variables: Sequence[int]) -> bool:
    """True if dropping the soft literals on ``variables`` restores consistency."""
    hard_units, relaxable = problem.hardened()
    solver = Solver.from_formula(problem.hard)
    rm = set(variables)
    return solver.solve(hard_units + [lit for lit in relaxable if abs(lit) not in rm]).sat
