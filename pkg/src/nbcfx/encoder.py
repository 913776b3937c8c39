"""Clausal encoding of decision diagrams and DIMACS CNF/WCNF I/O.

Literals are signed DIMACS integers: variable ``v`` is feature ``v - 1``,
``+v`` means the feature is 1 and ``-v`` that it is 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ParseError
from .odd import Obdd, iter_zero_paths

__all__ = [
    "CnfFormula",
    "Clause",
    "encode_function",
    "encode_instance",
    "path_to_clause",
    "to_dimacs",
    "from_dimacs",
    "to_wcnf",
    "from_wcnf",
    "WcnfFormula",
]

Clause = tuple  # tuple[int, ...] of DIMACS literals


def _check_clause(clause, n_vars):
    clause = tuple(int(lit) for lit in clause)
    seen = set()
    for lit in clause:
        if lit == 0 or abs(lit) > n_vars:
            raise ValueError(f"literal {lit} out of range 1..{n_vars}")
        if -lit in seen:
            raise ValueError(f"clause {clause} contains complementary literals")
        if lit in seen:
            raise ValueError(f"clause {clause} repeats literal {lit}")
        seen.add(lit)
    return clause


@dataclass(frozen=True)
class CnfFormula:
    n_vars: int
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        if self.n_vars < 0:
            raise ValueError("n_vars must be non-negative")
        object.__setattr__(
            self, "clauses", tuple(_check_clause(c, self.n_vars) for c in self.clauses)
        )

    def __len__(self):
        return len(self.clauses)

    def satisfied_by(self, assignment: Mapping[int, int]) -> bool:
        """``assignment`` maps every variable 1..n to 0 or 1."""
        return all(
            any((assignment[abs(lit)] == 1) == (lit > 0) for lit in clause)
            for clause in self.clauses
        )

    def has_empty_clause(self) -> bool:
        return any(not c for c in self.clauses)


def path_to_clause(term) -> Clause:
    """Clause excluding one off-set path: binding ``(i, 1)`` gives ``-(i+1)``."""
    return tuple(-(i + 1) if v else (i + 1) for i, v in term)


def encode_function(d: Obdd) -> CnfFormula:
    """CNF equivalent to ``d``: one clause per root-to-0-sink path.

    No auxiliary variables.  Constant 1 gives no clauses, constant 0 a
    single empty clause.
    """
    return CnfFormula(d.n, tuple(path_to_clause(t) for t in iter_zero_paths(d)))


def encode_instance(x: Sequence[int]) -> list[Clause]:
    return [((i + 1) if v else -(i + 1),) for i, v in enumerate(x)]


# -- DIMACS -------------------------------------------------------------------


def _clause_line(clause, weight=None):
    parts = [str(lit) for lit in clause] + ["0"]
    if weight is not None:
        parts.insert(0, str(weight))
    return " ".join(parts)


def to_dimacs(f: CnfFormula) -> str:
    lines = [f"p cnf {f.n_vars} {len(f.clauses)}"]
    lines.extend(_clause_line(c) for c in f.clauses)
    return "\n".join(lines) + "\n"


def _tokens(text):
    """Yield ``(lineno, fields)`` for non-empty, non-comment lines."""
    for lineno, line in enumerate(text.splitlines(), start=1):
        fields = line.split()
        if not fields or fields[0] == "c":
            continue
        yield lineno, fields


def _parse_header(lineno, fields, kind):
    expected = 5 if kind == "wcnf" else 4
    if fields[0] != "p":
        raise ParseError("expected 'p' header before clauses", line=lineno)
    if len(fields) not in (expected, 4) or fields[1] != kind:
        raise ParseError(f"bad header, expected 'p {kind} ...'", line=lineno)
    try:
        values = [int(v) for v in fields[2:]]
    except ValueError:
        raise ParseError("non-integer in header", line=lineno) from None
    if any(v < 0 for v in values):
        raise ParseError("negative count in header", line=lineno)
    return values


def _parse_literals(lineno, fields, n_vars):
    try:
        ints = [int(v) for v in fields]
    except ValueError:
        raise ParseError("non-integer literal", line=lineno) from None
    if not ints or ints[-1] != 0:
        raise ParseError("clause not terminated by 0", line=lineno)
    lits = ints[:-1]
    if 0 in lits:
        raise ParseError("0 inside a clause", line=lineno)
    for lit in lits:
        if abs(lit) > n_vars:
            raise ParseError(f"literal {lit} exceeds variable count {n_vars}", line=lineno)
    return tuple(lits)


def from_dimacs(text: str) -> CnfFormula:
    header = None
    clauses = []
    for lineno, fields in _tokens(text):
        if header is None:
            n_vars, n_clauses = _parse_header(lineno, fields, "cnf")[:2]
            header = lineno
            continue
        clause = _parse_literals(lineno, fields, n_vars)
        try:
            clauses.append(_check_clause(clause, n_vars))
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None
    if header is None:
        raise ParseError("missing 'p cnf' header", line=1)
    if len(clauses) != n_clauses:
        raise ParseError(f"header declares {n_clauses} clauses, found {len(clauses)}", line=header)
    return CnfFormula(n_vars, tuple(clauses))


@dataclass(frozen=True)
class WcnfFormula:
    """Hard clauses plus weighted soft clauses."""

    n_vars: int
    hard: tuple[Clause, ...]
    soft: tuple[Clause, ...]
    weights: tuple[int, ...]
    top: int


def to_wcnf(
    hard: CnfFormula,
    soft: Iterable[Clause],
    costs: Mapping[int, int] | None = None,
) -> str:
    """Weighted DIMACS: ``top`` on hard clauses, cost (default 1) on soft ones.

    ``costs`` maps variables to positive integer weights.
    """
    soft = [tuple(c) for c in soft]
    costs = costs or {}
    weights = []
    for c in soft:
        w = costs.get(abs(c[0]), 1) if len(c) == 1 else 1
        if isinstance(w, Fraction):
            if w.denominator != 1:
                raise ValueError("WCNF weights must be integers")
            w = w.numerator
        if w < 1:
            raise ValueError("soft weights must be positive")
        weights.append(int(w))
    top = sum(weights) + 1
    lines = [f"p wcnf {hard.n_vars} {len(hard.clauses) + len(soft)} {top}"]
    lines.extend(_clause_line(c, top) for c in hard.clauses)
    lines.extend(_clause_line(c, w) for c, w in zip(soft, weights))
    return "\n".join(lines) + "\n"


def from_wcnf(text: str) -> WcnfFormula:
    header = None
    hard, soft, weights = [], [], []
    for lineno, fields in _tokens(text):
        if header is None:
            values = _parse_header(lineno, fields, "wcnf")
            if len(values) != 3:
                raise ParseError("wcnf header needs a top weight", line=lineno)
            n_vars, n_clauses, top = values
            header = lineno
            continue
        try:
            weight = int(fields[0])
        except ValueError:
            raise ParseError("non-integer weight", line=lineno) from None
        if weight < 1:
            raise ParseError("weights must be positive", line=lineno)
        clause = _parse_literals(lineno, fields[1:], n_vars)
        try:
            clause = _check_clause(clause, n_vars)
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None
        if weight >= top:
            hard.append(clause)
        else:
            soft.append(clause)
            weights.append(weight)
    if header is None:
        raise ParseError("missing 'p wcnf' header", line=1)
    if len(hard) + len(soft) != n_clauses:
        raise ParseError(
            f"header declares {n_clauses} clauses, found {len(hard) + len(soft)}",
            line=header,
        )
    return WcnfFormula(n_vars, tuple(hard), tuple(soft), tuple(weights), top)
