"""Reduced ordered binary decision diagrams compiled from naive Bayes models.

A diagram is an append-only arena of nodes.  Node ``0`` is the 0-sink and
node ``1`` the 1-sink; every other node is a triple ``(level, lo, hi)``
where ``level`` is a position in :attr:`Obdd.ordering`.  Sinks sit at
level ``n``.  A uniqueness table keeps the arena reduced, so for a fixed
ordering two diagrams are structurally equal iff they compute the same
function.
"""
from __future__ import annotations

from bisect import bisect_left
from typing import Iterator, Sequence

from .model import NbcModel, check_instance, feature_ratio

__all__ = [
    "Obdd",
    "PathTerm",
    "compile_model",
    "constant",
    "evaluate",
    "negate",
    "count_models",
    "count_zero_paths",
    "zero_paths",
    "iter_zero_paths",
    "to_dot",
]

FALSE = 0
TRUE = 1

# One root-to-0-sink path: ((feature index, value), ...) in ordering order.
PathTerm = tuple


class Obdd:
    """Immutable reduced OBDD.

    Use :func:`compile_model` or :func:`constant` to build one.
    """

    __slots__ = ("ordering", "nodes", "root")

    def __init__(self, ordering: Sequence[int], nodes, root: int):
        self.ordering = tuple(ordering)
        self.nodes = tuple(nodes)
        self.root = root

    @property
    def n(self) -> int:
        return len(self.ordering)

    def level(self, u: int) -> int:
        return self.nodes[u][0]

    def is_terminal(self, u: int) -> bool:
        return u <= TRUE

    def reachable(self) -> list[int]:
        """Reachable node ids in lo-first depth-first preorder."""
        seen = set()
        order = []
        stack = [self.root]
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            order.append(u)
            if u > TRUE:
                _, lo, hi = self.nodes[u]
                stack.append(hi)
                stack.append(lo)
        return order

    def size(self) -> int:
        """Reachable nodes, sinks included."""
        return len(self.reachable())

    def canonical(self) -> tuple:
        """Arena-independent description of the reachable graph."""
        order = self.reachable()
        relabel = {u: k for k, u in enumerate(order)}
        rows = []
        for u in order:
            if u <= TRUE:
                rows.append(("T", u))
            else:
                level, lo, hi = self.nodes[u]
                rows.append((level, relabel[lo], relabel[hi]))
        return self.ordering, tuple(rows)

    def __eq__(self, other):
        if not isinstance(other, Obdd):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def __repr__(self):
        return f"Obdd(n={self.n}, size={self.size()})"


class _Builder:
    def __init__(self, n: int):
        self.n = n
        self.nodes = [(n, FALSE, FALSE), (n, TRUE, TRUE)]
        self.unique = {}

    def make(self, level: int, lo: int, hi: int) -> int:
        if lo == hi:
            return lo
        key = (level, lo, hi)
        u = self.unique.get(key)
        if u is None:
            u = len(self.nodes)
            self.nodes.append(key)
            self.unique[key] = u
        return u


def constant(value: int, n: int, ordering: Sequence[int] | None = None) -> Obdd:
    """Diagram of the constant function ``value`` over ``n`` variables."""
    if ordering is None:
        ordering = range(n)
    b = _Builder(n)
    return Obdd(ordering, b.nodes, TRUE if value else FALSE)


def _check_ordering(ordering, n):
    ordering = tuple(ordering)
    if sorted(ordering) != list(range(n)):
        raise ValueError(f"ordering {ordering} is not a permutation of 0..{n - 1}")
    return ordering


def _suffix_tables(model: NbcModel, ordering):
    """Per level, the sorted distinct suffix products scaled to integers.

    At level ``l`` every product of ratios over the levels ``l..n-1`` is
    ``v / scale[l]`` for an integer ``v`` in ``tables[l]``.
    """
    n = len(ordering)
    tables = [None] * (n + 1)
    scales = [1] * (n + 1)
    tables[n] = [1]
    current = {1}
    for level in range(n - 1, -1, -1):
        i = ordering[level]
        r0 = feature_ratio(model, i, 0)
        r1 = feature_ratio(model, i, 1)
        k0 = r0.numerator * r1.denominator
        k1 = r1.numerator * r0.denominator
        current = {k0 * s for s in current} | {k1 * s for s in current}
        scales[level] = scales[level + 1] * r0.denominator * r1.denominator
        tables[level] = sorted(current)
    return tables, scales


def compile_model(model: NbcModel, ordering: Sequence[int] | None = None) -> Obdd:
    """Compile ``model``'s decision function into a reduced OBDD.

    Top-down construction over the running odds ``A``.  At level ``l`` the
    sub-function only depends on which suffix products ``s`` satisfy
    ``A * s >= tau``, i.e. on the position of ``A`` among the cut points
    ``tau / s``.  That position is the memo key, so equal sub-functions
    reached with different odds are built once.

    Suffix sets can grow as ``2**(n - l)``; this bounds the practical size
    to a few dozen features.
    """
    n = model.n
    ordering = _check_ordering(range(n) if ordering is None else ordering, n)
    tau = model.threshold_odds
    tables, scales = _suffix_tables(model, ordering)
    ratios = [
        (feature_ratio(model, i, 0), feature_ratio(model, i, 1)) for i in ordering
    ]
    b = _Builder(n)
    memo = {}

    def key(level, odds):
        # scaled suffix v qualifies iff v / scale * odds >= tau
        bound = tau * scales[level] / odds
        cut = -(-bound.numerator // bound.denominator)
        return bisect_left(tables[level], cut)

    def build(level, odds):
        k = (level, key(level, odds))
        u = memo.get(k)
        if u is not None:
            return u
        if level == n:
            u = TRUE if odds >= tau else FALSE
        else:
            r0, r1 = ratios[level]
            lo = build(level + 1, odds * r0)
            hi = build(level + 1, odds * r1)
            u = b.make(level, lo, hi)
        memo[k] = u
        return u

    root = build(0, model.prior_odds)
    return Obdd(ordering, b.nodes, root)


def evaluate(d: Obdd, x: Sequence[int]) -> int:
    """Value of the diagram on the total instance ``x``."""
    x = check_instance(d.n, x)
    u = d.root
    nodes = d.nodes
    ordering = d.ordering
    while u > TRUE:
        level, lo, hi = nodes[u]
        u = hi if x[ordering[level]] else lo
    return u


def negate(d: Obdd) -> Obdd:
    """Diagram of ``1 - f``: the two sinks trade places."""
    swap = {FALSE: TRUE, TRUE: FALSE}
    nodes = [d.nodes[0], d.nodes[1]]
    for level, lo, hi in d.nodes[2:]:
        nodes.append((level, swap.get(lo, lo), swap.get(hi, hi)))
    return Obdd(d.ordering, nodes, swap.get(d.root, d.root))


def count_models(d: Obdd) -> int:
    """Number of total assignments mapped to 1."""
    counts = {FALSE: 0, TRUE: 1}
    for u in reversed(_topological(d)):
        if u <= TRUE:
            continue
        level, lo, hi = d.nodes[u]
        counts[u] = (counts[lo] << (d.level(lo) - level - 1)) + (
            counts[hi] << (d.level(hi) - level - 1)
        )
    return counts[d.root] << d.level(d.root)


def count_zero_paths(d: Obdd) -> int:
    """Number of root-to-0-sink paths, without enumerating them."""
    counts = {FALSE: 1, TRUE: 0}
    for u in reversed(_topological(d)):
        if u > TRUE:
            _, lo, hi = d.nodes[u]
            counts[u] = counts[lo] + counts[hi]
    return counts[d.root]


def _topological(d: Obdd) -> list[int]:
    # parents before children: sorting by level is enough in an ordered diagram
    return sorted(d.reachable(), key=d.level)


def iter_zero_paths(d: Obdd) -> Iterator[PathTerm]:
    """Yield every root-to-0-sink path, lo edges explored first."""
    nodes = d.nodes
    ordering = d.ordering
    path = []
    # (node, path length before the edge into node, binding of that edge)
    stack = [(d.root, 0, None)]
    while stack:
        u, depth, binding = stack.pop()
        del path[depth:]
        if binding is not None:
            path.append(binding)
        if u == FALSE:
            yield tuple(path)
        elif u != TRUE:
            level, lo, hi = nodes[u]
            i = ordering[level]
            here = len(path)
            stack.append((hi, here, (i, 1)))
            stack.append((lo, here, (i, 0)))


def zero_paths(d: Obdd) -> list[PathTerm]:
    return list(iter_zero_paths(d))


def to_dot(d: Obdd, names: Sequence[str] | None = None) -> str:
    """Graphviz source; solid edges are hi (value 1), dashed edges lo."""
    if names is None:
        names = [f"x{i + 1}" for i in range(d.n)]
    lines = ["digraph obdd {"]
    for u in d.reachable():
        if u <= TRUE:
            lines.append(f'  n{u} [shape=box, label="{u}"];')
        else:
            level = d.level(u)
            lines.append(f'  n{u} [label="{names[d.ordering[level]]}"];')
    for u in d.reachable():
        if u > TRUE:
            _, lo, hi = d.nodes[u]
            lines.append(f"  n{u} -> n{lo} [style=dashed];")
            lines.append(f"  n{u} -> n{hi};")
    lines.append("}")
    return "\n".join(lines) + "\n"
