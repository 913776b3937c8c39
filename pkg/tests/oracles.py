from fractions import Fraction
from itertools import combinations, product

from nbcfx.model import NbcModel

F = Fraction


def admission_model(threshold=F(1, 2)):
    """The four-feature admission classifier (WE, FA, E, GPA)."""
    return NbcModel(
        ["WE", "FA", "E", "GPA"],
        F("0.7"),
        [
            (F("0.3"), F("0.8")),
            (F("0.2"), F("0.7")),
            (F("0.15"), F("0.4")),
            (F("0.11"), F("0.97")),
        ],
        threshold,
    )


# -- independent oracles ----------------------------------------------------------
# Written against the definitions only; none of them touch the diagram,
# encoder or solver code paths they are used to check.


def oracle_odds(model, x):
    odds = model.prior_pos / (1 - model.prior_pos)
    for (p, q), v in zip(model.cpt, x):
        odds *= (p / q) if v else ((1 - p) / (1 - q))
    return odds


def oracle_posterior(model, x):
    joint_pos = model.prior_pos
    joint_neg = 1 - model.prior_pos
    for (p, q), v in zip(model.cpt, x):
        joint_pos *= p if v else 1 - p
        joint_neg *= q if v else 1 - q
    return joint_pos / (joint_pos + joint_neg)


def oracle_predict(model, x):
    return int(oracle_posterior(model, x) >= model.threshold)


def all_instances(n):
    return list(product((0, 1), repeat=n))


def clause_sat(clause, x):
    return any((x[abs(lit) - 1] == 1) == (lit > 0) for lit in clause)


def cnf_sat(clauses, x):
    return all(clause_sat(c, x) for c in clauses)


def brute_sat(n, clauses, assumptions=()):
    for x in all_instances(n):
        if cnf_sat(clauses, x) and all(clause_sat((a,), x) for a in assumptions):
            return x
    return None


def flip(x, positions):
    x = list(x)
    for i in positions:
        x[i - 1] = 1 - x[i - 1]
    return tuple(x)


def minimal_flip_sets(func, x, allowed=None):
    """All subset-minimal sets S (1-based) with func(x xor S) != func(x)."""
    n = len(x)
    allowed = list(range(1, n + 1)) if allowed is None else sorted(allowed)
    target = 1 - func(x)
    found = []
    for k in range(len(allowed) + 1):
        for s in combinations(allowed, k):
            s = frozenset(s)
            if any(m <= s for m in found):
                continue
            if func(flip(x, s)) == target:
                found.append(s)
    return set(found)


def brute_mcs_sets(n, hard, soft):
    """Minimal sets of soft literals whose removal makes hard + rest satisfiable."""
    sat_rest = lambda rm: brute_sat(n, hard, [l for l in soft if abs(l) not in rm]) is not None
    if brute_sat(n, hard) is None:
        return None
    found = []
    vars_ = sorted(abs(l) for l in soft)
    for k in range(len(vars_) + 1):
        for s in combinations(vars_, k):
            s = frozenset(s)
            if any(m <= s for m in found):
                continue
            if sat_rest(s):
                found.append(s)
    if found == [frozenset()]:
        return set()
    return set(found)
