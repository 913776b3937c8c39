import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_sat, cnf_sat
from nbcfx.encoder import CnfFormula, encode_function, encode_instance
from nbcfx.model import generate_synthetic, predict
from nbcfx.odd import compile_model
from nbcfx.sat import Solver, solve


def test_simple_sat():
    r = solve(CnfFormula(2, [(1, 2), (-1, -2)]))
    assert r.sat
    x = (r.model[1], r.model[2])
    assert cnf_sat([(1, 2), (-1, -2)], x)


def test_empty_clause_unsat():
    assert not solve(CnfFormula(2, [(1, 2), ()])).sat


def test_no_clauses_sat():
    r = solve(CnfFormula(3, []))
    assert r.sat and r.model == {1: 0, 2: 0, 3: 0}


def test_contradictory_assumptions():
    assert not solve(CnfFormula(2, [(1, 2)]), [1, -1]).sat


def test_assumption_out_of_range():
    with pytest.raises(ValueError):
        solve(CnfFormula(2, []), [3])


def test_admission_instance_unsat(admission):
    f = encode_function(compile_model(admission))
    units = [c[0] for c in encode_instance((1, 1, 1, 1))]
    assert not solve(f, units).sat
    units = [c[0] for c in encode_instance((1, 0, 1, 0))]
    r = solve(f, units)
    assert r.sat and r.model == {1: 1, 2: 0, 3: 1, 4: 0}


def test_branching_prefers_zero():
    r = solve(CnfFormula(3, [(1, 2, 3)]))
    assert r.model == {1: 0, 2: 0, 3: 1}


def test_incremental_clauses():
    s = Solver(2, [(1, 2)])
    assert s.solve().sat
    s.add_clause([-1])
    s.add_clause([-2])
    assert not s.solve().sat
    assert s.calls == 2


def test_pigeonhole_unsat():
    # 3 pigeons, 2 holes: var p*2 + h + 1
    v = lambda p, h: p * 2 + h + 1
    clauses = [(v(p, 0), v(p, 1)) for p in range(3)]
    for h in range(2):
        for a in range(3):
            for b in range(a + 1, 3):
                clauses.append((-v(a, h), -v(b, h)))
    assert not solve(CnfFormula(6, clauses)).sat


clause_st = st.lists(st.integers(1, 6).flatmap(lambda v: st.sampled_from([v, -v])), max_size=4)


@settings(max_examples=200, deadline=None)
@given(
    st.lists(clause_st, max_size=14),
    st.lists(st.integers(1, 6).flatmap(lambda v: st.sampled_from([v, -v])), max_size=3),
)
def test_agrees_with_exhaustive(raw, assumptions):
    clauses = []
    for c in raw:
        lits = list(dict.fromkeys(c))
        if any(-l in lits for l in lits):
            continue
        clauses.append(tuple(lits))
    f = CnfFormula(6, clauses)
    r = solve(f, assumptions)
    expected = brute_sat(6, clauses, assumptions)
    assert r.sat == (expected is not None)
    if r.sat:
        x = tuple(r.model[v] for v in range(1, 7))
        assert cnf_sat(clauses, x)
        assert all(cnf_sat([(a,)], x) for a in assumptions)
        assert solve(f, assumptions) == r  # deterministic


@pytest.mark.parametrize("seed", range(10))
def test_sat_iff_positive_on_synthetic(seed):
    rng = random.Random(seed)
    n = rng.randint(4, 12)
    m = generate_synthetic(n, seed)
    s = Solver.from_formula(encode_function(compile_model(m)))
    for _ in range(10):
        x = [rng.randint(0, 1) for _ in range(n)]
        r = s.solve([c[0] for c in encode_instance(x)])
        assert r.sat == bool(predict(m, x))
