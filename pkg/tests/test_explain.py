import json
import random
from fractions import Fraction as F

import pytest

from oracles import minimal_flip_sets, oracle_odds, oracle_predict
from nbcfx.encoder import CnfFormula, encode_function
from nbcfx.errors import ConsistencyError, InstanceShapeError, NoCounterfactualExists
from nbcfx.explain import (
    Classifier,
    CnfCache,
    ExplainOptions,
    apply_flips,
    explain,
    explain_diagram,
    parse_report,
    report_to_json,
)
from nbcfx.model import generate_synthetic
from nbcfx.odd import compile_model, evaluate, negate


def flip_sets(report):
    return [tuple(sorted(cf.flip_set)) for cf in report.counterfactuals]


def test_apply_flips():
    assert apply_flips((1, 1, 1, 1), {4}) == (1, 1, 1, 0)
    assert apply_flips((1, 1, 1, 1), set()) == (1, 1, 1, 1)
    assert apply_flips((1, 0, 1, 0), {1, 2}) == (0, 1, 1, 0)
    with pytest.raises(InstanceShapeError):
        apply_flips((1, 0), {3})


def test_admission_negative_instance(admission):
    clf = Classifier.build(admission)
    report = clf.explain((1, 1, 1, 1))
    assert report.prediction == 0 and report.direction == "f"
    assert flip_sets(report) == [(4,), (1, 2, 3)]
    assert minimal_flip_sets(lambda x: oracle_predict(admission, x), (1, 1, 1, 1)) == {
        frozenset({4}),
        frozenset({1, 2, 3}),
    }
    # flipping GPA alone pushes the odds to about 2.78
    assert float(oracle_odds(admission, (1, 1, 1, 0))) == pytest.approx(2.78, abs=0.01)
    assert report.counterfactuals[0].resulting_instance == (1, 1, 1, 0)
    assert report.complete
    assert report.clause_count == 3


def test_admission_positive_instance(admission):
    clf = Classifier.build(admission)
    report = clf.explain((1, 0, 1, 0))
    assert report.prediction == 1 and report.direction == "not_f"
    assert flip_sets(report) == [(4,)]
    assert minimal_flip_sets(lambda x: oracle_predict(admission, x), (1, 0, 1, 0)) == {
        frozenset({4})
    }
    assert float(oracle_odds(admission, (1, 0, 1, 1))) == pytest.approx(0.0992, abs=1e-4)


def test_constant_positive_has_no_inversion(admission):
    clf = Classifier.build(admission.with_threshold(F(1, 10**6)))
    assert clf.cnf_pos.clauses == ()
    with pytest.raises(NoCounterfactualExists):
        clf.explain((0, 1, 0, 1))


def test_constant_negative_has_no_inversion(admission):
    clf = Classifier.build(admission.with_threshold(F(10**6 - 1, 10**6)))
    assert clf.diagram.root == 0
    with pytest.raises(NoCounterfactualExists):
        clf.explain((0, 0, 0, 0))


def test_immutable_and_costs(admission):
    clf = Classifier.build(admission)
    r = clf.explain((1, 1, 1, 1), ExplainOptions(immutable=frozenset({4})))
    assert flip_sets(r) == [(1, 2, 3)]
    r = clf.explain((1, 1, 1, 1), ExplainOptions(costs={4: F(7, 2)}))
    assert flip_sets(r) == [(1, 2, 3), (4,)]
    assert [cf.cost for cf in r.counterfactuals] == [3, F(7, 2)]


def test_verification_failure_is_reported(admission):
    d = compile_model(admission)
    # clauses whose only correction is flipping WE, which leaves f(x) = 0
    wrong = CnfFormula(4, [(-1,)])
    with pytest.raises(ConsistencyError):
        explain_diagram(d, wrong, wrong, (1, 1, 1, 1))


def test_model_diagram_mismatch(admission):
    other = compile_model(admission.with_threshold(F(1, 10**6)))
    with pytest.raises((ConsistencyError, NoCounterfactualExists)):
        explain(admission, other, encode_function(other), encode_function(negate(other)), (1, 1, 1, 1))


def test_report_json_round_trip(admission):
    clf = Classifier.build(admission)
    report = clf.explain((1, 1, 1, 1))
    text = report_to_json(report, admission.feature_names)
    doc = parse_report(text)
    assert doc["prediction"] == 0
    assert [cf["flipped_feature_names"] for cf in doc["counterfactuals"]] == [
        ["GPA"],
        ["WE", "FA", "E"],
    ]
    assert "elapsed_ms" not in doc["stats"]
    assert json.dumps(doc, indent=2) + "\n" == text
    timed = json.loads(report_to_json(report, admission.feature_names, timings=True))
    assert timed["stats"]["elapsed_ms"] >= 0


def test_cache_reuses_clauses(tmp_path, admission):
    cache = CnfCache(tmp_path)
    first = Classifier.build(admission, cache=cache)
    files = sorted(p.name for p in tmp_path.iterdir())
    assert len(files) == 2
    second = Classifier.build(admission, cache=cache)
    assert second.cnf_pos == first.cnf_pos and second.cnf_neg == first.cnf_neg


@pytest.mark.parametrize("seed", range(20))
def test_matches_brute_force_flip_search(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 9)
    m = generate_synthetic(n, 900 + seed)
    clf = Classifier.build(m)
    for _ in range(3):
        x = tuple(rng.randint(0, 1) for _ in range(n))
        expected = minimal_flip_sets(lambda y: oracle_predict(m, y), x)
        if not expected:
            with pytest.raises(NoCounterfactualExists):
                clf.explain(x)
            continue
        report = clf.explain(x)
        assert {cf.flip_set for cf in report.counterfactuals} == expected
        for cf in report.counterfactuals:
            assert oracle_predict(m, cf.resulting_instance) == 1 - oracle_predict(m, x)


@pytest.mark.parametrize("seed", range(8))
def test_direction_symmetry(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 8)
    d = compile_model(generate_synthetic(n, 40 + seed))
    nd = negate(d)
    pos, neg = encode_function(d), encode_function(nd)
    x = tuple(rng.randint(0, 1) for _ in range(n))
    try:
        a = explain_diagram(d, pos, neg, x)
    except NoCounterfactualExists:
        with pytest.raises(NoCounterfactualExists):
            explain_diagram(nd, neg, pos, x)
        return
    b = explain_diagram(nd, neg, pos, x)
    assert b.prediction == 1 - a.prediction
    assert flip_sets(a) == flip_sets(b)
    assert [evaluate(nd, cf.resulting_instance) for cf in b.counterfactuals] == [
        a.prediction
    ] * len(b.counterfactuals)
