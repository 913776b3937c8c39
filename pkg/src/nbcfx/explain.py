"""Counterfactual explanations of naive Bayes predictions via MCS enumeration.

A negative prediction is explained over the clauses of ``f``; a positive
one over the clauses of ``not f``.  In both cases the instance supplies
the soft unit clauses and every MCS is a minimal set of features whose
flip inverts the prediction.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .encoder import CnfFormula, encode_function, encode_instance, from_dimacs, to_dimacs
from .errors import ConsistencyError, InstanceShapeError
from .mcs import McsProblem, enumerate_mcs
from .model import NbcModel, check_instance, format_instance, predict, serialize_model
from .odd import Obdd, compile_model, evaluate, negate

__all__ = [
    "Counterfactual",
    "ExplanationReport",
    "ExplainOptions",
    "Classifier",
    "apply_flips",
    "explain",
    "explain_diagram",
    "report_to_json",
    "model_hash",
    "CnfCache",
]

logger = logging.getLogger(__name__)

SLOW_INSTANCE_SECONDS = 60.0


def apply_flips(x: Sequence[int], flips: Iterable[int]) -> tuple[int, ...]:
    """Invert the 1-based positions in ``flips``."""
    x = list(x)
    for i in flips:
        if not 1 <= i <= len(x):
            raise InstanceShapeError(f"flip index {i} out of range 1..{len(x)}")
        x[i - 1] = 1 - x[i - 1]
    return tuple(x)


@dataclass(frozen=True)
class Counterfactual:
    flip_set: frozenset  # 1-based feature positions
    resulting_instance: tuple
    cost: Fraction


@dataclass
class ExplanationReport:
    instance: tuple
    prediction: int
    direction: str  # "f" or "not_f"
    counterfactuals: list
    complete: bool
    clause_count: int
    sat_calls: int
    elapsed_ms: float


@dataclass
class ExplainOptions:
    """``immutable`` and ``costs`` are keyed by 1-based feature position."""

    immutable: frozenset = frozenset()
    costs: Mapping[int, Fraction] = field(default_factory=dict)
    max_mcs: int | None = None


def explain_diagram(
    d: Obdd,
    cnf_pos: CnfFormula,
    cnf_neg: CnfFormula,
    x: Sequence[int],
    options: ExplainOptions | None = None,
) -> ExplanationReport:
    """Explain ``evaluate(d, x)`` using the precomputed clauses of f and not f."""
    options = options or ExplainOptions()
    start = time.perf_counter()
    x = check_instance(d.n, x)
    prediction = evaluate(d, x)
    hard, direction = (cnf_pos, "f") if prediction == 0 else (cnf_neg, "not_f")
    problem = McsProblem(
        hard,
        tuple(c[0] for c in encode_instance(x)),
        costs=options.costs,
        immutable=options.immutable,
    )
    result = enumerate_mcs(problem, options.max_mcs)

    counterfactuals = []
    for m in result:
        flipped = apply_flips(x, m.features)
        if evaluate(d, flipped) != 1 - prediction:
            raise ConsistencyError(
                f"flipping {sorted(m.features)} does not invert the prediction"
            )
        counterfactuals.append(Counterfactual(m.features, flipped, m.cost))

    elapsed = time.perf_counter() - start
    if elapsed > SLOW_INSTANCE_SECONDS:
        logger.warning("explaining %s took %.1f s", format_instance(x), elapsed)
    return ExplanationReport(
        instance=x,
        prediction=prediction,
        direction=direction,
        counterfactuals=counterfactuals,
        complete=result.complete,
        clause_count=len(hard.clauses),
        sat_calls=result.sat_calls,
        elapsed_ms=elapsed * 1000.0,
    )


def explain(
    model: NbcModel,
    d: Obdd,
    cnf_pos: CnfFormula,
    cnf_neg: CnfFormula,
    x: Sequence[int],
    options: ExplainOptions | None = None,
) -> ExplanationReport:
    x = check_instance(model, x)
    if d.n != model.n:
        raise InstanceShapeError(f"diagram has {d.n} variables, model {model.n}")
    report = explain_diagram(d, cnf_pos, cnf_neg, x, options)
    if report.prediction != predict(model, x):
        raise ConsistencyError("diagram and model disagree on the instance")
    return report


# -- classifier bundle and disk cache --------------------------------------------


def model_hash(model: NbcModel, ordering: Sequence[int] | None = None) -> str:
    h = hashlib.sha256(serialize_model(model).encode())
    if ordering is not None:
        h.update(",".join(map(str, ordering)).encode())
    return h.hexdigest()


class CnfCache:
    """Stores the clauses of f and not f per model hash as DIMACS files."""

    def __init__(self, directory):
        self.directory = Path(directory)

    def _paths(self, key):
        return self.directory / f"{key}.pos.cnf", self.directory / f"{key}.neg.cnf"

    def load(self, key):
        pos, neg = self._paths(key)
        if pos.exists() and neg.exists():
            return from_dimacs(pos.read_text()), from_dimacs(neg.read_text())
        return None

    def store(self, key, cnf_pos, cnf_neg):
        self.directory.mkdir(parents=True, exist_ok=True)
        for path, f in zip(self._paths(key), (cnf_pos, cnf_neg)):
            tmp = path.with_suffix(".tmp")
            tmp.write_text(to_dimacs(f))
            os.replace(tmp, path)


@dataclass
class Classifier:
    """A model together with its diagram and both clausal encodings.

    Encoding happens once here; the bundle is then reused for any number
    of instances.
    """

    model: NbcModel
    diagram: Obdd
    cnf_pos: CnfFormula
    cnf_neg: CnfFormula

    @classmethod
    def build(cls, model, ordering=None, cache: CnfCache | None = None):
        d = compile_model(model, ordering)
        key = model_hash(model, d.ordering)
        cached = cache.load(key) if cache is not None else None
        if cached is None:
            cnf_pos = encode_function(d)
            cnf_neg = encode_function(negate(d))
            if cache is not None:
                cache.store(key, cnf_pos, cnf_neg)
        else:
            cnf_pos, cnf_neg = cached
        return cls(model, d, cnf_pos, cnf_neg)

    def explain(self, x, options: ExplainOptions | None = None) -> ExplanationReport:
        return explain(self.model, self.diagram, self.cnf_pos, self.cnf_neg, x, options)


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def report_to_dict(
    report: ExplanationReport, feature_names: Sequence[str], timings: bool = False
) -> dict:
    stats = {"clause_count": report.clause_count, "sat_calls": report.sat_calls}
    if timings:
        stats["elapsed_ms"] = round(report.elapsed_ms, 3)
    return {
        "instance": list(report.instance),
        "prediction": report.prediction,
        "direction": report.direction,
        "counterfactuals": [
            {
                "flipped_features": sorted(cf.flip_set),
                "flipped_feature_names": [feature_names[i - 1] for i in sorted(cf.flip_set)],
                "resulting_instance": list(cf.resulting_instance),
                "cost": _fmt_q(cf.cost),
            }
            for cf in report.counterfactuals
        ],
        "stats": stats,
        "complete": report.complete,
    }


def report_to_json(report, feature_names, timings=False) -> str:
    return json.dumps(report_to_dict(report, feature_names, timings), indent=2) + "\n"


def parse_report(text: str) -> dict:
    """Load a report written by :func:`report_to_json` and check its shape."""
    from .errors import ParseError

    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    for key in ("instance", "prediction", "direction", "counterfactuals", "stats", "complete"):
        if key not in doc:
            raise ParseError("missing field", field=key)
    if doc["direction"] not in ("f", "not_f"):
        raise ParseError(f"unknown direction {doc['direction']!r}", field="direction")
    for k, cf in enumerate(doc["counterfactuals"]):
        for key in ("flipped_feature_names", "resulting_instance", "cost"):
            if key not in cf:
                raise ParseError("missing field", field=f"counterfactuals[{k}].{key}")
    return doc
