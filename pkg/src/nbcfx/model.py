"""Binary naive Bayes classifiers with exact rational parameters.

All probabilities are :class:`fractions.Fraction` values, so the decision
``P(Y=1 | x) >= T`` is evaluated without any rounding.  The decision is
taken on odds: ``odds(x) >= T / (1 - T)``.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InstanceShapeError, ParseError

__all__ = [
    "NbcModel",
    "posterior_odds",
    "predict",
    "feature_ratio",
    "generate_synthetic",
    "parse_model",
    "serialize_model",
    "parse_instance",
    "format_instance",
    "check_instance",
]


def _open_unit(value: Fraction) -> bool:
    return 0 < value < 1


@dataclass(frozen=True)
class NbcModel:
    """Naive Bayes classifier over ``n`` binary features.

    ``cpt[i]`` is the pair ``(p(X_i=1 | Y=1), p(X_i=1 | Y=0))``.
    """

    feature_names: tuple[str, ...]
    prior_pos: Fraction
    cpt: tuple[tuple[Fraction, Fraction], ...]
    threshold: Fraction = Fraction(1, 2)

    def __post_init__(self):
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(
            self,
            "cpt",
            tuple((Fraction(p), Fraction(q)) for p, q in self.cpt),
        )
        object.__setattr__(self, "prior_pos", Fraction(self.prior_pos))
        object.__setattr__(self, "threshold", Fraction(self.threshold))

        if not self.feature_names:
            raise ValueError("a model needs at least one feature")
        if len(self.cpt) != len(self.feature_names):
            raise ValueError(
                f"{len(self.cpt)} CPT rows for {len(self.feature_names)} features"
            )
        if len(set(self.feature_names)) != len(self.feature_names):
            raise ValueError("feature names must be pairwise distinct")
        if not _open_unit(self.prior_pos):
            raise ValueError("prior_pos must lie strictly between 0 and 1")
        if not _open_unit(self.threshold):
            raise ValueError("threshold must lie strictly between 0 and 1")
        for name, (p, q) in zip(self.feature_names, self.cpt):
            if not (_open_unit(p) and _open_unit(q)):
                raise ValueError(f"CPT entries of {name} must lie in (0, 1)")

    @property
    def n(self) -> int:
        return len(self.feature_names)

    @property
    def prior_odds(self) -> Fraction:
        return self.prior_pos / (1 - self.prior_pos)

    @property
    def threshold_odds(self) -> Fraction:
        return self.threshold / (1 - self.threshold)

    def index(self, name: str) -> int:
        """0-based position of the feature called ``name``."""
        try:
            return self.feature_names.index(name)
        except ValueError:
            raise KeyError(f"unknown feature {name!r}") from None

    def with_threshold(self, threshold) -> "NbcModel":
        return NbcModel(self.feature_names, self.prior_pos, self.cpt, threshold)


def feature_ratio(model: NbcModel, i: int, value: int) -> Fraction:
    """Likelihood ratio ``p(X_i=v | Y=1) / p(X_i=v | Y=0)``."""
    p_pos, p_neg = model.cpt[i]
    if value:
        return p_pos / p_neg
    return (1 - p_pos) / (1 - p_neg)


def check_instance(model_or_n, x: Sequence[int]) -> tuple[int, ...]:
    n = model_or_n if isinstance(model_or_n, int) else model_or_n.n
    x = tuple(x)
    if len(x) != n:
        raise InstanceShapeError(f"instance has {len(x)} values, expected {n}")
    if any(v not in (0, 1) for v in x):
        raise InstanceShapeError(f"instance entries must be 0 or 1: {x}")
    return tuple(int(v) for v in x)


def posterior_odds(model: NbcModel, x: Sequence[int]) -> Fraction:
    """Exact ``P(Y=1 | x) / P(Y=0 | x)``."""
    x = check_instance(model, x)
    odds = model.prior_odds
    for i, v in enumerate(x):
        odds *= feature_ratio(model, i, v)
    return odds


def predict(model: NbcModel, x: Sequence[int]) -> int:
    """Class 1 iff ``P(Y=1 | x) >= threshold``; ties go to class 1."""
    return int(posterior_odds(model, x) >= model.threshold_odds)


def generate_synthetic(n: int, seed: int) -> NbcModel:
    """Random model with every parameter drawn from {1/100, ..., 99/100}.

    Same ``(n, seed)`` gives the same model.  Threshold is 1/2.
    """
    if n < 1:
        raise ValueError(f"feature count must be >= 1, got {n}")
    rng = random.Random(seed)

    def draw():
        return Fraction(rng.randint(1, 99), 100)

    prior = draw()
    cpt = [(draw(), draw()) for _ in range(n)]
    names = [f"X{i + 1}" for i in range(n)]
    return NbcModel(names, prior, cpt, Fraction(1, 2))


# -- file format ------------------------------------------------------------


def _fmt(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _parse_rational(text, field: str) -> Fraction:
    if not isinstance(text, str):
        raise ParseError(f"expected a 'num/den' string, got {text!r}", field=field)
    num, sep, den = text.strip().partition("/")
    try:
        value = Fraction(int(num), int(den)) if sep else Fraction(int(num))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"malformed rational {text!r}", field=field) from None
    return value


def _parse_probability(text, field: str) -> Fraction:
    value = _parse_rational(text, field)
    if not _open_unit(value):
        raise ParseError(f"{text!r} is not strictly between 0 and 1", field=field)
    return value


def serialize_model(model: NbcModel) -> str:
    doc = {
        "n": model.n,
        "feature_names": list(model.feature_names),
        "prior_pos": _fmt(model.prior_pos),
        "threshold": _fmt(model.threshold),
        "cpt": [{"p1_pos": _fmt(p), "p1_neg": _fmt(q)} for p, q in model.cpt],
    }
    return json.dumps(doc, indent=2) + "\n"


def parse_model(text: str) -> NbcModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    for key in ("n", "feature_names", "prior_pos", "threshold", "cpt"):
        if key not in doc:
            raise ParseError("missing field", field=key)

    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(f"must be a positive integer, got {n!r}", field="n")
    names = doc["feature_names"]
    if not isinstance(names, list) or not all(isinstance(s, str) and s for s in names):
        raise ParseError("must be a list of non-empty strings", field="feature_names")
    if len(names) != n:
        raise ParseError(f"{len(names)} names for n={n}", field="feature_names")
    seen = set()
    for name in names:
        if name in seen:
            raise ParseError(f"duplicate name {name!r}", field="feature_names")
        seen.add(name)

    rows = doc["cpt"]
    if not isinstance(rows, list) or len(rows) != n:
        raise ParseError(f"must be a list of {n} rows", field="cpt")
    cpt = []
    for i, row in enumerate(rows):
        if not isinstance(row, dict):
            raise ParseError("row must be an object", field=f"cpt[{i}]")
        try:
            cpt.append(
                (
                    _parse_probability(row["p1_pos"], f"cpt[{i}].p1_pos"),
                    _parse_probability(row["p1_neg"], f"cpt[{i}].p1_neg"),
                )
            )
        except KeyError as exc:
            raise ParseError("missing field", field=f"cpt[{i}].{exc.args[0]}") from None

    prior = _parse_probability(doc["prior_pos"], "prior_pos")
    threshold = _parse_probability(doc["threshold"], "threshold")
    return NbcModel(names, prior, cpt, threshold)


def parse_instance(text: str, n: int | None = None) -> tuple[int, ...]:
    """Parse ``"1,0,1,0"``."""
    parts = [p.strip() for p in text.strip().split(",")]
    if parts == [""]:
        raise ParseError("empty instance")
    if any(p not in ("0", "1") for p in parts):
        raise ParseError(f"instance must be a comma-separated 0/1 list: {text!r}")
    x = tuple(int(p) for p in parts)
    if n is not None and len(x) != n:
        raise ParseError(f"instance has {len(x)} values, model has {n} features")
    return x


def format_instance(x: Sequence[int]) -> str:
    return ",".join(str(v) for v in x)
