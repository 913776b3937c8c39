"""Counterfactual explanations for binary naive Bayes classifiers.

Pipeline: compile the classifier to a reduced OBDD, encode the diagram as
CNF over the feature variables, and enumerate minimal correction subsets
of the CNF against the unit clauses of an instance.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConsistencyError,
    InstanceShapeError,
    NoCounterfactualExists,
    ParseError,
)
from .model import (  # noqa: E402
    NbcModel,
    generate_synthetic,
    parse_model,
    posterior_odds,
    predict,
    serialize_model,
)
from .odd import Obdd, compile_model, count_models, evaluate, negate, zero_paths  # noqa: E402
from .encoder import CnfFormula, encode_function, encode_instance, from_dimacs, to_dimacs  # noqa: E402
from .sat import SatResult, Solver, solve  # noqa: E402
from .mcs import Mcs, McsProblem, brute_force_mcs, enumerate_mcs  # noqa: E402
from .explain import (  # noqa: E402
    Classifier,
    Counterfactual,
    ExplainOptions,
    ExplanationReport,
    apply_flips,
    explain,
)

__all__ = [
    "ConsistencyError",
    "InstanceShapeError",
    "NoCounterfactualExists",
    "ParseError",
    "NbcModel",
    "generate_synthetic",
    "parse_model",
    "posterior_odds",
    "predict",
    "serialize_model",
    "Obdd",
    "compile_model",
    "count_models",
    "evaluate",
    "negate",
    "zero_paths",
    "CnfFormula",
    "encode_function",
    "encode_instance",
    "from_dimacs",
    "to_dimacs",
    "SatResult",
    "Solver",
    "solve",
    "Mcs",
    "McsProblem",
    "brute_force_mcs",
    "enumerate_mcs",
    "Classifier",
    "Counterfactual",
    "ExplainOptions",
    "ExplanationReport",
    "apply_flips",
    "explain",
]
