"""Exception types shared across the pipeline."""


class NbcfxError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(NbcfxError):
    """Malformed model, instance or clausal file.

    ``field`` names the offending field (model files) and ``line`` the
    1-based line number (DIMACS files) when known.
    """

    def __init__(self, message, field=None, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        elif field is not None:
            message = f"{field}: {message}"
        super().__init__(message)
        self.field = field
        self.line = line


class InstanceShapeError(NbcfxError, ValueError):
    """Instance length or entries do not match the model."""


class NoCounterfactualExists(NbcfxError):
    """The hard part of an MCS problem is unsatisfiable.

    For a classifier this means it is constant in the direction an
    explanation would need to reach, so no set of flips can invert the
    prediction.
    """


class ConsistencyError(NbcfxError, AssertionError):
    """A post-hoc verification of an emitted counterfactual failed."""
