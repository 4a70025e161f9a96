"""Error types raised by the toolkit.

Domain and size violations are ValueError subclasses so that generic
callers can catch them uniformly; estimation and evaluation failures are
RuntimeErrors because the inputs were formally valid.
"""


class DomainError(ValueError):
    """Argument outside the open interval or class a routine is defined on."""


class SizeError(ValueError):
    """Instance too large for an exact algorithm; use the approximate mode."""


class PreconditionError(ValueError):
    """Structural precondition violated (e.g. a chain that is not monotone)."""


class ConstructionError(ValueError):
    """A requested object cannot be realized (e.g. no subset of the target mass)."""


class EstimationError(RuntimeError):
    """Not enough informative data to produce an estimate."""


class EvaluationError(RuntimeError):
    """A numeric evaluation produced a non-finite intermediate."""


class ModelMismatchError(RuntimeError):
    """Observed data violates the assumed model beyond the allowed factor."""
