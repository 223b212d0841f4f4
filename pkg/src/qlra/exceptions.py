"""Exception hierarchy. Every error carries a stable ``code`` used by the CLI."""


class QLRAError(ValueError):
    code = "QLRA_ERROR"


class NotStochastic(QLRAError):
    code = "NOT_STOCHASTIC"


class NotDoublyStochastic(QLRAError):
    code = "NOT_DOUBLY_STOCHASTIC"


class NotStrictlyPositive(QLRAError):
    code = "NOT_STRICTLY_POSITIVE"


class InvalidProbabilities(QLRAError):
    code = "INVALID_PROBABILITIES"


class DegenerateProduct(QLRAError):
    code = "DEGENERATE_PRODUCT"


class NotTrigonometric(QLRAError):
    code = "NOT_TRIGONOMETRIC"


class ExpansionMismatch(QLRAError):
    code = "EXPANSION_MISMATCH"


class GenerationExhausted(QLRAError):
    code = "GENERATION_EXHAUSTED"


class MalformedInput(QLRAError):
    code = "MALFORMED_INPUT"

    def __init__(self, message, pointer=""):
        super().__init__(message)
        self.pointer = pointer


class TheoremViolation(QLRAError):
    """Equivalence verdict disagrees with the symmetry verdict.

    The offending :class:`~qlra.equivalence.EquivalenceReport` is attached
    as ``report``.
    """

    code = "THEOREM_VIOLATION"

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
