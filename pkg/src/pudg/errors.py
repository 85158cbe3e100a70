"""Exception types shared across the package."""


class PudgError(Exception):
    """Base class for all package-specific errors."""


class GraphError(PudgError, ValueError):
    """Malformed graph: bad JSON, dangling endpoint, unknown label, duplicate id."""


class AlphabetMismatchError(GraphError):
    """Two graphs were compared over different edge alphabets."""


class QuerySyntaxError(PudgError, ValueError):
    """Query text did not parse. Carries the offset of the failure."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class UnknownLabelError(PudgError, ValueError):
    """An expression mentions an edge label outside the graph's alphabet."""


class NonCoreStarError(PudgError, ValueError):
    """Kleene star applied to a non-atomic path where only atomic stars are allowed."""


class FragmentError(PudgError, ValueError):
    """An expression lies outside the fragment an operation requires."""


class BudgetExceededError(PudgError, RuntimeError):
    """Enumeration would exceed its budget. Results are never silently truncated."""


class UnsupportedModelError(PudgError, ValueError):
    """No enumeration strategy exists for this model class / prior combination."""


class NoCandidateError(PudgError, ValueError):
    """The cosupport of the observation and the prior's support do not intersect."""


class InfeasibleError(PudgError, ValueError):
    """No solution exists (e.g. forbidden weights make a perfect matching impossible)."""
