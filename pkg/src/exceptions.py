"""Domain exceptions.

Configuration problems keep using the built-in ``FileNotFoundError`` and
``ValueError``; the classes below cover failures inside the network model
and the solvers.
"""

from typing import Iterable


class OEDError(Exception):
    """Base class for entanglement-distribution errors."""


class PathInfeasibleError(OEDError, ValueError):
    """A path cannot be reserved on the current residual graph."""


class FlowConsistencyError(OEDError, RuntimeError):
    """A flow assignment violates conservation and cannot be traced."""


class OracleLimitError(OEDError, ValueError):
    """An instance is too large for exhaustive enumeration."""


class UnknownStationError(OEDError, ValueError):
    """One or more station names could not be resolved.

    Attributes:
        names: The unresolved names, in the order they were seen.
    """

    def __init__(self, names: Iterable[str]):
        self.names = list(names)
        super().__init__(f"Unknown station name(s): {', '.join(self.names)}")
