"""
Exception hierarchy shared by every toolkit module.

Each exception carries the process exit code the CLI reports for it:
1 for usage and validation problems, 2 for budget or convergence limits,
3 for internal invariant breaches.
"""


class BootstrapError(Exception):
    """Base class for all toolkit errors."""

    exit_code: int = 1


class GraphSpecError(BootstrapError):
    """Malformed or unsupported graph specification."""


class AdjacencyFileError(GraphSpecError):
    """Adjacency file is unreadable, non-regular, asymmetric or has duplicates."""


class VertexRangeError(BootstrapError):
    """Vertex index outside [0, N)."""


class ScheduleError(BootstrapError):
    """Malformed threshold schedule or incomparable schedules."""


class BoundDomainError(BootstrapError):
    """Bound evaluated outside its parameter domain."""


class AuditInputError(BootstrapError):
    """Independence audit called with an unusable vertex class."""


class PartitionHypothesisError(BootstrapError):
    """A ball is larger than the partition's class budget."""


class ResourceCapError(BootstrapError):
    """Requested computation exceeds a configured resource cap."""

    exit_code = 2


class ProfileBudgetError(ResourceCapError):
    """Exhaustive sphere-neighbour scan exceeds its work budget."""


class RoundCapExceededError(ResourceCapError):
    """Dynamics did not reach a fixpoint within max_rounds."""


class ConvergenceError(BootstrapError):
    """Estimation stopped before reaching the requested tolerance."""

    exit_code = 2


class InvariantBreachError(BootstrapError):
    """A structural invariant that must always hold was violated."""

    exit_code = 3
