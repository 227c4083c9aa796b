"""Exception hierarchy shared by the core modules, the service, and the CLI."""


class TropdegError(Exception):
    """Base class for all domain errors (CLI exit code 2)."""


class ParseError(TropdegError):
    """Malformed input file, schema violation, or bad shorthand (CLI exit code 3)."""


class LoopRejected(TropdegError):
    pass


class Disconnected(TropdegError):
    pass


class DuplicateId(TropdegError):
    pass


class UnknownVertex(TropdegError):
    pass


class UnknownEdge(TropdegError):
    pass


class InvalidChain(TropdegError):
    pass


class NotEquivalent(TropdegError):
    pass


class NoNonnegativeTwist(TropdegError):
    pass


class InvalidSlope(TropdegError):
    pass


class IrrationalInput(TropdegError):
    pass


class NotEdgeReduced(TropdegError):
    pass


class PreconditionFailed(TropdegError):
    pass


class InvalidSpec(TropdegError):
    pass


class WitnessUnverified(TropdegError):
    pass


class BudgetExceeded(TropdegError):
    pass


class NotMultitree(TropdegError):
    pass


class ConditionIIViolated(TropdegError):
    """The concentrated family is not linked by edge-side twists; indicates a bug."""


class InvalidFiltration(TropdegError):
    pass


class InconsistentProfile(TropdegError):
    pass


class ProfileViolatesI(TropdegError):
    pass


class InternalInvariantError(TropdegError):
    """A theorem-backed postcondition failed at runtime; always a bug, never user error."""
