"""Exception hierarchy shared by all modules."""


class AssurKitError(Exception):
    """Base class for every error raised by the package."""


class ParseError(AssurKitError):
    pass


class ValidationFailed(AssurKitError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class UnknownVertex(AssurKitError):
    pass


class UnknownEdge(AssurKitError):
    pass


class WrongAnchorCount(AssurKitError):
    pass


class WrongDimension(AssurKitError):
    pass


class OrientationMismatch(AssurKitError):
    pass


class GraphMismatch(AssurKitError):
    pass


class NotEquivalent(AssurKitError):
    pass


class NotDDirected(AssurKitError):
    pass


class SizeCapExceeded(AssurKitError):
    pass


class Infeasible(AssurKitError):
    """No orientation realizes the prescribed out-degrees.

    ``witness`` is a set of inner vertices carrying more edges than their
    combined out-degree capacity, when one exists.
    """

    def __init__(self, message, witness=None, reason="overcount"):
        super().__init__(message)
        self.witness = frozenset(witness) if witness is not None else None
        self.reason = reason


class MissingCoordinates(AssurKitError):
    pass


class DecompositionMismatch(AssurKitError):
    pass


class NotIsostatic(AssurKitError):
    pass


class SingularConfiguration(AssurKitError):
    pass


class NotBottomComponent(AssurKitError):
    pass


class CountsViolated(AssurKitError):
    pass


class UnknownInstance(AssurKitError):
    pass


class CrossCheckFailure(AssurKitError):
    """Two routes that must agree did not. Always an implementation bug."""
