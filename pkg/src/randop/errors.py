"""Exception hierarchy. Every error raised by the package derives from RandopError."""


class RandopError(Exception):
    """Base class for all package errors."""


# probability core
class EmptySpace(RandopError):
    pass


class DuplicateAtom(RandopError):
    pass


class NonpositiveMass(RandopError):
    pass


class MassSumNotOne(RandopError):
    def __init__(self, deficit):
        self.deficit = deficit
        super().__init__(f"atom masses must sum to 1 (deficit {deficit})")


class ForeignEvent(RandopError):
    pass


class OutOfRange(RandopError):
    pass


class NullConditioningEvent(RandopError):
    pass


# spaces / vectors
class SpaceMismatch(RandopError):
    pass


class IndexOutOfRange(RandopError):
    pass


# randomization / operators
class NegativeThreshold(RandopError):
    pass


class NegativeBound(RandopError):
    pass


class InvalidOperator(RandopError):
    pass


# continuity
class ZeroVector(RandopError):
    pass


class EmptyGrid(RandopError):
    pass


class InconsistentBundle(RandopError):
    pass


class MissingWitness(RandopError):
    pass


class UnsupportedEdge(RandopError):
    pass


class SequenceNotNull(RandopError):
    pass


# conditional / graph
class HypothesisFails(RandopError):
    pass


class UncertifiedSequence(RandopError):
    pass


class InvariantViolation(RandopError):
    """A proven statement failed on a concrete instance. Never expected."""


# scenario layer
class ScenarioError(RandopError):
    """Scenario document problem, tagged with the JSON path where it occurred."""

    def __init__(self, path, message):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


class UnknownAnalysis(ScenarioError):
    pass
