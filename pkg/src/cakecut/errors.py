"""Exception hierarchy shared by every cakecut module."""


class CakeError(Exception):
    """Base class for all domain errors raised by cakecut."""


class DivisionByZero(CakeError, ZeroDivisionError):
    pass


class NegativeRadicand(CakeError, ValueError):
    pass


class CoincidentPoints(CakeError):
    pass


class ParallelLines(CakeError):
    pass


class NotKissing(CakeError):
    pass


class TooFewCircles(CakeError):
    pass


class ChainInfeasible(CakeError):
    pass


class PointNotOnCircle(CakeError):
    pass


class NotAKissingPoint(CakeError):
    pass


class EvenChain(CakeError):
    pass


class CapabilityMissing(CakeError):
    """A construction needs a marked center that the cake does not have."""


class DegenerateStart(CakeError):
    pass


class BadMidpoint(CakeError):
    pass


class RCollinear(CakeError):
    pass


class ADegenerate(CakeError):
    pass


class NotParallel(CakeError):
    pass


class DegenerateTrapezoid(CakeError):
    pass


class CutMissesCenter(CakeError):
    pass


class SceneError(CakeError):
    """Malformed scene input (bad radius, unknown cake index, bad JSON)."""
