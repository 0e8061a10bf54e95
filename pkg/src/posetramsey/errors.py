"""Exception types shared across the package."""


class PosetRamseyError(Exception):
    pass


class CycleError(PosetRamseyError, ValueError):
    pass


class RangeError(PosetRamseyError, ValueError):
    pass


class ParseError(PosetRamseyError, ValueError):
    pass


class ArityError(PosetRamseyError, ValueError):
    pass


class GlueShapeError(PosetRamseyError, ValueError):
    pass


class NotAChainError(PosetRamseyError, ValueError):
    pass


class NotNestedError(PosetRamseyError, ValueError):
    pass


class FormatError(PosetRamseyError, ValueError):
    pass


class SizeError(PosetRamseyError, ValueError):
    pass


class NotFullLatticeError(PosetRamseyError, ValueError):
    pass


class GroundTooSmallError(PosetRamseyError, ValueError):
    pass


class VolumeError(PosetRamseyError, ValueError):
    pass


class InvalidHomomorphismError(PosetRamseyError, ValueError):
    pass


class NotABlockerError(PosetRamseyError, ValueError):
    pass


class NotLambdaFreeError(PosetRamseyError, ValueError):
    pass


class NotFreeError(PosetRamseyError, ValueError):
    pass


class IncomparabilityError(PosetRamseyError, ValueError):
    pass


class DomainError(PosetRamseyError, ValueError):
    pass


class MismatchError(PosetRamseyError, ValueError):
    pass


class TooSmallError(PosetRamseyError, ValueError):
    pass


class UnknownPattern(PosetRamseyError, KeyError):
    pass


class CapExceeded(PosetRamseyError, RuntimeError):
    pass


class BudgetExceeded(PosetRamseyError, RuntimeError):
    """Search stopped by its node or time budget before finishing."""

    def __init__(self, msg, nodes=0, ms=0):
        super().__init__(msg)
        self.nodes = nodes
        self.ms = ms
