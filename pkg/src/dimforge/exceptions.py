"""Exception hierarchy shared by all dimforge modules."""


class DimforgeError(Exception):
    """Base class for every error raised by this package."""


class InvalidParams(DimforgeError, ValueError):
    """Ring or group parameters violate their structural invariants."""


class PerfectSquare(InvalidParams):
    """The radicand is a perfect square, so sqrt(d) is rational."""


class NotAUnit(DimforgeError, ArithmeticError):
    """The element has no inverse inside Z[1/p] + Z[1/p]sqrt(d)."""


class BadModulus(InvalidParams):
    """p^s is not 1 modulo m1 or m2, so the congruence coupling is ill-defined."""


class CongruenceViolation(DimforgeError, ValueError):
    """A tuple fails the congruences defining the dimension group."""


class ContractViolation(DimforgeError, AssertionError):
    """A certificate or internal invariant failed to replay."""
