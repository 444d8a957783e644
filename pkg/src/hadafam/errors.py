"""Exception hierarchy. Everything raised on purpose derives from HadafamError."""


class HadafamError(Exception):
    """Base class for all library errors."""


class FactorOutOfRange(HadafamError, ValueError):
    """A group factor is smaller than 2."""


class GroupMismatch(HadafamError, ValueError):
    """Operands live in different groups."""


class IdentityInStarComplement(HadafamError, ValueError):
    """Star complement requested for a subset containing the identity."""


class CoefficientOverflow(HadafamError, OverflowError):
    """A convolution could exceed the 64-bit exactness guarantee."""


class NotPrime(HadafamError, ValueError):
    """Field characteristic is not prime."""


class DegreeTooLarge(HadafamError, ValueError):
    """Requested field is beyond the supported size."""


class BadDivisor(HadafamError, ValueError):
    """Cyclotomic class count does not divide the multiplicative group order."""


class NotADifferenceFamily(HadafamError):
    """Blocks do not cover every nonzero element equally often.

    ``witness`` is the index of an element whose difference count deviates,
    or None when the structure is broken in some other way.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class WrongBlockCount(HadafamError, ValueError):
    """Condition requested for a family with the wrong number of blocks."""


class CoefficientOutOfRange(HadafamError):
    """Signed block sums are not 0 at the identity and +-1 elsewhere."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class PreconditionFailed(HadafamError):
    """A construction was fed input that violates its entry conditions.

    ``condition`` names the violated requirement (e.g. "d3", "symmetric").
    """

    def __init__(self, condition, message=None):
        super().__init__(message or f"precondition failed: {condition}")
        self.condition = condition


class ZeroInF(PreconditionFailed):
    """Second recursion operand has a block containing the identity."""

    def __init__(self, message="identity element appears in a block of the second family"):
        super().__init__("zero_not_in_blocks", message)


class PostVerifyFailed(HadafamError):
    """A construction produced output failing its own verification: a bug."""


class NotPerfectSquareOrder(HadafamError, ValueError):
    """Spread conditions need a group whose order is a perfect square."""


class UnknownName(HadafamError, KeyError):
    """No catalog entry under that name."""


class CatalogDataError(HadafamError):
    """Embedded catalog data failed re-verification: a fatal data bug."""


class Z37ScanFailed(CatalogDataError):
    """No primitive root validates the order-37 entry (fatal data bug)."""


class BoundTooLarge(HadafamError, ValueError):
    """Prime scan bound exceeds the deterministically-checkable range."""


class BadParameter(HadafamError, ValueError):
    """Construction parameter outside the admissible set."""


class OrderMismatch(HadafamError, ValueError):
    """Matrices of different orders where equal orders are required."""


class ArrayRealizationFailed(HadafamError):
    """No border/template candidate produced a verified Hadamard matrix."""
