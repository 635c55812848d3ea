"""Exception types shared across the package."""


class RingforgeError(Exception):
    """Base class for all errors raised by ringforge."""


class BudgetExceeded(RingforgeError):
    """A configured size or iteration cap was hit.

    Exceeding a budget never produces a wrong answer; callers either
    catch this and report UNDECIDED or let it propagate.
    """

    def __init__(self, what, limit):
        super().__init__(f"{what} exceeded budget {limit}")
        self.what = what
        self.limit = limit


class ReducibleModulus(RingforgeError):
    def __init__(self, poly, factor):
        super().__init__(f"modulus {poly} is reducible (factor {factor})")
        self.poly = poly
        self.factor = factor


class ZeroRingError(RingforgeError):
    """Raised when a construction collapses to the zero ring unexpectedly."""


class MixedRingError(RingforgeError):
    pass


class NotASubring(RingforgeError):
    pass


class NotComaximal(RingforgeError):
    pass


class CertificateError(RingforgeError):
    """An internal re-check of a constructed certificate failed."""


class RootOracleFailure(RingforgeError):
    """An n-th root needed by a descent step does not exist in the ring."""

    def __init__(self, n, target):
        super().__init__(f"t^{n} = {target} has no solution")
        self.n = n
        self.target = target


class DefinitionError(RingforgeError):
    """Syntax or invariant error in a definition file, with location."""

    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(loc + message)
        self.line = line
        self.column = column
