"""Exception types shared across the package."""


class IfsLabError(Exception):
    """Base class for all ifslab errors."""


class SystemValidationError(IfsLabError):
    """A system spec failed validation; carries the full error list."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class UnknownLetterError(IfsLabError):
    pass


class UnsupportedExponentError(IfsLabError):
    """Tail sums are only defined for exponents t > 0."""


class BudgetExceededError(IfsLabError):
    """Word enumeration budget hit.

    The best bracket computed so far (if any) is attached as ``bracket``.
    """

    def __init__(self, message, bracket=None):
        self.bracket = bracket
        super().__init__(message)


class NonsimilarityInfiniteAlphabetError(IfsLabError):
    """Deep level sums over infinite alphabets need similarity tails."""


class UndeterminedSignError(IfsLabError):
    """A pressure bracket straddles zero too widely to locate the Bowen root."""


class InfiniteAlphabetUnsupportedError(IfsLabError):
    """The discretized transfer operator requires a finite alphabet."""


class NoConvergenceError(IfsLabError):
    """Power iteration did not converge; best bracket attached."""

    def __init__(self, message, bracket=None, iterations=0):
        self.bracket = bracket
        self.iterations = iterations
        super().__init__(message)


class AlphabetMismatchError(IfsLabError):
    pass


class EmptySequenceError(IfsLabError):
    pass


class OutOfDomainError(IfsLabError):
    pass


class ThetaNotConstantError(IfsLabError):
    """Finiteness parameter varies across the grid: the family cannot be
    lambda-continuous and the critically-regular locus is undefined."""

    def __init__(self, message, violating_pair=None):
        self.violating_pair = violating_pair
        super().__init__(message)


class PathTooShortError(IfsLabError):
    pass


class EmptyRecordsError(IfsLabError):
    pass
