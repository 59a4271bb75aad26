"""Exception types shared across the package."""


class CFFactorError(Exception):
    """Base class for all package errors."""


class InvalidInput(CFFactorError):
    """Input outside a function's domain (N < 2, even modulus, etc.)."""


class PerfectSquare(CFFactorError):
    """N is a perfect square; carries the root, which is a factor."""

    def __init__(self, root):
        super().__init__(f"perfect square: {root}^2")
        self.root = root


class BudgetExceeded(CFFactorError):
    """An iteration cap was hit before the computation finished."""

    def __init__(self, budget, what="steps"):
        super().__init__(f"budget exceeded: {budget} {what}")
        self.budget = budget


class EvenPeriod(CFFactorError):
    """Period is even, so no two-squares representation exists."""

    def __init__(self, tau):
        super().__init__(f"period {tau} is even")
        self.tau = tau


class OddPeriod(CFFactorError):
    """Period is odd, so the midpoint factoring route does not apply."""

    def __init__(self, tau):
        super().__init__(f"period {tau} is odd")
        self.tau = tau


class NonInvertible(CFFactorError):
    """A modular inverse does not exist; carries the blocking gcd."""

    def __init__(self, g):
        super().__init__(f"not invertible, gcd {g}")
        self.gcd = g


class TrivialSplit(CFFactorError):
    """The two square roots agree up to sign; no factor information."""


class NoSplit(CFFactorError):
    """No proper factor was found; witness describes what was seen."""

    def __init__(self, message="no split", witness=None):
        super().__init__(message)
        self.witness = witness


class DiscriminantMismatch(CFFactorError):
    """Form coefficients do not have the required discriminant."""


class NotIndefinite(CFFactorError):
    """Form has nonpositive discriminant."""


class DomainError(CFFactorError):
    """Real-valued function evaluated outside its domain."""


class InternalInvariant(CFFactorError):
    """An internal consistency check failed (corrupted state)."""
