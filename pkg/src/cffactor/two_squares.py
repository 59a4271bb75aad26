"""Two-squares representations from odd-period expansions.

When the period tau of sqrt(N) is odd, the complete quotient at the
central index ell = (tau-1)/2 hands over N = c_ell^2 + r_ell^2 directly;
X/Y mod N is then a square root of -1, and two independent such roots
split N.
"""

from dataclasses import dataclass

from .cf_engine import period_length, surd_prefix
from .core_arith import gcd, modinv
from .errors import EvenPeriod, InternalInvariant, TrivialSplit

__all__ = ["TwoSquares", "legendre_two_squares", "sqrt_minus_one", "split_from_roots"]


@dataclass(frozen=True)
class TwoSquares:
    x: int
    y: int
    n: int

    def check(self):
        return self.x * self.x + self.y * self.y == self.n


def legendre_two_squares(n, max_steps=None):
    """Representation N = x^2 + y^2 from the odd-period expansion of sqrt(N).

    Expands to the central index ell = (tau-1)/2 and returns (x, y) =
    sorted (c_ell, r_ell).  Raises EvenPeriod(tau) when tau is even and
    PerfectSquare/InvalidInput per init rules.
    """
    tau = period_length(n, max_steps)
    if tau % 2 == 0:
        raise EvenPeriod(tau)
    c, r = surd_prefix(n, (tau - 1) // 2)
    x, y = sorted((c, r))
    if x * x + y * y != n:
        raise InternalInvariant(f"two-squares identity failed for {n}")
    return TwoSquares(x=x, y=y, n=n)


def sqrt_minus_one(n, max_steps=None):
    """s = X * Y^-1 mod N with s^2 = -1 mod N, from the two-squares pair.

    Raises EvenPeriod when tau is even, NonInvertible(g) when gcd(Y, N) =
    g > 1 (g is itself a factor of N).
    """
    ts = legendre_two_squares(n, max_steps)
    s = ts.x * modinv(ts.y, n) % n
    if (s * s + 1) % n:
        raise InternalInvariant(f"sqrt(-1) check failed for {n}")
    return s


def split_from_roots(n, s1, s2):
    """Proper factors from two independent square roots of -1 mod N.

    Requires s1^2 = s2^2 = -1 mod N and s2 != +-s1 mod N; then
    gcd(s1 - s2, N) is proper.  Returns (factor, cofactor).
    """
    s1 %= n
    s2 %= n
    if (s1 - s2) % n == 0 or (s1 + s2) % n == 0:
        raise TrivialSplit(f"roots {s1}, {s2} agree up to sign mod {n}")
    g = gcd(s1 - s2, n)
    if not 1 < g < n:
        raise InternalInvariant("expected a proper gcd from independent roots")
    return g, n // g
