"""Exact integer utilities and precision-budgeted real special functions.

Integers are plain Python ints (arbitrary precision). High-precision reals
are mpmath mpf values; every function that produces one takes an explicit
``prec`` argument in bits and guarantees roughly 2^(1-prec) relative error.
Precision is passed explicitly, never read from ambient state, except for
the documented ``workprec`` blocks inside each function.
"""

import math
import random

from mpmath import mp, mpf, workprec
from mpmath import libmp

from .errors import DomainError, InvalidInput, NonInvertible

isqrt = math.isqrt
gcd = math.gcd

_LN2 = math.log(2.0)


def default_prec(n):
    """Working precision for analytic work on inputs of magnitude n."""
    return max(int(n).bit_length() + 64, 96)


def xgcd(a, b):
    """Extended Euclid: returns (g, x, y) with a*x + b*y = g = gcd(a, b), g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        return -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def modinv(a, n):
    """Inverse of a modulo n; raises NonInvertible(gcd) when gcd(a, n) > 1."""
    try:
        return pow(a, -1, n)
    except ValueError:
        raise NonInvertible(gcd(a, n)) from None


def jacobi(a, n):
    """Jacobi symbol (a/n) for odd positive n, by quadratic reciprocity.

    a is reduced mod n first, so negative or large a are fine.
    """
    if n <= 0 or n % 2 == 0:
        raise InvalidInput(f"jacobi needs odd positive n, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(d, x):
    """Kronecker symbol (d/x) for x >= 0; extends jacobi to even x."""
    if x < 0:
        raise InvalidInput("kronecker implemented for x >= 0 only")
    if x == 0:
        return 1 if d in (1, -1) else 0
    result = 1
    if x % 2 == 0:
        if d % 2 == 0:
            return 0
        two = 1 if d % 8 in (1, 7) else -1
        while x % 2 == 0:
            x //= 2
            result *= two
    if x == 1:
        return result
    return result * jacobi(d, x)


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n, extra_rounds=16, rng=None):
    """Miller-Rabin; deterministic below 3.3e24, extra random rounds above."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1

    def witness(a):
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            return False
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                return False
        return True

    for a in _MR_BASES:
        if witness(a):
            return False
    if n < 3317044064679887385961981:
        return True
    rng = rng or random.Random(0xC0FFEE ^ (n & 0xFFFFFFFF))
    for _ in range(extra_rounds):
        if witness(rng.randrange(2, n - 1)):
            return False
    return True


# ---------------------------------------------------------------------------
# special functions
# ---------------------------------------------------------------------------

def _erfc_series(x, prec):
    """erfc via the all-positive erf series; needs ~x^2*log2(e) guard bits.

    The series sum runs in fixed-point integers (term ratios are exact
    rationals), only the prefactor 2x e^(-x^2)/sqrt(pi) uses mpf calls.
    """
    guard = int(float(x) * float(x) * 1.4427) + 48
    wp = prec + guard
    with workprec(wp + 8):
        xm = mpf(x)
        xf = libmp.to_fixed(xm._mpf_, wp)
        xx2 = (2 * xf * xf) >> wp
        term = 1 << wp
        total = term
        n = 0
        while term > 2:
            n += 1
            term = (term * xx2 >> wp) // (2 * n + 1)
            total += term
        series = mpf(libmp.from_man_exp(total, -wp))
        erf = 2 * xm * mp.exp(-xm * xm) / mp.sqrt(mp.pi) * series
        result = 1 - erf
    with workprec(prec):
        return +result


def _erfc_cf(x, prec):
    """erfc via the Laplace continued fraction, for large x."""
    with workprec(prec + 32):
        x = mpf(x)
        eps = mpf(2) ** (-(prec + 16))
        tiny = mpf(2) ** (-10 * (prec + 32))
        # erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
        f = x if x != 0 else tiny
        C = f
        D = mpf(0)
        k = 0
        while True:
            k += 1
            a = mpf(k) / 2
            D = x + a * D
            if D == 0:
                D = tiny
            C = x + a / C
            if C == 0:
                C = tiny
            D = 1 / D
            delta = C * D
            f *= delta
            if abs(delta - 1) < eps:
                break
            if k > 100000:
                raise DomainError("erfc continued fraction failed to converge")
        result = mp.exp(-x * x) / (mp.sqrt(mp.pi) * f)
    with workprec(prec):
        return +result


def erfc_hp(x, prec=96):
    """Complementary error function to 2^(1-prec) relative error, x >= 0.

    Small arguments use the Maclaurin route with cancellation guard bits;
    large arguments (x^2 beyond the guardable range) use the Laplace
    continued fraction. The switchover keeps both branches inside the
    stated error bound.  prec <= 48 defers to libm (good to ~2^-51
    relative away from the underflow region).
    """
    xf = float(x)
    if xf < 0:
        raise DomainError("erfc_hp requires x >= 0")
    if xf == 0:
        with workprec(prec):
            return mpf(1)
    if prec <= 48 and xf < 20.0:
        with workprec(53):
            return mpf(math.erfc(xf))
    if xf * xf <= 0.9 * prec * _LN2 or xf < 2.0:
        return _erfc_series(x, prec)
    return _erfc_cf(x, prec)


def _e1_series(x, prec):
    """E1 via -gamma - ln x + sum (-1)^(n+1) x^n/(n*n!), guarded for the
    alternating-series cancellation; fixed-point integer summation."""
    guard = int(2.9 * float(x)) + 48
    wp = prec + guard
    xf_float = float(x)
    with workprec(wp + 8):
        xm = mpf(x)
        xf = libmp.to_fixed(xm._mpf_, wp)
        term = 1 << wp
        total = 0
        n = 0
        while True:
            n += 1
            term = (term * xf >> wp) // n
            piece = term // n
            total += piece if n % 2 == 1 else -piece
            if term < 4 and n > xf_float:
                break
        result = -mp.euler - mp.log(xm) + mpf(libmp.from_man_exp(total, -wp))
    with workprec(prec):
        return +result


def _e1_cf(x, prec):
    """E1 via the standard continued fraction exp(-x)/(x+1-1/(x+3-4/(x+5-...)))."""
    with workprec(prec + 32):
        x = mpf(x)
        eps = mpf(2) ** (-(prec + 16))
        tiny = mpf(2) ** (-10 * (prec + 32))
        b = x + 1
        f = b if b != 0 else tiny
        C = f
        D = mpf(0)
        k = 0
        while True:
            k += 1
            a = mpf(-(k * k))
            b = x + 2 * k + 1
            D = b + a * D
            if D == 0:
                D = tiny
            C = b + a / C
            if C == 0:
                C = tiny
            D = 1 / D
            delta = C * D
            f *= delta
            if abs(delta - 1) < eps:
                break
            if k > 100000:
                raise DomainError("E1 continued fraction failed to converge")
        result = mp.exp(-x) / f
    with workprec(prec):
        return +result


def _e1_float(x):
    """float64 E1: series below 2.5, Lentz continued fraction above."""
    if x <= 2.5:
        total = 0.0
        term = 1.0
        n = 0
        while True:
            n += 1
            term *= x / n
            total += term / n if n % 2 else -term / n
            if term < 1e-18 and n > x:
                break
        return total - 0.5772156649015329 - math.log(x)
    tiny = 1e-300
    b = x + 1
    f = b
    c = f
    d = 0.0
    k = 0
    while True:
        k += 1
        a = -(k * k)
        b = x + 2 * k + 1
        d = b + a * d
        if d == 0:
            d = tiny
        c = b + a / c
        if c == 0:
            c = tiny
        d = 1 / d
        delta = c * d
        f *= delta
        if abs(delta - 1) < 1e-17 or k > 10000:
            return math.exp(-x) / f


def exp_int_e1(x, prec=96):
    """Exponential integral E1(x) for x > 0, to 2^(1-prec) relative error."""
    xf = float(x)
    if xf <= 0:
        raise InvalidInput("exp_int_e1 requires x > 0")
    if prec <= 48 and xf < 600.0:
        with workprec(53):
            return mpf(_e1_float(xf))
    if xf <= 32.0:
        return _e1_series(x, prec)
    return _e1_cf(x, prec)
