"""Slow reference implementations used by tests and value derivation.

Everything here is exact and deliberately naive (O(N) scans, trial
division); production code paths must never import this module.
"""

import time
from dataclasses import dataclass, field

from .core_arith import is_probable_prime, isqrt
from .errors import BudgetExceeded, InvalidInput


@dataclass
class OracleReport:
    input: object
    output: object
    method: str
    cost: dict = field(default_factory=dict)


def run_with_report(func, *args, **kwargs):
    """Wrap an oracle call in an OracleReport with a wall-clock counter."""
    t0 = time.perf_counter()
    out = func(*args, **kwargs)
    return OracleReport(input=args, output=out, method=func.__name__,
                        cost={"seconds": time.perf_counter() - t0})


def trial_division(n, budget=None):
    """Exact prime factorization by division up to sqrt(n), desk scale only.

    Returns the sorted list of prime factors with multiplicity.
    """
    if n < 2:
        raise InvalidInput(f"need N >= 2, got {n}")
    if n > 2 ** 64:
        raise BudgetExceeded(2 ** 64, "desk-scale input")
    factors = []
    for p in (2, 3):
        while n % p == 0:
            factors.append(p)
            n //= p
    d = 5
    steps = 0
    while d * d <= n:
        if budget is not None and steps > budget:
            raise BudgetExceeded(budget)
        if is_probable_prime(n):
            break
        for q in (d, d + 2):
            while n % q == 0:
                factors.append(q)
                n //= q
        d += 6
        steps += 1
    if n > 1:
        factors.append(n)
    return sorted(factors)


def pell_bruteforce(n, max_b=10 ** 6):
    """Smallest B >= 1 with N*B^2 +- 1 a perfect square; returns (A, B, norm)."""
    a0 = isqrt(n)
    if a0 * a0 == n:
        raise InvalidInput("N must not be a square")
    for b in range(1, max_b + 1):
        nb2 = n * b * b
        a = isqrt(nb2 + 1)
        if a * a == nb2 + 1:
            return a, b, 1
        a = isqrt(nb2 - 1)
        if a * a == nb2 - 1:
            return a, b, -1
    raise BudgetExceeded(max_b, "Pell scan")


def jacobsthal_two_squares(p):
    """p = x^2 + y^2 for prime p = 1 mod 4 via Legendre-symbol sums.

    x = S(q_R)/2 and y = S(q_N)/2 where S(a) = sum_n ((n(n^2-a))/p) over
    n = 1..p-1, q_R any quadratic residue and q_N any non-residue.
    O(p) work; capped at p <= 10^5.
    """
    if p > 10 ** 5:
        raise BudgetExceeded(10 ** 5, "Jacobsthal scan")
    if p % 4 != 1 or not is_probable_prime(p):
        raise InvalidInput("need a prime p = 1 mod 4")
    qr = bytearray(p)
    for k in range(1, p):
        qr[k * k % p] = 1
    chi = lambda m: 0 if m == 0 else (1 if qr[m] else -1)
    q_r = 1
    q_n = next(m for m in range(2, p) if not qr[m])

    def s(a):
        return sum(chi(m * (m * m - a) % p) for m in range(1, p))

    x = abs(s(q_r)) // 2
    y = abs(s(q_n)) // 2
    x, y = sorted((x, y))
    assert x * x + y * y == p, (p, x, y)
    return x, y


def all_sqrt_minus_one(n):
    """Every s in [0, n) with s^2 = -1 mod n, by exhaustive scan (n <= 10^6)."""
    if n > 10 ** 6:
        raise BudgetExceeded(10 ** 6, "root scan")
    roots = []
    target = n - 1
    for s in range(1, n // 2 + 1):
        if s * s % n == target:
            roots.append(s)
            if n - s != s:
                roots.append(n - s)
    return sorted(roots)
