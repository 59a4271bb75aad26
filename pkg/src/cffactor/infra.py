"""Reduced-module engine behind form composition and giant steps.

A position on the principal cycle is held as a pair (q, x) standing for
the Z-module [q, x + sqrt(N)] with q = r_m and x = c_m from the expansion
of sqrt(N).  Walking is the surd recursion itself; the product of two
modules is computed exactly by a 2x4 Hermite reduction; reduction back to
a cycle module multiplies by gamma = (y + sqrt(N))/q per step, whose log
is tracked so composed distances are exact (up to rounding), not merely
within O(ln N).

Distance conventions:
  ideal delta(M_m) = sum_{j=0..m} iota(c_j),   iota(y) = 0.5*ln|(sqrt N + y)/(sqrt N - y)|
  paper d(f_m)     = sum_{j=0..m-1} iota(c_j) = delta(M_m) - iota(c_m)
and delta is exactly additive under product + tracked reduction (mod the
cycle distance).
"""

import math

from .core_arith import isqrt, xgcd
from .errors import InternalInvariant

#: reduction of a product of cycle modules finishes well inside this
REDUCE_CAP_BASE = 64


def canon_rep(x, q, a0):
    """Representative of x mod q in the cycle interval (a0 - q, a0]."""
    return a0 - ((a0 - x) % q)


def is_reduced_module(q, x, n, a0):
    """kappa test: x >= 1, x^2 < N, and sqrt(N) - x < q < sqrt(N) + x."""
    xs = canon_rep(x, q, a0)
    if xs < 1 or xs * xs >= n:
        return False
    if (xs + q) * (xs + q) <= n:
        return False
    return q <= xs or (q - xs) * (q - xs) < n


def iota_float(n):
    """Float-precision signed step log: y -> 0.5*ln|(sqrt N + y)/(sqrt N - y)|."""
    s = math.sqrt(n)

    def iota(y):
        return 0.5 * math.log(abs((s + y) / (s - y)))

    return iota


def module_product(q1, x1, q2, x2, n):
    """Primitive part of [q1, x1+sqrt N]*[q2, x2+sqrt N]; returns (q3, x3).

    The rational content dropped here contributes nothing to distance.
    """
    g1, al, be = xgcd(q1, q2)
    e, ga, de = xgcd(g1, x1 + x2)
    al *= ga
    be *= ga
    v = al * (q1 * x2) + be * (q2 * x1) + de * (x1 * x2 + n)
    q3 = (q1 * q2) // (e * e)
    if v % e:
        raise InternalInvariant("module product content mismatch")
    x3 = (v // e) % q3
    if (x3 * x3 - n) % q3:
        raise InternalInvariant("module product lost the surd relation")
    return q3, x3


def reduce_module(q, x, n, a0, iota, cap=None):
    """Walk (q, x) to a reduced cycle module.

    Returns (q, x_canonical, adjustment, steps, flips) where adjustment is
    the exact sum of per-step gamma logs under `iota` and flips counts the
    steps whose multiplier has negative norm (y^2 < N); flips carries the
    sign parity of the landed position.
    """
    if cap is None:
        cap = REDUCE_CAP_BASE + 4 * n.bit_length()
    adj = 0.0 if isinstance(iota(0), float) else iota(0)
    steps = 0
    flips = 0
    two_a0 = 2 * a0 + 1
    while not is_reduced_module(q, x, n, a0):
        if q > two_a0:
            y = (-x) % q
            if 2 * y > q:
                y -= q
        else:
            y = canon_rep(-x, q, a0)
        qn = abs(n - y * y) // q
        if (n - y * y) % q:
            raise InternalInvariant("inexact division in module reduction")
        adj = adj + iota(y)
        if y * y < n:
            flips += 1
        q, x = qn, y
        steps += 1
        if steps > cap:
            raise InternalInvariant(f"module reduction did not finish in {cap} steps")
    return q, canon_rep(x, q, a0), adj, steps, flips


def module_step_forward(q, x, n, a0):
    """One cycle step ahead: (r_m, c_m) -> (r_{m+1}, c_{m+1})."""
    y = canon_rep(-x, q, a0)
    return (n - y * y) // q, y


def module_step_backward(q, x, n, a0):
    """One cycle step back: (r_m, c_m) -> (r_{m-1}, c_{m-1})."""
    qp = (n - x * x) // q
    return qp, canon_rep(-x, qp, a0)
