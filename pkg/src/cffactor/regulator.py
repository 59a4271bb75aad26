"""Regulator of Q(sqrt N) from the expansion, and h*R analytically.

R* = ln(A_{tau-1} + B_{tau-1} sqrt N) equals the sum of the per-step
distance increments over one period.  Independently, the product h*R of
the class number and regulator comes from the classic character sum

    hR = - sum_{n <= (D-1)/2} (D/n) ln sin(n pi / D)        (reference)

or from the exponentially convergent series

    hR = 1/2 sum_{x >= 1} (D/x) [ (sqrt D / x) erfc(x sqrt(pi/D))
                                  + E1(pi x^2 / D) ]        (fast)

with D = N for N = 1 mod 4 and D = 4N otherwise, the character being the
Jacobi symbol extended to even moduli by the Kronecker rules.
"""

import math
from dataclasses import dataclass

from mpmath import mp, mpf, workprec

from .cf_engine import init_convergents, convergent_step, kraitchik_bound, surd_iter
from .core_arith import default_prec, erfc_hp, exp_int_e1, isqrt, kronecker
from .errors import BudgetExceeded, InternalInvariant, InvalidInput

#: N below this bit length get the exact-convergent cross-check
EXACT_UNIT_BITS = 128


@dataclass(frozen=True)
class RegulatorResult:
    """R* = ln(A_{tau-1} + B_{tau-1} sqrt N) with period metadata.

    unit_norm is (-1)^tau; index_flag (1 or 3, R* = R_F or 3 R_F) is only
    known after reconciliation against hR and stays None until then.
    """

    n: int
    r_star: object          # mpf
    tau: int
    unit_norm: int
    prec: int
    index_flag: int | None = None

    @property
    def r_plus(self):
        """log of the smallest unit power with norm +1 (doubles odd-tau R*)."""
        return self.r_star * 2 if self.unit_norm < 0 else self.r_star


@dataclass(frozen=True)
class AnalyticHR:
    d: int
    hr: object              # mpf
    prec: int
    terms_used: int
    method: str             # "lattice" | "fast"


@dataclass(frozen=True)
class ReconcileResult:
    h_estimate: int | None
    multiplier: int | None
    value: float            # multiplier * hr / r_star for the accepted multiplier
    consistent: bool


def discriminant_for(n):
    """D = N when N = 1 mod 4, else 4N."""
    return n if n % 4 == 1 else 4 * n


def fundamental_unit_from_cf(n, max_steps=None):
    """(A_{tau-1}, B_{tau-1}, tau) exactly, via the convergent recurrence.

    A^2 - N B^2 = (-1)^tau is asserted.  Exponential-size integers: keep N
    small (the convergents have about 1.44*R* bits).
    """
    if max_steps is None:
        max_steps = kraitchik_bound(n)
    it = surd_iter(n)
    _, a0, _, _ = next(it)
    conv = init_convergents(a0)
    for m, a, _, _ in it:
        if a == 2 * a0:
            tau = m
            break
        conv = convergent_step(conv, a)
        if m > max_steps:
            raise BudgetExceeded(max_steps)
    else:  # pragma: no cover
        raise BudgetExceeded(max_steps)
    A, B = conv.a_num, conv.b_den
    if A * A - n * B * B != (-1) ** tau:
        raise InternalInvariant("Pell identity failed for the period-end convergent")
    return A, B, tau


def _r_star_float(n, max_steps):
    """53-bit increment sum with compensated accumulation; returns (sum, tau)."""
    a0 = isqrt(n)
    root = math.sqrt(n)
    c = a0
    r = n - a0 * a0
    total = 0.0
    comp = 0.0
    m = 0
    target = 2 * a0
    while True:
        inc = 0.5 * math.log((root + c) / (root - c))
        y = inc - comp
        t = total + y
        comp = (t - total) - y
        total = t
        m += 1
        a = (a0 + c) // r
        if a == target:
            return total, m
        c = a * r - c
        r = (n - c * c) // r
        if m > max_steps:
            raise BudgetExceeded(max_steps)


def regulator_from_cf(n, prec=None, max_steps=None, crosscheck=None):
    """R* as the sum of Eq.-5 increments over one period.

    prec <= 53 uses compensated float64 (fast, for bulk infrastructure
    work); higher precisions sum mpf terms.  When feasible (small N,
    crosscheck not disabled) the sum is verified against
    ln(A_{tau-1} + B_{tau-1} sqrt N) from exact convergents.
    """
    if prec is None:
        prec = default_prec(n)
    if max_steps is None:
        max_steps = kraitchik_bound(n)
    if prec <= 53:
        total, tau = _r_star_float(n, max_steps)
        with workprec(53):
            r_star = mpf(total)
        return RegulatorResult(n=n, r_star=r_star, tau=tau,
                               unit_norm=(-1) ** tau, prec=53)

    with workprec(prec + 16):
        root = mp.sqrt(n)
        total = mpf(0)
        it = surd_iter(n)
        _, a0, c, r = next(it)
        target = 2 * a0
        tau = None
        for m, a, c_new, _ in it:
            total += mp.log((root + c) / (root - c)) / 2
            if a == target:
                tau = m
                break
            c = c_new
            if m > max_steps:
                raise BudgetExceeded(max_steps)
        if tau is None:
            raise BudgetExceeded(max_steps)
    with workprec(prec):
        r_star = +total

    if crosscheck is None:
        crosscheck = n.bit_length() <= EXACT_UNIT_BITS and tau <= 8192
    if crosscheck:
        A, B, tau2 = fundamental_unit_from_cf(n, max_steps)
        if tau2 != tau:
            raise InternalInvariant("period mismatch between scans")
        with workprec(prec + 16):
            direct = mp.log(A + B * mp.sqrt(n))
            if abs(direct - r_star) > abs(direct) * mpf(2) ** (-(prec - 8)):
                raise InternalInvariant(
                    f"increment sum disagrees with ln(unit) for N={n}")
    return RegulatorResult(n=n, r_star=r_star, tau=tau,
                           unit_norm=(-1) ** tau, prec=prec)


def hr_lattice_sum(d, prec=96):
    """Reference hR: the full finite character sum, O(D) log-sine terms."""
    if d < 3:
        raise InvalidInput(f"need D >= 3, got {d}")
    top = (d - 1) // 2
    if prec <= 53:
        # float64 per-term error accumulates far below any tolerance used
        # at desk scale (terms are O(ln D), count is O(D))
        total = 0.0
        comp = 0.0
        terms = 0
        for k in range(1, top + 1):
            ch = kronecker(d, k)
            if not ch:
                continue
            v = -ch * math.log(math.sin(math.pi * k / d))
            terms += 1
            y = v - comp
            t = total + y
            comp = (t - total) - y
            total = t
        with workprec(53):
            return AnalyticHR(d=d, hr=mpf(total), prec=53,
                              terms_used=terms, method="lattice")
    with workprec(prec + 16):
        total = mpf(0)
        terms = 0
        pi_over_d = mp.pi / d
        for k in range(1, top + 1):
            ch = kronecker(d, k)
            if not ch:
                continue
            terms += 1
            total -= ch * mp.log(mp.sin(k * pi_over_d))
        result = +total
    with workprec(prec):
        return AnalyticHR(d=d, hr=+result, prec=prec,
                          terms_used=terms, method="lattice")


def default_fast_terms(d, prec):
    """Terms needed for the erfc/E1 series to pass 2^-prec decay."""
    return int(math.sqrt(d * (prec + 16) * math.log(2) / math.pi)) + 64


def hr_fast_series(d, prec=96, max_terms=None):
    """Fast hR via the erfc/E1 series; stops when terms fall below 2^-prec.

    Raises BudgetExceeded if max_terms is hit before the tolerance is
    reached (the series converges like exp(-pi x^2 / D)).
    """
    if d < 3:
        raise InvalidInput(f"need D >= 3, got {d}")
    if max_terms is None:
        max_terms = default_fast_terms(d, prec)
    wp = max(prec, 64)
    # term x is O(exp(-pi x^2 / D)): its share of the 2^-prec budget needs
    # only prec - pi x^2/(D ln 2) bits, so the tail runs at low precision
    decay = math.pi / (d * math.log(2))
    with workprec(wp + 16):
        sqrt_d = mp.sqrt(d)
        root_pi_over_d = mp.sqrt(mp.pi / d)
        pi_over_d = mp.pi / d
        total = mpf(0)
        eps = mpf(2) ** (-prec)
        terms = 0
        x = 0
        while True:
            x += 1
            if x > max_terms:
                raise BudgetExceeded(max_terms, "series terms")
            ch = kronecker(d, x)
            if ch == 0:
                continue
            term_prec = max(24, wp + 10 - int(decay * x * x))
            t = (sqrt_d / x) * erfc_hp(x * root_pi_over_d, term_prec) \
                + exp_int_e1(pi_over_d * x * x, term_prec)
            terms += 1
            total += t if ch > 0 else -t
            if x >= 3 and t < eps * max(abs(total), mpf(1)) / 4:
                break
        result = total / 2
    with workprec(prec):
        return AnalyticHR(d=d, hr=+result, prec=prec,
                          terms_used=terms, method="fast")


def reconcile(hr, reg, tol=1e-4, extended=False):
    """Match hr against R* via candidate multipliers.

    Tries s in {1, 3} (and {2, 6} too when extended, for N = 1 mod 4
    fields whose unit index interacts with the conductor); consistent when
    some s puts s*hr/R* within tol of a positive integer.
    """
    multipliers = (1, 3, 2, 6) if extended else (1, 3)
    ratio = float(hr.hr) / float(reg.r_star)
    for s in multipliers:
        v = s * ratio
        h = round(v)
        if h >= 1 and abs(v - h) < tol:
            return ReconcileResult(h_estimate=h, multiplier=s, value=v,
                                   consistent=True)
    return ReconcileResult(h_estimate=None, multiplier=None, value=ratio,
                           consistent=False)
