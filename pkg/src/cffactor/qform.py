"""Arithmetic on the principal cycle of reduced forms of discriminant 4N.

Forms are written [a, 2w, c] with even middle coefficient; on the cycle
a = Delta_m, w = Omega_m, c = Delta_{m-1}, and w^2 - a*c = N.  The sign of
Omega is opposite to the sign of Delta_m, so the sign triples of
(Delta_m, Omega_m, Delta_{m-1}) alternate between (-,+,+) and (+,-,-).

rho_plus / rho_minus move one position along the cycle (baby steps);
compose is the Gauss product followed by reduction (giant step), with
distance carried exactly via the module engine in infra.py.
"""

from dataclasses import dataclass

from mpmath import mp, mpf, workprec

from . import infra
from .core_arith import isqrt
from .errors import DiscriminantMismatch, DomainError, NotIndefinite

#: the two sign triples that alternate along a cycle
CYCLE_SIGNATURES = ((-1, 1, 1), (1, -1, -1))

#: default err growth per composition, in units of ln N (conservative; the
#: tracked distance itself is exact to rounding)
ERR_PER_COMPOSE = 0.5


@dataclass(frozen=True)
class QForm:
    """Binary quadratic form [a, b2, c] of discriminant b2^2 - 4ac = 4N."""

    a: int
    b2: int
    c: int
    n: int

    def __post_init__(self):
        if self.b2 % 2:
            raise DiscriminantMismatch("middle coefficient must be even")
        if self.b2 * self.b2 - 4 * self.a * self.c != 4 * self.n:
            raise DiscriminantMismatch(
                f"discriminant of [{self.a}, {self.b2}, {self.c}] is not 4*{self.n}")

    @property
    def omega(self):
        return self.b2 // 2

    def coefficients(self):
        return (self.a, self.b2, self.c)


def form_at(n, delta_m, omega_m, delta_prev):
    """The cycle form [Delta_m, 2*Omega_m, Delta_{m-1}]; validates the surd relation."""
    if omega_m * omega_m - delta_m * delta_prev != n:
        raise DiscriminantMismatch(
            f"Omega^2 - Delta*Delta' = {omega_m**2 - delta_m*delta_prev} != {n}")
    return QForm(a=delta_m, b2=2 * omega_m, c=delta_prev, n=n)


def signature(f):
    """Ordered sign triple of (a, omega, c); cycle forms alternate between
    (-,+,+) and (+,-,-)."""
    sgn = lambda v: (v > 0) - (v < 0)
    return (sgn(f.a), sgn(f.omega), sgn(f.c))


def is_reduced(f):
    """Paper kappa test: sqrt N - |w| < min(|a|,|c|) < sqrt N + |w|, signs opposite."""
    if f.a * f.c >= 0:
        return False
    w = abs(f.omega)
    if w * w >= f.n:
        return False
    k = min(abs(f.a), abs(f.c))
    if (k + w) * (k + w) <= f.n:
        return False
    return k <= w or (k - w) * (k - w) < f.n


def rho_plus(f):
    """Next form on the cycle: f_m -> f_{m+1}.

    Equivalent to one surd step; the new half-middle w1 is the unique
    w1 = w (mod |a|) with sign(w1) = sign(a) and |w1| in (a0 - |a|, a0].
    """
    a0 = isqrt(f.n)
    a, w = f.a, f.omega
    s = 1 if a > 0 else -1
    u = a0 - ((a0 - s * w) % abs(a))
    w1 = s * u
    return QForm(a=(w1 * w1 - f.n) // a, b2=2 * w1, c=a, n=f.n)


def rho_minus(f):
    """Previous form on the cycle: f_m -> f_{m-1} (inverse of rho_plus)."""
    a0 = isqrt(f.n)
    c, w = f.c, f.omega
    s = -1 if c > 0 else 1
    u = a0 - ((a0 - s * w) % abs(c))
    w1 = s * u
    return QForm(a=c, b2=2 * w1, c=(w1 * w1 - f.n) // c, n=f.n)


def distance_increment(omega_m, m, n, prec=96):
    """d(f_{m+1}, f_m) = 0.5*ln((sqrt N + (-1)^m w)/(sqrt N - (-1)^m w))."""
    if omega_m * omega_m >= n:
        raise DomainError(f"|Omega| = {abs(omega_m)} >= sqrt({n})")
    s = omega_m if m % 2 == 0 else -omega_m
    with workprec(prec + 16):
        root = mp.sqrt(n)
        val = mp.log((root + s) / (root - s)) / 2
    with workprec(prec):
        return +val


def _iota_mpf(n, prec):
    """Signed step log at working precision; closes over sqrt(N)."""
    with workprec(prec + 16):
        root = mp.sqrt(n)

    def iota(y):
        if y == 0:
            return mpf(0)
        with workprec(prec + 16):
            return mp.log(abs((root + y) / (root - y))) / 2

    return iota


@dataclass(frozen=True)
class FormWithDistance:
    """A cycle form with its distance from the cycle start and an error bound."""

    form: QForm
    dist: object            # mpf
    err: object             # mpf, >= 0, nondecreasing under compose

    @property
    def n(self):
        return self.form.n


def form_with_distance_at(n, ell, prec=96):
    """f_ell with d(f_ell, f_0) = sum of the first ell Eq.-5 increments.

    ell >= 1; the hypothetical base form is never materialized, d(f_1, f_0)
    is the m = 0 term.
    """
    if ell < 1:
        raise DomainError("need ell >= 1")
    iota = _iota_mpf(n, prec)
    a0 = isqrt(n)
    c, r = a0, n - a0 * a0
    with workprec(prec):
        d = mpf(0)
    for _ in range(ell):
        d = d + iota(c)
        a = (a0 + c) // r
        c = a * r - c
        r = (n - c * c) // r
    sign_delta = 1 if ell % 2 == 1 else -1
    f = QForm(a=sign_delta * r, b2=2 * (-sign_delta) * c,
              c=-sign_delta * ((n - c * c) // r), n=n)
    return FormWithDistance(form=f, dist=d, err=mpf(0))


def rho_plus_with_distance(fd, prec=96):
    """Baby step ahead; dist grows by the Eq.-5 increment of the source form."""
    iota = _iota_mpf(fd.form.n, prec)
    nxt = rho_plus(fd.form)
    return FormWithDistance(form=nxt, dist=fd.dist + iota(abs(fd.form.omega)),
                            err=fd.err)


def rho_minus_with_distance(fd, prec=96):
    """Baby step back; dist shrinks by the increment of the step being undone."""
    iota = _iota_mpf(fd.form.n, prec)
    prv = rho_minus(fd.form)
    return FormWithDistance(form=prv, dist=fd.dist - iota(abs(prv.omega)),
                            err=fd.err)


@dataclass(frozen=True)
class ReduceResult:
    form: QForm
    steps: int
    adjustment: object      # mpf: exact sum of per-step increments


def reduce_form(f, prec=96):
    """Reduce a form of discriminant 4N onto a cycle, reporting the exact
    distance adjustment accumulated over the reduction steps.

    Already-reduced forms come back unchanged in zero steps.
    """
    if f.b2 * f.b2 - 4 * f.a * f.c <= 0:
        raise NotIndefinite("form is not of positive discriminant")
    n = f.n
    a0 = isqrt(n)
    if is_reduced(f):
        return ReduceResult(form=f, steps=0, adjustment=mpf(0))
    iota = _iota_mpf(n, prec)
    q = abs(f.a)
    x0 = ((-f.omega if f.a > 0 else f.omega) % q) if q > 1 else 0
    # module view forgets the total sign; recover it from the norm-flip count
    q, x, adj, steps, flips = infra.reduce_module(q, x0, n, a0, iota)
    sign_in = 1 if f.a > 0 else -1
    sign_out = sign_in * (1 if flips % 2 == 0 else -1)
    form = QForm(a=sign_out * q, b2=2 * (-sign_out) * x,
                 c=-sign_out * ((n - x * x) // q), n=n)
    return ReduceResult(form=form, steps=steps, adjustment=adj)


def compose(fd1, fd2, prec=96, err_factor=ERR_PER_COMPOSE):
    """Gauss composition followed by reduction, with exact distance carry.

    dist(out) = dist(f1) + dist(f2) + (exact reduction adjustment), under
    the convention d(f_m) = delta(M_m) - iota(c_m); err grows by
    err_factor * ln N per call.  Both inputs must be reduced cycle forms of
    the same discriminant.
    """
    f1, f2 = fd1.form, fd2.form
    if f1.n != f2.n:
        raise DiscriminantMismatch("forms have different discriminants")
    n = f1.n
    a0 = isqrt(n)
    iota = _iota_mpf(n, prec)
    q1, x1 = abs(f1.a), infra.canon_rep(abs(f1.omega), abs(f1.a), a0)
    q2, x2 = abs(f2.a), infra.canon_rep(abs(f2.omega), abs(f2.a), a0)
    delta1 = fd1.dist + iota(x1)
    delta2 = fd2.dist + iota(x2)
    q3, x3 = infra.module_product(q1, x1, q2, x2, n)
    q3, x3, adj, steps, flips = infra.reduce_module(q3, x3, n, a0, iota)
    dist3 = delta1 + delta2 + adj - iota(x3)
    # position parity: m3 = m1 + m2 + flips + 1 (mod 2), from counting the
    # negative-norm factors of the tracked generator; sign(Delta_m) = (-1)^(m+1)
    m1 = 1 if f1.a > 0 else 0
    m2 = 1 if f2.a > 0 else 0
    sign3 = 1 if (m1 + m2 + flips) % 2 == 0 else -1
    form3 = QForm(a=sign3 * q3, b2=2 * (-sign3) * x3,
                  c=-sign3 * ((n - x3 * x3) // q3), n=n)
    with workprec(prec):
        err3 = fd1.err + fd2.err + mpf(err_factor) * mp.log(n)
    return FormWithDistance(form=form3, dist=dist3, err=err3)


def double(fd, prec=96, err_factor=ERR_PER_COMPOSE):
    """2 . f = compose(f, f); s iterated doublings give 2^s . f."""
    return compose(fd, fd, prec=prec, err_factor=err_factor)
