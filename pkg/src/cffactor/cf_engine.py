"""Periodic continued fraction expansion of sqrt(N).

The expansion is driven by the integer recursion on complete-quotient data
(c_m, r_m):

    a_{m+1} = floor((a0 + c_m)/r_m),  c_{m+1} = a_{m+1} r_m - c_m,
    r_{m+1} = (N - c_{m+1}^2)/r_m     (exact division),

with a0 = floor(sqrt(N)), c_0 = a0, r_0 = N - a0^2.  The period ends at the
first partial quotient equal to 2*a0.  Alongside run the convergents
A_m/B_m and the sequences Delta_m = A_m^2 - N B_m^2 (= +-r_m) and
Omega_m = A_m A_{m-1} - N B_m B_{m-1} (= +-c_m), which satisfy
Omega_m^2 - Delta_m Delta_{m-1} = N at every index.
"""

import hashlib
import math
from dataclasses import dataclass

from .core_arith import isqrt
from .errors import BudgetExceeded, InternalInvariant, InvalidInput, PerfectSquare

#: quotient lists longer than this are digest-summarized, not stored
STORE_LIMIT = 10_000_000


def kraitchik_bound(n):
    """Iteration budget ceil(0.72*sqrt(N)*ln N) + 2 (period upper bound for N > 7)."""
    try:
        b = 0.72 * math.sqrt(n) * math.log(n)
    except OverflowError:
        ln_n = (n.bit_length() - 1) * math.log(2.0)
        b = 0.72 * math.exp(0.5 * ln_n) * ln_n
    if b > 2**62:
        return 2**62
    return max(int(b) + 3, 16)


@dataclass(frozen=True)
class SurdState:
    """One step of the sqrt(N) expansion: complete quotient (sqrt(N)+c)/r."""

    n: int
    m: int
    a: int
    c: int
    r: int
    a0: int

    def check(self):
        """Bounds that hold at every expansion step."""
        if not (0 < self.r <= 2 * self.a0 and self.c <= self.a0):
            return False
        if self.m >= 1 and not (self.a0 - self.c < self.r):
            return False
        return (self.n - self.c * self.c) % self.r == 0


def init_surd(n):
    """Initial state: m=0, a0=floor(sqrt N), c0=a0, r0=N-a0^2."""
    if n < 2:
        raise InvalidInput(f"need N >= 2, got {n}")
    a0 = isqrt(n)
    if a0 * a0 == n:
        raise PerfectSquare(a0)
    return SurdState(n=n, m=0, a=a0, c=a0, r=n - a0 * a0, a0=a0)


def surd_step(s):
    """Advance one step; the division (N - c^2)/r is exact by construction."""
    a = (s.a0 + s.c) // s.r
    c = a * s.r - s.c
    num = s.n - c * c
    if num % s.r:
        raise InternalInvariant("inexact division in surd step")
    return SurdState(n=s.n, m=s.m + 1, a=a, c=c, r=num // s.r, a0=s.a0)


def surd_iter(n, max_steps=None):
    """Yield (m, a_m, c_m, r_m) tuples; m=0 carries a0, c0, r0.

    Lightweight streaming form of init_surd/surd_step for long walks.
    Stops after max_steps yields of m >= 1 when given.
    """
    if n < 2:
        raise InvalidInput(f"need N >= 2, got {n}")
    a0 = isqrt(n)
    if a0 * a0 == n:
        raise PerfectSquare(a0)
    c = a0
    r = n - a0 * a0
    yield (0, a0, c, r)
    m = 0
    while max_steps is None or m < max_steps:
        m += 1
        a = (a0 + c) // r
        c = a * r - c
        r = (n - c * c) // r
        yield (m, a, c, r)


@dataclass(frozen=True)
class PeriodSummary:
    """Full period of sqrt(N): quotients a_1..a_tau with a_tau = 2*a0."""

    n: int
    a0: int
    tau: int
    quotients: tuple
    parity: str                 # "odd" | "even"
    ell: int                    # (tau-1)/2 if odd else (tau-2)/2
    truncated: bool = False
    digest: str = ""

    def is_palindromic(self):
        """a_{tau-j} = a_j for 1 <= j <= tau-1 (always true; a consistency check)."""
        if self.truncated:
            return True
        q = self.quotients
        return all(q[self.tau - j - 1] == q[j - 1] for j in range(1, self.tau))


def expand_period(n, max_steps=None, store_limit=STORE_LIMIT):
    """Expand sqrt(N) until a_m = 2*a0; returns the PeriodSummary.

    Raises BudgetExceeded if the period does not close within max_steps
    (default: the Kraitchik bound).
    """
    if max_steps is None:
        max_steps = kraitchik_bound(n)
    quotients = []
    digest = hashlib.sha256()
    count = 0
    it = surd_iter(n)
    _, a0, _, _ = next(it)
    target = 2 * a0
    for m, a, c, r in it:
        count += 1
        if count <= store_limit:
            quotients.append(a)
        digest.update(a.to_bytes((a.bit_length() + 7) // 8 + 1, "little"))
        if a == target:
            tau = m
            parity = "odd" if tau % 2 else "even"
            ell = (tau - 1) // 2 if tau % 2 else (tau - 2) // 2
            return PeriodSummary(
                n=n, a0=a0, tau=tau, quotients=tuple(quotients),
                parity=parity, ell=ell,
                truncated=count > store_limit, digest=digest.hexdigest(),
            )
        if m >= max_steps:
            raise BudgetExceeded(max_steps)
    raise BudgetExceeded(max_steps)


@dataclass(frozen=True)
class ConvergentState:
    """Convergent pair (A_m, B_m) plus predecessors, optionally mod N."""

    a_num: int
    b_den: int
    a_prev: int
    b_prev: int
    m: int
    modulus: int | None = None

    @property
    def determinant(self):
        """A_m B_{m-1} - A_{m-1} B_m, which equals (-1)^(m-1) when unreduced."""
        return self.a_num * self.b_prev - self.a_prev * self.b_den


def init_convergents(a0, modulus=None):
    """State at m=0: A_0 = a0, B_0 = 1, with A_{-1} = 1, B_{-1} = 0."""
    a = a0 % modulus if modulus else a0
    return ConvergentState(a_num=a, b_den=1, a_prev=1, b_prev=0, m=0, modulus=modulus)


def convergent_step(state, a_next):
    """A_{m+1} = a_{m+1} A_m + A_{m-1}, same for B; reduced mod N if set."""
    if a_next <= 0:
        raise InvalidInput("partial quotients are positive")
    a = a_next * state.a_num + state.a_prev
    b = a_next * state.b_den + state.b_prev
    if state.modulus:
        a %= state.modulus
        b %= state.modulus
    return ConvergentState(a_num=a, b_den=b, a_prev=state.a_num,
                           b_prev=state.b_den, m=state.m + 1,
                           modulus=state.modulus)


@dataclass(frozen=True)
class DeltaOmegaState:
    """(Delta_m, Delta_{m-1}, Omega_m) with Omega^2 - Delta*Delta_prev = N."""

    n: int
    m: int
    delta: int
    delta_prev: int
    omega: int

    def check(self):
        return self.omega ** 2 - self.delta * self.delta_prev == self.n


def init_delta_omega(n, a0, a1):
    """State at m=1: Delta_0 = a0^2-N, Delta_1 = (1+a0 a1)^2 - N a1^2,
    Omega_1 = (1+a0 a1) a0 - N a1."""
    return DeltaOmegaState(
        n=n, m=1,
        delta=(1 + a0 * a1) ** 2 - n * a1 * a1,
        delta_prev=a0 * a0 - n,
        omega=(1 + a0 * a1) * a0 - n * a1,
    )


def delta_omega_step(state, a_next):
    """Delta_{m+1} = a^2 Delta_m + 2a Omega_m + Delta_{m-1};
    Omega_{m+1} = Omega_m + a Delta_m."""
    d = a_next * a_next * state.delta + 2 * a_next * state.omega + state.delta_prev
    w = state.omega + a_next * state.delta
    return DeltaOmegaState(n=state.n, m=state.m + 1, delta=d,
                           delta_prev=state.delta, omega=w)


def delta_omega_sequences(n, upto):
    """Deltas[0..upto] and Omegas[0..upto] (Omega_0 = a0) via the recurrences."""
    it = surd_iter(n)
    _, a0, _, _ = next(it)
    deltas = [a0 * a0 - n]
    omegas = [a0]
    _, a1, _, _ = next(it)
    st = init_delta_omega(n, a0, a1)
    deltas.append(st.delta)
    omegas.append(st.omega)
    while st.m < upto:
        _, a, _, _ = next(it)
        st = delta_omega_step(st, a)
        deltas.append(st.delta)
        omegas.append(st.omega)
    return deltas, omegas


def verify_symmetry(tau, deltas, omegas):
    """Block symmetry through one period:

    Delta_m = (-1)^tau * Delta_{tau-m-2} for m <= tau-3, and
    Omega_{tau-m-1} = (-1)^(tau+1) * Omega_m for m <= tau-2.

    deltas/omegas must cover indices 0..tau-1 at least (Omega_0 = a0).
    """
    sign = 1 if tau % 2 == 0 else -1
    for m in range(0, tau - 2):
        if deltas[m] != sign * deltas[tau - m - 2]:
            return False
    for m in range(0, tau - 1):
        if omegas[tau - m - 1] != -sign * omegas[m]:
            return False
    return True


# ---------------------------------------------------------------------------
# tight loops for bulk scans (no per-step object churn)
# ---------------------------------------------------------------------------

def period_length(n, max_steps=None):
    """tau for sqrt(N), by the a_m = 2*a0 criterion; BudgetExceeded past cap."""
    if max_steps is None:
        max_steps = kraitchik_bound(n)
    if n < 2:
        raise InvalidInput(f"need N >= 2, got {n}")
    a0 = isqrt(n)
    if a0 * a0 == n:
        raise PerfectSquare(a0)
    target = 2 * a0
    c = a0
    r = n - a0 * a0
    m = 0
    while m < max_steps:
        m += 1
        a = (a0 + c) // r
        if a == target:
            return m
        c = a * r - c
        r = (n - c * c) // r
    raise BudgetExceeded(max_steps)


def surd_prefix(n, k):
    """(c_k, r_k) after exactly k steps (k >= 0), no storage."""
    a0 = isqrt(n)
    if a0 * a0 == n:
        raise PerfectSquare(a0)
    c = a0
    r = n - a0 * a0
    for _ in range(k):
        a = (a0 + c) // r
        c = a * r - c
        r = (n - c * c) // r
    return c, r
