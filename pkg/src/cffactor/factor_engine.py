"""Factoring pathways over the expansion of sqrt(N).

Four routes share the same stream of (a, c, r) surd data and A_m mod N
convergents:

  direct          even period: |Delta_{(tau-2)/2}| shares a factor with 4N
  infrastructure  giant-step to distance R*/2, then a short rho sweep
  shanks          a square Delta_m = d^2 gives gcd(A_m +- d, N) a chance
  fermat          a repeated Delta value gives A_m^2 = A_n^2 mod N

factor_auto orchestrates: strip small primes, gate on primality, stream
the expansion with opportunistic square/collision detectors, then direct
or infrastructure by period parity, falling back to the two-squares
report for odd periods.
"""

import math
import threading
from dataclasses import dataclass, field

from . import infra
from .cf_engine import kraitchik_bound, period_length, surd_prefix
from .core_arith import default_prec, gcd, is_probable_prime, isqrt, jacobi, modinv
from .errors import (
    BudgetExceeded,
    InternalInvariant,
    InvalidInput,
    NonInvertible,
    NoSplit,
    OddPeriod,
    PerfectSquare,
    TrivialSplit,
)
from .regulator import regulator_from_cf
from .two_squares import split_from_roots

#: default trial-division ceiling in factor_auto (2 alone: strip evens and
#: hand every odd N to the expansion routes)
TRIAL_BOUND = 2


@dataclass(frozen=True)
class FactorResult:
    n: int
    factors: tuple
    method: str             # direct|infrastructure|two_squares|shanks|fermat|trivial
    witness: dict = field(default_factory=dict)
    steps: dict = field(default_factory=dict)


@dataclass(frozen=True)
class GiantStepTable:
    """Doubling table: entries[j] holds 2^j . f_ell with its tracked distance."""

    entries: tuple          # of FormWithDistance
    j_t: int


def _result(n, g, method, witness=None, steps=None):
    """Build a FactorResult after validating soundness of the split."""
    if not (1 < g < n and n % g == 0):
        raise InternalInvariant(f"unsound factor {g} for {n}")
    a, b = sorted((g, n // g))
    return FactorResult(n=n, factors=(a, b), method=method,
                        witness=witness or {}, steps=steps or {})


def _proper_gcd(value, n):
    """gcd(value, N) when it is a proper factor, else None; factors of 2
    that only divide 4N fall out of the gcd on their own."""
    g = gcd(value, n)
    return g if 1 < g < n else None


def factor_direct(n, max_steps=None):
    """Midpoint factor for even periods: gcd(|Delta_{(tau-2)/2}|, N).

    Raises OddPeriod(tau) when tau is odd (use the two-squares route),
    NoSplit when the midpoint value divides 4N only trivially.
    """
    if n < 2:
        raise InvalidInput(f"need N >= 2, got {n}")
    tau = period_length(n, max_steps)
    if tau % 2:
        raise OddPeriod(tau)
    mid = (tau - 2) // 2
    _, r_mid = surd_prefix(n, mid)
    steps = {"cf_steps": tau + mid}
    witness = {"tau": tau, "index": mid, "delta_abs": r_mid,
               "jacobi_2_n": jacobi(2, n) if n % 2 else None}
    g = _proper_gcd(r_mid, n)
    if g is None:
        raise NoSplit(f"midpoint value {r_mid} gives no proper factor",
                      witness=witness)
    return _result(n, g, "direct", witness, steps)


def verify_unit_split(n, a_tau_minus_1_mod_n):
    """(g, splits) with g = gcd(A_{tau-1} - 1 mod N, N); splits iff proper."""
    g = gcd((a_tau_minus_1_mod_n - 1) % n, n)
    return g, 1 < g < n


def _stream(n, budget, cancel=None):
    """Yield (m, a, c, r, A_m mod N, A_{m-1} mod N) for m >= 1."""
    a0 = isqrt(n)
    c, r = a0, n - a0 * a0
    A_prev, A = 1, a0 % n
    m = 0
    while m < budget:
        if cancel is not None and not m % 4096 and cancel.is_set():
            return
        m += 1
        a = (a0 + c) // r
        c = a * r - c
        r = (n - c * c) // r
        A_prev, A = A, (a * A + A_prev) % n
        yield m, a, c, r, A, A_prev


def factor_shanks_squares(n, budget=None, cancel=None):
    """Square values in the Delta sequence: Delta_m = d^2 at odd m means
    A_m^2 = d^2 mod N, so gcd(A_m +- d, N) may split N.

    Walks at most one period (or `budget` steps, BudgetExceeded if that
    cap cuts the walk short).  The trivial square Delta = 1 at the period
    end carries no information and is skipped.
    """
    if n < 2:
        raise InvalidInput(f"need N >= 2, got {n}")
    cap = budget if budget is not None else kraitchik_bound(n)
    a0 = isqrt(n)
    if a0 * a0 == n:
        raise PerfectSquare(a0)
    squares = 0
    steps = 0
    for m, a, c, r, A, _ in _stream(n, cap, cancel):
        steps = m
        if a == 2 * a0:
            raise NoSplit("period exhausted without a splitting square",
                          witness={"tau": m, "squares_seen": squares})
        # Delta_m > 0 exactly at odd m; only those give A^2 = d^2 mod N
        if m % 2 and r > 1:
            d = isqrt(r)
            if d * d == r:
                squares += 1
                for g in (gcd(A - d, n), gcd(A + d, n)):
                    if 1 < g < n:
                        return _result(n, g, "shanks",
                                       {"index": m, "square_root": d},
                                       {"cf_steps": steps, "squares_seen": squares})
    raise BudgetExceeded(cap)


def factor_fermat_collision(n, budget=None, cancel=None):
    """Equal Delta values at indices m != n inside the half period give
    A_m^2 = A_n^2 mod N; both gcd(A_m +- A_n, N) are tried.

    Symmetric pairs (m + n = tau - 2) repeat by the period symmetry and
    are excluded.
    """
    if n < 2:
        raise InvalidInput(f"need N >= 2, got {n}")
    cap = budget if budget is not None else kraitchik_bound(n)
    a0 = isqrt(n)
    if a0 * a0 == n:
        raise PerfectSquare(a0)
    seen = {}              # signed Delta -> list of (index, A mod N)
    tau = None
    steps = 0
    for m, a, c, r, A, _ in _stream(n, cap, cancel):
        steps = m
        if a == 2 * a0:
            tau = m
            break
        delta = r if m % 2 else -r
        seen.setdefault(delta, []).append((m, A))
    if tau is None:
        raise BudgetExceeded(cap)
    half = tau / 2
    collisions = 0
    for entries in seen.values():
        if len(entries) < 2:
            continue
        for i in range(len(entries)):
            mi, Ai = entries[i]
            if mi >= half:
                continue
            for j in range(i + 1, len(entries)):
                mj, Aj = entries[j]
                if mj >= half or mi + mj == tau - 2:
                    continue
                collisions += 1
                for g in (gcd(Ai - Aj, n), gcd(Ai + Aj, n)):
                    if 1 < g < n:
                        return _result(n, g, "fermat",
                                       {"indices": (mi, mj)},
                                       {"cf_steps": steps,
                                        "collisions_seen": collisions})
    raise NoSplit("no informative Delta collision in the half period",
                  witness={"tau": tau, "collisions_seen": collisions})


# ---------------------------------------------------------------------------
# infrastructure (giant steps)
# ---------------------------------------------------------------------------

def _sweep(q, x, n, a0, width, cancel=None):
    """Walk rho+- from (q, x) up to `width` steps each way; return a proper
    gcd(leading coefficient, N) if one shows up."""
    g = _proper_gcd(q, n)
    if g:
        return g, 0
    qf, xf = q, x
    qb, xb = q, x
    for s in range(1, width + 1):
        if cancel is not None and cancel.is_set():
            return None, s
        qf, xf = infra.module_step_forward(qf, xf, n, a0)
        g = _proper_gcd(qf, n)
        if g:
            return g, s
        qb, xb = infra.module_step_backward(qb, xb, n, a0)
        g = _proper_gcd(qb, n)
        if g:
            return g, s
    return None, width


def factor_infrastructure(n, r_star, prec=None, sweep_width=None, cancel=None):
    """Giant-step to distance R*/2, then sweep for a factor of 4N.

    r_star is ln(A_{tau-1} + B_{tau-1} sqrt N) (from the regulator module,
    CF or analytic route).  Composition count stays within 2*ceil(log2(R*/
    d_ell)) plus the sweep; a wrong r_star (odd tau, bad class number
    guess) surfaces as NoSplit after the widened sweep.
    """
    if n < 2:
        raise InvalidInput(f"need N >= 2, got {n}")
    a0 = isqrt(n)
    if a0 * a0 == n:
        raise PerfectSquare(a0)
    r_star = float(r_star)
    if r_star <= 0:
        raise InvalidInput("r_star must be positive")
    iota = infra.iota_float(n)
    base = iota(a0)
    if sweep_width is None:
        sweep_width = 64 + 8 * n.bit_length()

    # step 1: initial form at the smallest ell >= 2 with d_ell > ln 2
    c, r = a0, n - a0 * a0
    d_paper = 0.0
    delta = base
    ell = 0
    while True:
        d_paper += iota(c)
        a = (a0 + c) // r
        if a == 2 * a0:
            # the period closed before ell: tau = ell + 1 is tiny, finish directly
            tau = ell + 1
            if tau % 2:
                raise NoSplit("odd tiny period", witness={"tau": tau})
            _, r_mid = surd_prefix(n, (tau - 2) // 2)
            g = _proper_gcd(r_mid, n)
            if g is None:
                raise NoSplit("tiny-period midpoint gives no factor",
                              witness={"tau": tau, "delta_abs": r_mid})
            return _result(n, g, "infrastructure",
                           {"tau": tau, "degenerate": True}, {"cf_steps": tau})
        c = a * r - c
        r = (n - c * c) // r
        ell += 1
        delta += iota(c)
        if ell >= 2 and d_paper > math.log(2):
            break
    q, x = r, c

    # step 2: table depth
    j_t = max(1, math.ceil(math.log2(r_star / d_paper)))

    # step 3: doubling table [2^j . f_ell] with tracked ideal deltas
    table = [(q, x, delta)]
    compositions = 0
    for _ in range(j_t):
        q1, x1, d1 = table[-1]
        q3, x3 = infra.module_product(q1, x1, q1, x1, n)
        q3, x3, adj, _, _ = infra.reduce_module(q3, x3, n, a0, iota)
        compositions += 1
        table.append((q3, x3, d1 + d1 + adj))

    # step 4: binary descent keeping the running distance below R*/2
    target = r_star / 2 + base
    cur = None
    for j in range(j_t, -1, -1):
        qj, xj, dj = table[j]
        if cur is None:
            if dj <= target:
                cur = (qj, xj, dj)
            continue
        qc, xc, dc = cur
        if dc + dj - base <= target:
            q3, x3 = infra.module_product(qc, xc, qj, xj, n)
            q3, x3, adj, _, _ = infra.reduce_module(q3, x3, n, a0, iota)
            compositions += 1
            cur = (q3, x3, dc + dj + adj)
    if cur is None:
        cur = table[0]

    # step 5: rho sweep around the landing point
    steps = {"compositions": compositions, "j_t": j_t, "cf_steps": ell}
    for width in (sweep_width, 4 * sweep_width):
        g, used = _sweep(cur[0], cur[1], n, a0, width, cancel)
        if g:
            steps["rho_steps"] = used
            return _result(n, g, "infrastructure",
                           {"ell": ell, "d_ell": d_paper, "landing": cur[0]},
                           steps)
    steps["rho_steps"] = 5 * sweep_width
    raise NoSplit("sweep exhausted around the landing point",
                  witness={"ell": ell, "j_t": j_t}, )


def build_giant_step_table(fd_ell, j_t, prec=96):
    """Doubling table at full precision (FormWithDistance entries)."""
    from .qform import double
    entries = [fd_ell]
    for _ in range(j_t):
        entries.append(double(entries[-1], prec=prec))
    return GiantStepTable(entries=tuple(entries), j_t=j_t)


# ---------------------------------------------------------------------------
# orchestration
# ---------------------------------------------------------------------------

@dataclass
class AutoConfig:
    trial_bound: int = TRIAL_BOUND
    direct_budget: int | None = None      # CF steps before switching routes
    prec: int | None = None
    use_analytic_r_star: bool = False
    h_max: int = 6                        # class-number guesses, analytic route
    sweep_width: int | None = None
    threads: int = 1
    deterministic: bool = True


def _trial_strip(n, bound):
    """First prime divisor <= bound, or None."""
    if bound >= 2 and n % 2 == 0:
        return 2
    if bound >= 3 and n % 3 == 0:
        return 3
    d = 5
    while d <= bound and d * d <= n:
        if n % d == 0:
            return d
        if n % (d + 2) == 0 and d + 2 <= bound:
            return d + 2
        d += 6
    return None


def _auto_scan(n, budget, cancel=None):
    """One streaming pass: period detection plus opportunistic detectors.

    Square and collision events are collected, not acted on, so that the
    direct midpoint route keeps precedence whenever the period closes
    inside the budget.  Returns tau (or None), the final convergent
    A_{tau-1} mod N, square events (m, A, d), captured square roots of -1,
    and Delta-collision candidates.
    """
    a0 = isqrt(n)
    out = {"tau": None, "a_last": None, "squares": [], "roots": [],
           "collisions": [], "steps": 0}
    seen = {}
    roots = set()
    for m, a, c, r, A, A_prev in _stream(n, budget, cancel):
        out["steps"] = m
        if a == 2 * a0:
            out["tau"] = m
            out["a_last"] = A_prev
            break
        if r > 1:
            d = isqrt(r)
            if d * d == r:
                if m % 2:
                    # positive square: congruence of squares A^2 = d^2
                    out["squares"].append((m, A, d))
                else:
                    # negative square: A^2 = -d^2, so A/d is a root of -1
                    g = gcd(d, n)
                    if 1 < g < n:
                        out["squares"].append((m, A, d))
                    else:
                        s = A * pow(d, -1, n) % n
                        if s not in roots and (n - s) not in roots:
                            roots.add(s)
                            out["roots"].append((m, s))
        delta = r if m % 2 else -r
        prior = seen.get(delta)
        if prior is None:
            seen[delta] = (m, A)
        else:
            out["collisions"].append((prior, (m, A)))
    return out


def _evaluate_squares(n, squares):
    """gcd tests over recorded square events; returns (g, witness) or Nones."""
    for m, A, d in squares:
        if m % 2 == 0:
            g = gcd(d, n)
            if 1 < g < n:
                return g, {"index": m, "square_gcd": d}
            continue
        for g in (gcd(A - d, n), gcd(A + d, n)):
            if 1 < g < n:
                return g, {"index": m, "square_root": d}
    return None, None


def _evaluate_collisions(n, collisions, tau):
    """gcd tests over recorded Delta collisions, symmetry pairs excluded."""
    half = tau / 2 if tau else math.inf
    for (mi, Ai), (mj, Aj) in collisions:
        if mi >= half or mj >= half:
            continue
        if tau and mi + mj == tau - 2:
            continue
        for g in (gcd(Ai - Aj, n), gcd(Ai + Aj, n)):
            if 1 < g < n:
                return g, {"indices": (mi, mj)}
    return None, None


def _auto_single(n, config, cancel=None):
    """Sequential auto pipeline (the deterministic order)."""
    if n < 2:
        raise InvalidInput(f"need N >= 2, got {n}")
    p = _trial_strip(n, config.trial_bound)
    if p is not None and p < n:
        return _result(n, p, "trivial", {"stripped": p})
    s = isqrt(n)
    if s * s == n:
        return _result(n, s, "trivial", {"perfect_square": True})
    if is_probable_prime(n):
        raise NoSplit("probable prime", witness={"probable_prime": True})

    budget = config.direct_budget or kraitchik_bound(n)
    scan = _auto_scan(n, budget, cancel)
    steps = {"cf_steps": scan["steps"], "squares_seen": len(scan["squares"])}
    tau = scan["tau"]

    if tau is not None and tau % 2 == 0:
        mid = (tau - 2) // 2
        _, r_mid = surd_prefix(n, mid)
        steps["cf_steps"] += mid
        g = _proper_gcd(r_mid, n)
        unit_gcd, unit_splits = verify_unit_split(n, scan["a_last"])
        witness = {"tau": tau, "index": mid, "delta_abs": r_mid,
                   "unit_split_gcd": unit_gcd,
                   "jacobi_2_n": jacobi(2, n)}
        if g is not None:
            return _result(n, g, "direct", witness, steps)
        g, sw = _evaluate_squares(n, scan["squares"])
        if g:
            witness.update(sw)
            return _result(n, g, "shanks", witness, steps)
        g, cw = _evaluate_collisions(n, scan["collisions"], tau)
        if g:
            witness.update(cw)
            return _result(n, g, "fermat", witness, steps)
        if unit_splits:
            return _result(n, unit_gcd, "direct", witness, steps)
        raise NoSplit("even period but the midpoint divides 4N trivially",
                      witness=witness)

    if tau is not None:
        # odd period: two-squares representation and the sqrt(-1) route
        ell = (tau - 1) // 2
        c_l, r_l = surd_prefix(n, ell)
        x, y = sorted((c_l, r_l))
        witness = {"tau": tau, "two_squares": (x, y)}
        try:
            s1 = x * modinv(y, n) % n
            witness["sqrt_minus_one"] = s1
        except NonInvertible as e:
            return _result(n, e.gcd, "two_squares", witness, steps)
        for _, s2 in scan["roots"]:
            try:
                g, _ = split_from_roots(n, s1, s2)
                witness["second_root"] = s2
                return _result(n, g, "two_squares", witness, steps)
            except TrivialSplit:
                continue
        g, sw = _evaluate_squares(n, scan["squares"])
        if g:
            witness.update(sw)
            return _result(n, g, "shanks", witness, steps)
        g, cw = _evaluate_collisions(n, scan["collisions"], tau)
        if g:
            witness.update(cw)
            return _result(n, g, "fermat", witness, steps)
        raise NoSplit("odd period; no second square root of -1 captured",
                      witness=witness)

    # period did not close within the budget: use anything the detectors saw
    g, sw = _evaluate_squares(n, scan["squares"])
    if g:
        return _result(n, g, "shanks", sw, steps)
    g, cw = _evaluate_collisions(n, scan["collisions"], None)
    if g:
        return _result(n, g, "fermat", cw, steps)
    prec = config.prec or default_prec(n)
    if config.use_analytic_r_star:
        from .regulator import discriminant_for, hr_fast_series
        hr = hr_fast_series(discriminant_for(n), prec=min(prec, 128))
        candidates = [float(hr.hr) * s / h
                      for h in range(1, config.h_max + 1) for s in (1, 3)]
    else:
        reg = regulator_from_cf(n, prec=53, max_steps=None)
        candidates = [float(reg.r_star)]
    last = None
    for r_star in candidates:
        try:
            return factor_infrastructure(n, r_star, prec=prec,
                                         sweep_width=config.sweep_width,
                                         cancel=cancel)
        except NoSplit as e:
            last = e
    raise last or NoSplit("no route produced a factor")


def factor_auto(n, config=None):
    """Strategy orchestration; see AutoConfig for the knobs.

    With threads > 1 and deterministic off, the direct/auto scan races a
    Shanks square hunt and a Fermat collision hunt; first proper factor
    wins.  The deterministic single-thread order is the default (and the
    reproducible mode used in tests).
    """
    config = config or AutoConfig()
    if config.deterministic or config.threads <= 1:
        return _auto_single(n, config)

    from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
    cancel = threading.Event()
    strategies = [
        lambda: _auto_single(n, config, cancel),
        lambda: factor_shanks_squares(n, cancel=cancel),
        lambda: factor_fermat_collision(n, cancel=cancel),
    ]
    with ThreadPoolExecutor(max_workers=min(config.threads, len(strategies))) as ex:
        futures = {ex.submit(s) for s in strategies}
        result = None
        error = None
        while futures:
            done, futures = wait(futures, return_when=FIRST_COMPLETED)
            for f in done:
                try:
                    result = f.result()
                except (NoSplit, BudgetExceeded) as e:
                    error = e
            if result is not None:
                cancel.set()
                break
        if result is not None:
            return result
        raise error or NoSplit("all strategies failed")
