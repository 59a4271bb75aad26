"""Command-line surface: expand, two-squares, regulator, factor.

Every command can emit a JSON envelope (--json) whose big integers are
decimal strings and whose reals are {"value": <decimal string>,
"precision_bits": <int>}; exit codes are 0 (ok), 1 (no split / budget),
2 (invalid input).
"""

import argparse
import json
import sys

from mpmath import mp, workprec

from . import __version__
from .cf_engine import expand_period, period_length, surd_prefix
from .core_arith import default_prec
from .errors import (
    BudgetExceeded,
    CFFactorError,
    EvenPeriod,
    InvalidInput,
    NoSplit,
    OddPeriod,
    PerfectSquare,
)
from .factor_engine import (
    AutoConfig,
    factor_auto,
    factor_direct,
    factor_fermat_collision,
    factor_infrastructure,
    factor_shanks_squares,
)
from .regulator import (
    discriminant_for,
    hr_fast_series,
    hr_lattice_sum,
    reconcile,
    regulator_from_cf,
)
from .two_squares import legendre_two_squares, sqrt_minus_one

EXIT_OK = 0
EXIT_NO_SPLIT = 1
EXIT_INVALID = 2

#: lattice-sum cost guard for the CLI's --method=both
LATTICE_CLI_MAX_D = 2_000_000


def _real(value, prec):
    with workprec(max(prec, 53)):
        return {"value": mp.nstr(value, max(int(prec / 3.32), 8)),
                "precision_bits": prec}


def _jsonable(obj, prec=53):
    """Envelope-safe rendering: ints to decimal strings, mpf via _real."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return {"value": repr(obj), "precision_bits": 53}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v, prec) for v in obj]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v, prec) for k, v in obj.items()}
    if type(obj).__name__ == "mpf":
        return _real(obj, prec)
    return str(obj)


def _envelope(command, n, status, payload, counters=None):
    return {"command": command, "n": str(n), "status": status,
            "payload": payload, "counters": counters or {},
            "version": __version__}


def _emit(env, args):
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            json.dump(env, fh, indent=2)
            fh.write("\n")
    if getattr(args, "json", False):
        print(json.dumps(env, indent=2))
        return
    _render_text(env)


def _render_text(env):
    payload = env["payload"]
    status = env["status"]
    cmd = env["command"]
    if cmd == "expand" and status == "ok":
        qs = payload["quotients"]
        shown = qs if len(qs) <= 1000 else qs[:1000] + ["..."]
        print(f"sqrt({env['n']}): a0={payload['a0']} tau={payload['tau']}"
              f" ({payload['parity']})")
        print(f"period: {' '.join(str(q) for q in shown)}")
        print(f"midpoint: ell={payload['ell']}"
              f" c_ell={payload['c_ell']} r_ell={payload['r_ell']}")
    elif cmd == "two-squares" and status == "ok":
        print(f"{env['n']} = {payload['x']}^2 + {payload['y']}^2"
              f"   (tau={payload['tau']}, sqrt(-1)={payload['sqrt_minus_one']})")
    elif cmd == "regulator" and status == "ok":
        for key in ("r_star", "hr_fast", "hr_lattice"):
            if key in payload:
                print(f"{key} = {payload[key]['value']}"
                      f"  [{payload[key]['precision_bits']} bits]")
        for key in ("tau", "unit_norm", "D"):
            if key in payload:
                print(f"{key} = {payload[key]}")
        if "reconcile" in payload:
            print(f"reconcile: {payload['reconcile']}")
    elif cmd == "factor" and status == "ok":
        print(f"{env['n']} = {' * '.join(str(f) for f in payload['factors'])}"
              f"   method={payload['method']}")
    else:
        print(f"{cmd} {env['n']}: {status}")
        for k, v in payload.items():
            print(f"  {k} = {v}")


def _positive_int(text):
    try:
        n = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if n < 0:
        raise argparse.ArgumentTypeError("N must be nonnegative")
    return n


def _load_config(path):
    values = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or "=" not in line:
                continue
            key, _, val = line.partition("=")
            values[key.strip().replace("-", "_")] = val.strip()
    return values


_CONFIG_CASTS = {
    "limit": int, "budget": int, "prec": int, "threads": int,
    "json": lambda v: v.lower() in ("1", "true", "yes"),
    "deterministic": lambda v: v.lower() in ("1", "true", "yes"),
}


def _apply_config(args):
    if not getattr(args, "config", None):
        return
    for key, raw in _load_config(args.config).items():
        if not hasattr(args, key):
            continue
        if getattr(args, key) is None or getattr(args, key) is False:
            cast = _CONFIG_CASTS.get(key, str)
            setattr(args, key, cast(raw))


def _add_common(sub):
    sub.add_argument("n", type=_positive_int, help="the integer N")
    sub.add_argument("--json", action="store_true", default=False)
    sub.add_argument("--out", default=None, help="write the JSON envelope here")
    sub.add_argument("--config", default=None, help="key=value defaults file")


def _prime_period_report(n):
    """Odd-period extras for the factor command's prime report (budgeted)."""
    try:
        tau = period_length(n, max_steps=1_000_000)
    except CFFactorError:
        return {}
    if tau % 2 == 0:
        return {"tau": tau}
    try:
        ts = legendre_two_squares(n)
        return {"tau": tau, "two_squares": (ts.x, ts.y),
                "sqrt_minus_one": sqrt_minus_one(n)}
    except CFFactorError:
        return {"tau": tau}


def cmd_expand(args):
    limit = args.limit
    summary = expand_period(args.n, max_steps=limit)
    c_l, r_l = surd_prefix(args.n, summary.ell)
    payload = {"a0": str(summary.a0), "tau": summary.tau,
               "parity": summary.parity, "ell": summary.ell,
               "quotients": [str(q) for q in summary.quotients],
               "truncated": summary.truncated,
               "c_ell": str(c_l), "r_ell": str(r_l)}
    return _envelope("expand", args.n, "ok", payload,
                     {"cf_steps": summary.tau})


def cmd_two_squares(args):
    tau = period_length(args.n)
    ts = legendre_two_squares(args.n)
    s1 = sqrt_minus_one(args.n)
    payload = {"x": str(ts.x), "y": str(ts.y),
               "sqrt_minus_one": str(s1), "tau": tau}
    return _envelope("two-squares", args.n, "ok", payload)


def cmd_regulator(args):
    if args.prec is not None and args.prec < 1:
        raise InvalidInput("precision must be positive")
    prec = args.prec or default_prec(args.n)
    payload = {}
    counters = {}
    if args.method in ("cf", "both"):
        reg = regulator_from_cf(args.n, prec=prec)
        payload.update({"r_star": _real(reg.r_star, reg.prec),
                        "tau": reg.tau, "unit_norm": reg.unit_norm})
        counters["cf_steps"] = reg.tau
    if args.method in ("analytic", "both"):
        d = discriminant_for(args.n)
        payload["D"] = str(d)
        fast = hr_fast_series(d, prec=prec)
        payload["hr_fast"] = _real(fast.hr, fast.prec)
        counters["series_terms"] = fast.terms_used
        if d <= LATTICE_CLI_MAX_D:
            lat = hr_lattice_sum(d, prec=min(prec, 53))
            payload["hr_lattice"] = _real(lat.hr, lat.prec)
            counters["lattice_terms"] = lat.terms_used
    if args.method == "both":
        rec = reconcile(fast, reg, extended=args.n % 4 == 1)
        payload["reconcile"] = {"consistent": rec.consistent,
                                "h_estimate": rec.h_estimate,
                                "multiplier": rec.multiplier,
                                "value": rec.value}
    return _envelope("regulator", args.n, "ok", payload, counters)


def cmd_factor(args):
    n = args.n
    config = AutoConfig(direct_budget=args.budget,
                        threads=args.threads or 1,
                        deterministic=bool(args.deterministic)
                        or (args.threads or 1) <= 1)
    if args.strategy == "auto":
        result = factor_auto(n, config)
    elif args.strategy == "direct":
        result = factor_direct(n, max_steps=args.budget)
    elif args.strategy == "infrastructure":
        reg = regulator_from_cf(n, prec=53)
        result = factor_infrastructure(n, reg.r_star)
    elif args.strategy == "shanks":
        result = factor_shanks_squares(n, budget=args.budget)
    else:
        result = factor_fermat_collision(n, budget=args.budget)
    payload = {"factors": [str(f) for f in result.factors],
               "method": result.method,
               "witness": _jsonable(result.witness)}
    return _envelope("factor", n, "ok", payload, _jsonable(result.steps))


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cffactor",
        description="continued-fraction expansion, two squares, regulator, "
                    "and factoring for square-free N")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("expand", help="period of sqrt(N)")
    _add_common(p)
    p.add_argument("--limit", type=int, default=None, help="step budget")
    p.set_defaults(func=cmd_expand)

    p = subs.add_parser("two-squares", help="N = x^2 + y^2 for odd periods")
    _add_common(p)
    p.set_defaults(func=cmd_two_squares)

    p = subs.add_parser("regulator", help="R* and the analytic h*R")
    _add_common(p)
    p.add_argument("--prec", type=int, default=None, help="bits")
    p.add_argument("--method", choices=("cf", "analytic", "both"), default="cf")
    p.set_defaults(func=cmd_regulator)

    p = subs.add_parser("factor", help="factor N")
    _add_common(p)
    p.add_argument("--strategy", default="auto",
                   choices=("auto", "direct", "infrastructure", "shanks", "fermat"))
    p.add_argument("--budget", type=int, default=None, help="CF step budget")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--deterministic", action="store_true", default=False,
                   help="single-threaded fixed strategy order")
    p.set_defaults(func=cmd_factor)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INVALID if e.code not in (0, None) else EXIT_OK
    try:
        _apply_config(args)
        env = args.func(args)
        _emit(env, args)
        return EXIT_OK
    except PerfectSquare as e:
        env = _envelope(args.command, args.n, "error",
                        {"error": "perfect square", "root": str(e.root)})
        _emit(env, args)
        return EXIT_INVALID
    except (NoSplit, EvenPeriod, OddPeriod, BudgetExceeded) as e:
        payload = {"note": str(e)}
        if isinstance(e, NoSplit) and e.witness:
            witness = dict(e.witness)
            if witness.get("probable_prime"):
                witness.update(_prime_period_report(args.n))
            payload["witness"] = _jsonable(witness)
            if "two_squares" in witness:
                x, y = witness["two_squares"]
                payload["note"] = (f"odd period; two-squares: {x}^2+{y}^2; "
                                   f"sqrt(-1)={witness.get('sqrt_minus_one')}")
        if isinstance(e, EvenPeriod):
            payload["note"] = "period even; use factor"
        env = _envelope(args.command, args.n, "no_split", payload)
        _emit(env, args)
        return EXIT_NO_SPLIT
    except (InvalidInput, CFFactorError, ValueError, OSError) as e:
        env = _envelope(args.command, getattr(args, "n", ""), "error",
                        {"error": str(e)})
        _emit(env, args)
        return EXIT_INVALID


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
