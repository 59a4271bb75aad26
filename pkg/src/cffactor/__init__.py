"""Factoring square-free integers via the continued fraction of sqrt(N)
and infrastructure on the principal cycle of quadratic forms."""

__version__ = "0.1.0"

from . import cf_engine, core_arith, factor_engine, oracles, qform, regulator, two_squares
from .errors import (
    BudgetExceeded,
    CFFactorError,
    DiscriminantMismatch,
    DomainError,
    EvenPeriod,
    InternalInvariant,
    InvalidInput,
    NonInvertible,
    NoSplit,
    NotIndefinite,
    OddPeriod,
    PerfectSquare,
    TrivialSplit,
)
