"""Generalized factorials, their exponentials and the half-index bound.

A strictly increasing sequence x_0 = 0 < x_1 < x_2 < ... defines the
factorials x_n! = x_1 x_2 ... x_n, a generalized exponential
N(t) = sum t^n / x_n!, and the series
S_k(t) = sum_n x_{k/2+n}! / (x_n! x_{n+k}!) t^{n+k/2}.  Half-integer
indices rely on the sequence's declared interpolation of log(x_nu!).
The shipped built-in is x_n = n, whose interpolation is log Gamma(nu+1).
"""

import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError
from .specfun import SeriesTolerance, ln_gamma

__all__ = [
    "FactorialSequence",
    "integer_sequence",
    "generalized_exp",
    "s_k",
    "half_factorial_bound_check",
]

DEFAULT_TOL = SeriesTolerance(abs_tol=1e-15, max_terms=100_000)


@dataclass(frozen=True)
class FactorialSequence:
    """Sequence x_n with a log-factorial interpolation and growth radius.

    log_factorial must accept any real index nu >= 0 where the
    half-index values are required; radius is lim x_{n+1} (may be inf).
    """

    x: object
    log_factorial: object
    radius: float

    def __post_init__(self):
        if self.x(0) != 0:
            raise DomainError("sequence must start at x_0 = 0")
        probe = [self.x(n) for n in range(6)]
        if any(b <= a for a, b in zip(probe, probe[1:])):
            raise DomainError("sequence must be strictly increasing")
        if abs(self.log_factorial(0.0)) > 1e-14:
            raise DomainError("log_factorial(0) must be 0 (empty product)")


def integer_sequence():
    """The x_n = n case: x_n! = n!, interpolated by Gamma(nu + 1)."""
    return FactorialSequence(
        x=lambda n: float(n),
        log_factorial=lambda nu: ln_gamma(nu + 1.0) if nu > -1.0 else math.inf,
        radius=math.inf,
    )


def generalized_exp(seq, t, tol=DEFAULT_TOL):
    """N(t) = sum_n t^n / x_n!, for t below the convergence radius."""
    if t < 0:
        raise DomainError(f"t must be nonnegative, got {t}")
    if t >= seq.radius:
        raise DomainError(f"t={t} at or beyond the convergence radius {seq.radius}")
    total = 1.0
    for n in range(1, tol.max_terms):
        term = math.exp(n * math.log(t) - seq.log_factorial(float(n))) if t > 0 else 0.0
        total += term
        if term < tol.abs_tol * total:
            return total
    raise ConvergenceError("generalized exponential did not converge")


def s_k(seq, k, t, tol=DEFAULT_TOL):
    """S_k(t) = sum_n x_{k/2+n}! / (x_n! x_{n+k}!) t^{n+k/2}."""
    if k < 0:
        raise DomainError(f"k must be nonnegative, got {k}")
    if t < 0:
        raise DomainError(f"t must be nonnegative, got {t}")
    if t >= seq.radius:
        raise DomainError(f"t={t} at or beyond the convergence radius {seq.radius}")
    if t == 0.0:
        return 0.0 if k > 0 else 1.0
    log_t = math.log(t)
    total = 0.0
    for n in range(tol.max_terms):
        term = math.exp(
            seq.log_factorial(k / 2.0 + n)
            - seq.log_factorial(float(n))
            - seq.log_factorial(float(n + k))
            + (n + k / 2.0) * log_t
        )
        total += term
        if n > 2 and term < tol.abs_tol * total:
            return total
    raise ConvergenceError(f"S_k series did not converge for k={k}, t={t}")


def half_factorial_bound_check(seq, n1, n2):
    """Cauchy-Schwarz bound x_{(n1+n2)/2}! <= sqrt(x_{n1}! x_{n2}!), in logs."""
    lhs = seq.log_factorial((n1 + n2) / 2.0)
    rhs = 0.5 * (seq.log_factorial(float(n1)) + seq.log_factorial(float(n2)))
    return lhs <= rhs + 1e-12 * max(1.0, abs(rhs))
