"""Self-contained special-function kernels.

Everything here is scalar, pure and built on elementary functions only:
log-gamma (Lanczos), terminating Gauss hypergeometric sums, Kummer's
confluent series, associated Laguerre recurrences, lattice Gaussian
(theta) normalizers and the MacLaurin coefficients of the principal
inverse-cosine branch.  All factorial/Gamma ratios are assembled in log
space before exponentiation so that nothing overflows below index ~500.
"""

import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError

__all__ = [
    "SeriesTolerance",
    "ln_gamma",
    "gauss_2f1_terminating",
    "kummer_1f1",
    "assoc_laguerre",
    "theta3_normalizer",
    "arccos_coefficient",
]


@dataclass(frozen=True)
class SeriesTolerance:
    """Truncation control for the infinite sums in this module."""

    abs_tol: float = 1e-15
    max_terms: int = 100_000

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol}")
        if self.max_terms < 1:
            raise DomainError(f"max_terms must be >= 1, got {self.max_terms}")


DEFAULT_TOL = SeriesTolerance()

# Lanczos approximation, g = 7, 9 coefficients.  Relative accuracy of the
# resulting log-gamma is ~1e-15 over the positive axis.
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_LN_PI = math.log(math.pi)
_LN_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def ln_gamma(x):
    """Natural log of the Gamma function for x > 0.

    Uses the Lanczos series directly for x >= 0.5 and the reflection
    formula below that, which keeps the relative error at the 1e-14
    level throughout (0, 500].
    """
    if not x > 0:
        raise DomainError(f"ln_gamma requires x > 0, got {x}")
    if x < 0.5:
        # reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return _LN_PI - math.log(math.sin(math.pi * x)) - ln_gamma(1.0 - x)
    z = x - 1.0
    acc = _LANCZOS_COEFFS[0]
    for i, c in enumerate(_LANCZOS_COEFFS[1:], start=1):
        acc += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _LN_SQRT_2PI + (z + 0.5) * math.log(t) - t + math.log(acc)


def _log_pochhammer(a, k):
    """(log |(a)_k|, sign, hit_zero) with sign bookkeeping for negative a."""
    log_mag = 0.0
    sign = 1.0
    for j in range(k):
        f = a + j
        if f == 0.0:
            return -math.inf, 0.0, True
        if f < 0.0:
            sign = -sign
        log_mag += math.log(abs(f))
    return log_mag, sign, False


def gauss_2f1_terminating(neg_int_a, b, c, x):
    """Terminating Gauss hypergeometric sum 2F1(-n, b; c; x).

    The first parameter must be a nonpositive integer -n; the sum has
    exactly n+1 terms.  Terms are produced by the ratio recurrence and
    summed with exact float accumulation; when any term outgrows 1e12
    in magnitude the whole sum is redone in log-magnitude form so the
    large cancellations cost no more than one rounding at the end.

    Raises DomainError if a denominator Pochhammer factor vanishes
    while the running term is still nonzero.
    """
    n = -int(neg_int_a)
    if n < 0 or neg_int_a != -n:
        raise DomainError(f"first parameter must be a nonpositive integer, got {neg_int_a}")
    a = float(neg_int_a)
    term = 1.0
    terms = [term]
    overflow = False
    for k in range(n):
        num = (a + k) * (b + k)
        if num == 0.0:
            break  # all later terms vanish through the same factor
        den = c + k
        if den == 0.0:
            raise DomainError(
                f"2F1 denominator (c)_k vanished at k={k + 1} for c={c} before termination"
            )
        term = term * num / den * x / (k + 1.0)
        if term == 0.0:
            break
        terms.append(term)
        if abs(term) > 1e12:
            overflow = True
    if not overflow:
        return math.fsum(terms)
    # log-magnitude accumulation: scale by the largest term first
    logs = []
    for k in range(len(terms)):
        la, sa, za = _log_pochhammer(a, k)
        lb, sb, zb = _log_pochhammer(b, k)
        lc, sc, zc = _log_pochhammer(c, k)
        if za or zb:
            break
        lg = la + lb - lc - ln_gamma(k + 1.0) + k * math.log(abs(x)) if x != 0.0 else (-math.inf if k else 0.0)
        sgn = sa * sb * sc * (1.0 if x >= 0.0 or k % 2 == 0 else -1.0)
        logs.append((lg, sgn))
    top = max(lg for lg, _ in logs)
    return math.exp(top) * math.fsum(s * math.exp(lg - top) for lg, s in logs)


def kummer_1f1(a, b, x, tol=DEFAULT_TOL):
    """Confluent hypergeometric 1F1(a; b; x) by direct series.

    Intended for the a, b > 0, x >= 0 regime where every term is
    positive and the ratio recurrence is stable.
    """
    if x < 0:
        raise DomainError(f"kummer_1f1 requires x >= 0, got {x}")
    if b <= 0 and b == int(b):
        raise DomainError(f"kummer_1f1 pole: b is a nonpositive integer ({b})")
    term = 1.0
    total = 1.0
    for k in range(tol.max_terms):
        term = term * (a + k) / (b + k) * x / (k + 1.0)
        total += term
        if abs(term) < tol.abs_tol * abs(total):
            return total
    raise ConvergenceError(
        f"1F1({a};{b};{x}) did not converge within {tol.max_terms} terms"
    )


def assoc_laguerre(n, alpha, t):
    """Associated Laguerre polynomial L_n^(alpha)(t), three-term recurrence.

    For negative integer alpha = -k with n >= k the polynomial carries
    an explicit (-t)^k factor; the recurrence cannot resolve it through
    the cancellations, so that case is routed through the exact
    reflection L_n^{(-k)} = (-t)^k (n-k)!/n! L_{n-k}^{(k)}.
    """
    if n < 0:
        raise DomainError(f"assoc_laguerre requires n >= 0, got {n}")
    if alpha < 0 and alpha == int(alpha) and n + alpha >= 0:
        k = -int(alpha)
        if k > 0:
            log_ratio = ln_gamma(n - k + 1.0) - ln_gamma(n + 1.0)
            return (-t) ** k * math.exp(log_ratio) * assoc_laguerre(n - k, k, t)
    if n == 0:
        return 1.0
    prev = 1.0
    cur = 1.0 + alpha - t
    for k in range(1, n):
        prev, cur = cur, ((2.0 * k + 1.0 + alpha - t) * cur - (k + alpha) * prev) / (k + 1.0)
    return cur


def theta3_normalizer(J, sigma, form="direct", tol=DEFAULT_TOL):
    """Periodic Gaussian lattice normalizer N^sigma(J).

    direct form:  (2 pi sigma^2)^(-1/2) sum_n exp(-(J-n)^2 / (2 sigma^2))
    poisson form: 1 + 2 sum_{n>=1} cos(2 pi n J) exp(-2 sigma^2 pi^2 n^2)

    The two are equal (Poisson summation); the poisson form is written
    as a cosine series so its imaginary part is identically zero.
    Terms are added symmetrically outward until they drop below
    tol.abs_tol; they decrease monotonically past the lattice mode.
    """
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    if form == "direct":
        pref = 1.0 / math.sqrt(2.0 * math.pi * sigma * sigma)
        inv2s2 = 1.0 / (2.0 * sigma * sigma)
        center = round(J)
        total = math.exp(-((J - center) ** 2) * inv2s2)
        for k in range(1, tol.max_terms):
            up = math.exp(-((J - (center + k)) ** 2) * inv2s2)
            dn = math.exp(-((J - (center - k)) ** 2) * inv2s2)
            total += up + dn
            if up + dn < tol.abs_tol:
                return pref * total
        raise ConvergenceError("theta3_normalizer direct sum exhausted max_terms")
    if form == "poisson":
        damp = 2.0 * sigma * sigma * math.pi * math.pi
        total = 1.0
        for k in range(1, tol.max_terms):
            amp = math.exp(-damp * k * k)
            total += 2.0 * math.cos(2.0 * math.pi * k * J) * amp
            if 2.0 * amp < tol.abs_tol:
                return total
        raise ConvergenceError("theta3_normalizer poisson sum exhausted max_terms")
    raise DomainError(f"form must be 'direct' or 'poisson', got {form!r}")


def arccos_coefficient(n):
    """MacLaurin coefficient (2n)! / (2^{2n} (n!)^2 (2n+1)) of ArcCos.

    Computed in log space; exact to ~1e-15 relative through n ~ 500.
    """
    if n < 0:
        raise DomainError(f"arccos_coefficient requires n >= 0, got {n}")
    if n == 0:
        return 1.0
    log_c = ln_gamma(2.0 * n + 1.0) - 2.0 * n * math.log(2.0) - 2.0 * ln_gamma(n + 1.0)
    return math.exp(log_c) / (2.0 * n + 1.0)
