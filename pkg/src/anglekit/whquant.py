"""Weyl-Heisenberg integral quantization on the truncated Fock basis.

Displacement operators are built entrywise from associated Laguerre
recurrences with running rescaling, so entries stay accurate far past
the point where factorials overflow.  The quantization map integrates
f(z) D(z) rho D(z)* over the plane with a trapezoid rule in the angle
and generalized Gauss-Laguerre rules in the action J = |z|^2: the
radial integrand of a matrix entry on diagonal offset d carries a
factor J^{|d|/2}, so offsets are routed to the alpha = 0 or alpha = 1/2
rule according to the parity of |d| plus the declared half-power of the
Fourier coefficient.  This keeps the map polynomial-exact at t = 0.

Angle quantization enters twice: as the explicit quadrature and as the
closed-form matrix with entries i F_{nn'}(t) / (n' - n) built from
terminating hypergeometric sums.  Both normalizations follow the same
published convention; see f_coefficient for the fine print at t > 0.
"""

import functools
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_genlaguerre

from .errors import DomainError, QuadratureWarning, TruncationWarning
from .linalg import BasisSpec, TruncatedOperator
from . import linalg
from .specfun import SeriesTolerance, gauss_2f1_terminating, kummer_1f1, ln_gamma

__all__ = [
    "WeightSpec",
    "PhaseSpacePoint",
    "QuadratureScheme",
    "displacement_laguerre",
    "coherent_state",
    "m_s_diagonal",
    "t_from_s",
    "quantize",
    "f_coefficient",
    "angle_matrix",
    "sawtooth_fourier",
    "lower_symbol",
    "d_q_cs",
    "d_q_series",
    "symbol_sine_coefficients",
    "action_angle_commutator",
    "commutator_symbol",
    "canonical_angle_B",
    "covariance_checks",
]


def t_from_s(s):
    """Map the Gaussian weight parameter s <= -1 to t = (s+1)/(s-1) in [0, 1).

    The mapping is fixed by matching the diagonal of the weight-defined
    operator to the geometric (Boltzmann-type) density (1-t) t^n.
    """
    if s > -1.0:
        raise DomainError(f"density regime needs s <= -1, got {s}")
    return (s + 1.0) / (s - 1.0)


@dataclass(frozen=True)
class WeightSpec:
    """Weight choice for the quantization map.

    kind 'cahill_glauber' uses the geometric diagonal (1-t) t^n derived
    from the Gaussian weight; kind 'density_diagonal' takes an explicit
    nonnegative diagonal summing to 1.
    """

    kind: str = "cahill_glauber"
    t: float = 0.0
    diag: tuple = None

    def __post_init__(self):
        if self.kind not in ("cahill_glauber", "density_diagonal"):
            raise DomainError(f"unknown weight kind {self.kind!r}")
        if not 0.0 <= self.t < 1.0:
            raise DomainError(f"t must lie in [0, 1), got {self.t}")
        if self.kind == "density_diagonal":
            if self.diag is None:
                raise DomainError("density_diagonal weight needs an explicit diag")
            d = np.asarray(self.diag, dtype=float)
            if np.any(d < 0):
                raise DomainError("density diagonal must be nonnegative")
            if abs(d.sum() - 1.0) > 1e-12:
                raise DomainError(f"density diagonal must sum to 1, got {d.sum()}")

    def diagonal(self, dim):
        if self.kind == "density_diagonal":
            d = np.zeros(dim)
            src = np.asarray(self.diag, dtype=float)
            d[: min(dim, src.size)] = src[:dim]
            return d
        n = np.arange(dim)
        if self.t == 0.0:
            d = np.zeros(dim)
            d[0] = 1.0
            return d
        return (1.0 - self.t) * self.t ** n


@dataclass(frozen=True)
class PhaseSpacePoint:
    """Action-angle coordinates, z = sqrt(J) exp(i gamma)."""

    J: float
    gamma: float

    def __post_init__(self):
        if self.J < 0:
            raise DomainError(f"J must be nonnegative, got {self.J}")
        if not 0.0 <= self.gamma < 2.0 * math.pi:
            raise DomainError(f"gamma must lie in [0, 2 pi), got {self.gamma}")

    @property
    def z(self):
        return math.sqrt(self.J) * complex(math.cos(self.gamma), math.sin(self.gamma))


@functools.lru_cache(maxsize=32)
def _radial_rule(n_points, alpha):
    """Nodes/weights for integral_0^inf e^{-J} J^alpha g(J) dJ."""
    nodes, weights = roots_genlaguerre(n_points, alpha)
    return nodes, weights


@dataclass(frozen=True)
class QuadratureScheme:
    """Phase-space product rule: generalized Gauss-Laguerre x trapezoid."""

    n_J: int = 96
    n_gamma: int = 128

    def __post_init__(self):
        if self.n_J < 8 or self.n_gamma < 8:
            raise DomainError("quadrature needs n_J >= 8 and n_gamma >= 8")
        if self.n_J > 160:
            raise DomainError("n_J beyond 160 loses the small radial weights")

    def radial_rule(self, alpha):
        return _radial_rule(self.n_J, alpha)

    def refined(self, factor=1.5):
        return QuadratureScheme(
            n_J=min(160, int(math.ceil(self.n_J * factor))),
            n_gamma=int(math.ceil(self.n_gamma * factor)),
        )


def _fill_lower_triangle(z, dim):
    """Entries on and below the diagonal of D(z) via scaled recurrences.

    Along offset a = m - n >= 0 the entry is e^{-J/2} z^a S_n with
    S_n = sqrt(n!/(n+a)!) L_n^{(a)}(J); the three-term recurrence for
    S_n is rescaled whenever its running magnitude leaves [1e-100, 1e100]
    so intermediate Laguerre growth never overflows.
    """
    J = abs(z) ** 2
    out = np.zeros((dim, dim), dtype=complex)
    if z == 0:
        np.fill_diagonal(out, 1.0)
        return out
    log_abs_z = math.log(abs(z))
    unit = z / abs(z)
    for a in range(dim):
        pref_ln = -J / 2.0 + a * log_abs_z
        phase = unit ** a
        s_prev = 0.0
        s_cur = math.exp(-0.5 * ln_gamma(a + 1.0))
        scale_ln = 0.0
        for n in range(dim - a):
            val_ln = pref_ln + scale_ln
            if val_ln > -745.0:
                out[n + a, n] = (s_cur * math.exp(val_ln)) * phase
            s_next = (
                (2.0 * n + 1.0 + a - J) * s_cur
                - math.sqrt(n * (n + a)) * s_prev
            ) / math.sqrt((n + 1.0) * (n + 1.0 + a))
            s_prev, s_cur = s_cur, s_next
            mag = max(abs(s_cur), abs(s_prev))
            if mag > 1e100 or (0.0 < mag < 1e-100):
                s_cur /= mag
                s_prev /= mag
                scale_ln += math.log(mag)
    return out


def displacement_laguerre(z, dim):
    """Truncated displacement matrix D(z) from the Laguerre formula.

    The upper triangle comes from the reflection D_{mn}(z) equal to the
    conjugate of D_{nm}(-z), which is the footnote identity between
    L_n^{(m-n)} and L_m^{(n-m)} in disguise.
    """
    if dim < 2:
        raise DomainError(f"displacement needs dim >= 2, got {dim}")
    z = complex(z)
    lower = _fill_lower_triangle(z, dim)
    lower_neg = _fill_lower_triangle(-z, dim)
    full = lower
    iu = np.triu_indices(dim, 1)
    full[iu] = lower_neg.conj().T[iu]
    return TruncatedOperator(full, BasisSpec("one_sided", dim, 0))


def coherent_state(z, dim):
    """Normalized coherent state vector, components e^{-|z|^2/2} z^n / sqrt(n!).

    This is D(z) applied to the vacuum; unit norm forces the exponent
    |z|^2/2 (the unnormalized variant differs only there).
    """
    if dim < 2:
        raise DomainError(f"coherent state needs dim >= 2, got {dim}")
    z = complex(z)
    if z == 0:
        v = np.zeros(dim, dtype=complex)
        v[0] = 1.0
        return v
    n = np.arange(dim)
    lg = np.array([ln_gamma(k + 1.0) for k in range(dim)])
    log_mag = -abs(z) ** 2 / 2.0 + n * math.log(abs(z)) - 0.5 * lg
    return np.exp(log_mag) * np.exp(1j * np.angle(z) * n)


def m_s_diagonal(t, dim):
    """Geometric density rho_t = (1-t) sum t^n |e_n><e_n|, trace 1 - t^dim."""
    weight = WeightSpec(kind="cahill_glauber", t=t)
    return TruncatedOperator(
        np.diag(weight.diagonal(dim)).astype(complex), BasisSpec("one_sided", dim, 0)
    )


def _normalize_fourier(fourier):
    """Accept {q: callable} or {q: (callable, half_power)}; return the latter."""
    out = {}
    for q, spec in fourier.items():
        if callable(spec):
            out[int(q)] = (spec, 0)
        else:
            g, s = spec
            if s not in (0, 1):
                raise DomainError(f"half_power must be 0 or 1, got {s}")
            out[int(q)] = (g, int(s))
    return out


def _poisson_tail_log(J, dim):
    """Log upper bound on the Poisson mass e^{-J} sum_{n >= dim} J^n/n!."""
    if J <= 0:
        return -math.inf
    if J >= dim + 1:
        return 0.0
    head = -J + dim * math.log(J) - ln_gamma(dim + 1.0)
    return head - math.log(1.0 - J / (dim + 1.0))


def quantize(fourier, weight, quad, dim, check_resolution=False):
    """Integral quantization of f(J, gamma) = sum_q c_q(J) e^{i q gamma}.

    Parameters
    ----------
    fourier : dict
        Map q -> c_q, each either a callable of J or a pair
        (g, half_power) meaning c_q(J) = g(J) * J**(half_power/2).
        Declaring the half power keeps the radial rule polynomial-exact.
    weight : WeightSpec
    quad : QuadratureScheme
    dim : int
        Truncation dimension of the output operator.
    check_resolution : bool
        When True, recompute at 1.5x nodes and warn if the max-norm of
        the difference exceeds 1e-6.
    """
    result = _quantize_once(_normalize_fourier(fourier), weight, quad, dim)
    if check_resolution:
        refined = _quantize_once(_normalize_fourier(fourier), weight, quad.refined(), dim)
        drift = linalg.op_norm_max(refined - result)
        if drift > 1e-6:
            warnings.warn(
                f"quantize changed by {drift:.3e} under 1.5x refinement",
                QuadratureWarning,
                stacklevel=2,
            )
    return result


def _quantize_once(fourier, weight, quad, dim):
    rho = weight.diagonal(dim)
    basis = BasisSpec("one_sided", dim, 0)
    out = np.zeros((dim, dim), dtype=complex)
    displaced = {}
    for alpha in (0.0, 0.5):
        nodes, _ = quad.radial_rule(alpha)
        mats = []
        for J in nodes:
            Dz = _fill_lower_triangle(math.sqrt(J), dim)
            Dzn = _fill_lower_triangle(-math.sqrt(J), dim)
            iu = np.triu_indices(dim, 1)
            Dz[iu] = Dzn.conj().T[iu]
            mats.append((Dz * rho) @ Dz.conj().T)
        displaced[alpha] = mats
    for q, (g, s) in fourier.items():
        for d in range(-(dim - 1), dim):
            if (q - d) % quad.n_gamma != 0:
                continue  # trapezoid sum of e^{i(q-d)gamma} vanishes
            alpha = 0.5 if (abs(d) + s) % 2 == 1 else 0.0
            nodes, wts = quad.radial_rule(alpha)
            rows = np.arange(max(0, -d), min(dim, dim - d))
            cols = rows + d
            acc = np.zeros(rows.size, dtype=complex)
            for J, w, MJ in zip(nodes, wts, displaced[alpha]):
                if w <= 0.0 or J <= 0.0:
                    continue
                log_w = math.log(w) + J + (s / 2.0 - alpha) * math.log(J)
                if log_w > 700.0:
                    continue  # weight underflowed upstream; mass is negligible
                acc += (math.exp(log_w) * g(J)) * MJ[rows, cols]
            out[rows, cols] += acc
    return TruncatedOperator(out, basis)


def f_coefficient(n, n_prime, t):
    """Angle-matrix coefficient F_{nn'}(t), evaluated in the safe order.

    F is symmetric under swapping n and n'; the hypergeometric sum is
    only well-conditioned when the first index is the smaller one, so
    the pair is normalized to min/max before evaluating (the swapped
    order hits a vanishing lower Pochhammer for even separations).

    Note: at t = 0 this reduces to Gamma((n+n')/2 + 1)/sqrt(n! n'!),
    which matches the quantization map exactly; for t > 0 the published
    closed form, reproduced here, carries one factor (1-t) more than
    the map itself produces (the map's matrix equals this one divided
    by (1-t)).  All contracted identities pin t = 0.
    """
    if n == n_prime:
        raise DomainError("f_coefficient is defined off the diagonal (n != n')")
    if not 0.0 <= t < 1.0:
        raise DomainError(f"t must lie in [0, 1), got {t}")
    lo, hi = (n, n_prime) if n < n_prime else (n_prime, n)
    if lo < 0:
        raise DomainError("indices must be nonnegative")
    log_mag = (
        ln_gamma((lo + hi) / 2.0 + 1.0)
        - 0.5 * (ln_gamma(lo + 1.0) + ln_gamma(hi + 1.0))
        + (1.0 + (hi - lo) / 2.0) * math.log1p(-t)
    )
    f21 = gauss_2f1_terminating(-lo, (hi - lo) / 2.0, -(lo + hi) / 2.0, t)
    return math.exp(log_mag) * f21


def angle_matrix(t, dim):
    """Closed-form angle operator: pi on the diagonal, i F_{nn'}/(n'-n) off it."""
    out = np.zeros((dim, dim), dtype=complex)
    np.fill_diagonal(out, math.pi)
    for n in range(dim):
        for np_ in range(n + 1, dim):
            val = 1j * f_coefficient(n, np_, t) / (np_ - n)
            out[n, np_] = val
            out[np_, n] = val.conjugate()
    return TruncatedOperator(out, BasisSpec("one_sided", dim, 0))


def sawtooth_fourier(q_max):
    """Fourier data of the 2 pi-periodic angle function: c_0 = pi, c_q = i/q."""
    fourier = {0: ((lambda J: math.pi), 0)}
    for q in range(1, q_max + 1):
        fourier[q] = ((lambda J, q=q: 1j / q), 0)
        fourier[-q] = ((lambda J, q=q: -1j / q), 0)
    return fourier


def lower_symbol(A, weight, point, warn_leak=True):
    """Covariant symbol tr(D(z) rho D(z)* A) at a phase-space point.

    Real (to eigen accuracy) when A is Hermitian and rho a density;
    emits TruncationWarning when the displaced state's Poisson tail
    past the truncation exceeds 1e-10.
    """
    dim = A.dim
    if warn_leak and _poisson_tail_log(point.J, dim) > math.log(1e-10):
        warnings.warn(
            f"state at J={point.J} leaks past truncation dim={dim}",
            TruncationWarning,
            stacklevel=2,
        )
    rho = weight.diagonal(dim)
    z = point.z
    if rho[0] == 1.0:
        vec = coherent_state(z, dim)
        return complex(vec.conj() @ A.entries @ vec)
    Dz = displacement_laguerre(z, dim).entries
    X = A.entries @ Dz
    overlaps = np.einsum("mk,mk->k", Dz.conj(), X)
    return complex(np.sum(rho * overlaps))


def d_q_cs(q, J, tol=None):
    """Sine-series coefficient of the angle symbol at t = 0.

    d_q = e^{-J} J^{q/2} Gamma(q/2+1)/Gamma(q+1) 1F1(q/2+1; q+1; J),
    evaluated in log space; positive and bounded by 1.
    """
    if q < 1:
        raise DomainError(f"q must be a positive integer, got {q}")
    if J < 0:
        raise DomainError(f"J must be nonnegative, got {J}")
    if J == 0.0:
        return 0.0
    if tol is None:
        tol = SeriesTolerance(abs_tol=1e-16, max_terms=200_000)
    log_pref = -J + (q / 2.0) * math.log(J) + ln_gamma(q / 2.0 + 1.0) - ln_gamma(q + 1.0)
    hyp = kummer_1f1(q / 2.0 + 1.0, q + 1.0, J, tol=tol)
    return math.exp(log_pref + math.log(hyp))


def _laguerre_value(n, alpha, x):
    if n == 0:
        return 1.0
    prev, cur = 1.0, 1.0 + alpha - x
    for k in range(1, n):
        prev, cur = cur, ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0)
    return cur


def d_q_series(q, J, t, n_max=200, rel_tol=1e-13):
    """Reference evaluation of the published general-t symbol coefficient.

    Reproduces the triple Laguerre sum as displayed, with one repair:
    the last partial sum starts strictly above m = q + n (as printed,
    the m = q + n term is counted twice).  Restricted to q <= 12,
    J <= 20, t <= 0.5 where the products stay in range.  At t = 0 this
    provably collapses to d_q_cs; for t > 0 the displayed expression is
    NOT consistent with the trace of the angle matrix against displaced
    densities (it even exceeds its stated bound of 1), so general-t
    sine coefficients should be taken from symbol_sine_coefficients,
    which is the quadrature-free trace route.
    """
    if q < 1 or q > 12:
        raise DomainError(f"d_q_series supports 1 <= q <= 12, got {q}")
    if not 0.0 <= J <= 20.0:
        raise DomainError(f"d_q_series supports J in [0, 20], got {J}")
    if not 0.0 <= t <= 0.5:
        raise DomainError(f"d_q_series supports t in [0, 0.5], got {t}")
    if J == 0.0:
        return 0.0
    log_j = math.log(J)
    pref = (q / 2.0 + 2.0) * math.log1p(-t * t) - J
    total = 0.0
    for n in range(n_max):
        gam = ln_gamma(q / 2.0 + n + 1.0)
        f21 = gauss_2f1_terminating(-n, q / 2.0, -q / 2.0 - n, t)
        inner = 0.0
        log_fact_qn = ln_gamma(q + n + 1.0)
        log_fact_n = ln_gamma(n + 1.0)
        for m in range(0, n + 1):
            if t == 0.0 and m > 0:
                break
            log_t = m * math.log(t) if m > 0 else 0.0
            term = math.exp(
                log_t + ln_gamma(m + 1.0) - log_fact_qn - log_fact_n
                + (q / 2.0 + n - m) * log_j
            )
            inner += term * _laguerre_value(m, n - m, J) * _laguerre_value(m, q + n - m, J)
        if t > 0.0:
            for m in range(n + 1, q + n + 1):
                term = math.exp(m * math.log(t) - log_fact_qn + (q / 2.0) * log_j)
                inner += ((-1.0) ** (m + n)) * term * _laguerre_value(n, m - n, J) * _laguerre_value(m, q + n - m, J)
            for m in range(q + n + 1, q + n + 1 + n_max):
                term = math.exp(m * math.log(t) - ln_gamma(m + 1.0) + (m - q / 2.0 - n) * log_j)
                contrib = ((-1.0) ** q) * term * _laguerre_value(n, m - n, J) * _laguerre_value(q + n, m - q - n, J)
                inner += contrib
                if abs(contrib) < 1e-18 * (abs(inner) + 1e-300):
                    break
        piece = math.exp(gam) * f21 * inner
        total += piece
        if n > 2 * J and abs(piece) < rel_tol * abs(total):
            break
    return math.exp(pref) * total


def symbol_sine_coefficients(A, weight, J, q_max, n_gamma=None):
    """Fourier-sine coefficients d_q of the symbol via the trace route.

    Samples the lower symbol on a uniform angle grid and reads the
    coefficients of sin(q gamma) off the FFT, normalized so that the
    symbol is pi - 2 sum_q d_q sin(q gamma)/q.
    """
    if n_gamma is None:
        n_gamma = max(64, 4 * q_max)
    grid = 2.0 * math.pi * np.arange(n_gamma) / n_gamma
    vals = np.array(
        [lower_symbol(A, weight, PhaseSpacePoint(J, g), warn_leak=False).real for g in grid]
    )
    spectrum = np.fft.rfft(vals) / n_gamma
    qs = np.arange(1, q_max + 1)
    return np.array([spectrum[q].imag * q for q in qs])


def action_angle_commutator(t, dim):
    """Commutator [A_angle, A_J] with A_J = N + 1 (the shift drops out)."""
    A = angle_matrix(t, dim)
    AJ = TruncatedOperator(
        np.diag(np.arange(dim) + 1.0).astype(complex), BasisSpec("one_sided", dim, 0)
    )
    return linalg.commutator(A, AJ)


def commutator_symbol(point, t, dim):
    """Lower symbol of [A_angle, A_J]; approaches -i at large J away from the comb."""
    K = action_angle_commutator(t, dim)
    weight = WeightSpec(kind="cahill_glauber", t=t)
    return lower_symbol(K, weight, point)


def canonical_angle_B(dim, mode="cyclic", q_cutoff=0):
    """Canonical angle operator pi I + i sum_{1<=n<=Q} (U^n - U^{-n})/n."""
    if mode not in ("cyclic", "two_sided"):
        raise DomainError("canonical angle needs a cyclic or two_sided basis")
    offset = 0 if mode == "cyclic" else -(dim // 2)
    basis = BasisSpec(mode, dim, offset)
    U = np.zeros((dim, dim), dtype=complex)
    for col in range(dim - 1):
        U[col + 1, col] = 1.0
    if mode == "cyclic":
        U[0, dim - 1] = 1.0
    out = math.pi * np.eye(dim, dtype=complex)
    Upow = np.eye(dim, dtype=complex)
    Udag_pow = np.eye(dim, dtype=complex)
    for n in range(1, q_cutoff + 1):
        Upow = Upow @ U
        Udag_pow = Udag_pow @ U.conj().T
        out += (1j / n) * (Upow - Udag_pow)
    return TruncatedOperator(out, basis)


def _phase_diag(dim, theta, parity=False):
    n = np.arange(dim)
    if parity:
        return np.where(n % 2 == 0, 1.0, -1.0).astype(complex)
    return np.exp(1j * theta * n)


def covariance_checks(z, z_prime, theta, dim, weight=None, quad=None):
    """Defect report for the displacement covariance identities.

    Returns max-norm defects on the top-left dim/2 block for
    (a) the addition formula D(z)D(z') = e^{(z zb' - zb z')/2} D(z+z'),
    (b) rotation covariance U(theta) D(z) U(theta)* = D(e^{i theta} z),
    (c) parity covariance P D(z) P = D(-z),
    (d) translation covariance of the map, A_{f(z - z0)} = D(z0) A_f D(z0)*
        probed with f(z) = z and z0 = z'.
    """
    if dim < 8:
        raise DomainError("covariance checks need dim >= 8")
    half = dim // 2
    Dz = displacement_laguerre(z, dim).entries
    Dzp = displacement_laguerre(z_prime, dim).entries
    phase = np.exp((z * np.conj(z_prime) - np.conj(z) * z_prime) / 2.0)
    Dsum = displacement_laguerre(z + z_prime, dim).entries
    addition = float(np.abs((Dz @ Dzp - phase * Dsum))[:half, :half].max())

    ph = _phase_diag(dim, theta)
    rotated = (ph[:, None] * Dz) * ph.conj()[None, :]
    Drot = displacement_laguerre(np.exp(1j * theta) * z, dim).entries
    rotation = float(np.abs(rotated - Drot)[:half, :half].max())

    par = _phase_diag(dim, 0.0, parity=True)
    reflected = (par[:, None] * Dz) * par[None, :]
    Dneg = displacement_laguerre(-z, dim).entries
    parity = float(np.abs(reflected - Dneg)[:half, :half].max())

    if weight is None:
        weight = WeightSpec(kind="cahill_glauber", t=0.0)
    if quad is None:
        quad = QuadratureScheme(n_J=96, n_gamma=64)
    Az = quantize({1: ((lambda J: 1.0), 1)}, weight, quad, dim)
    z0 = z_prime
    shifted = Az.entries - z0 * np.eye(dim)
    conjugated = Dzp @ Az.entries @ Dzp.conj().T
    translation = float(np.abs(shifted - conjugated)[:half, :half].max())

    return {
        "addition": addition,
        "rotation": rotation,
        "parity": parity,
        "translation": translation,
    }
