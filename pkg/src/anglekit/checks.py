"""Named invariant suites, runnable from the CLI and the test suite.

Each suite is a list of (invariant name, thunk) pairs; a thunk returns
(measured, tolerance) and the invariant passes when measured does not
exceed tolerance.  Anything random is seeded, so repeated runs produce
identical reports.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import circlecs, halfcircle, linalg, moments, specfun, whquant
from .errors import DomainError
from .linalg import BasisSpec, TruncatedOperator

__all__ = ["CheckParams", "CheckResult", "suite_names", "run_suite", "run_checks"]


@dataclass(frozen=True)
class CheckResult:
    suite: str
    invariant: str
    status: str
    measured: float
    tolerance: float

    @property
    def passed(self):
        return self.status == "pass"


@dataclass(frozen=True)
class CheckParams:
    """Optional narrowing of a suite; checks with spec-pinned sizes ignore it."""

    dim: int = None
    mode: str = None
    t: float = None
    sigma: float = None


def _seeded_hermitian(dim, seed):
    rng = np.random.default_rng(seed)
    raw = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return TruncatedOperator((raw + raw.conj().T) / 2.0, BasisSpec("one_sided", dim, 0))


# ---------------------------------------------------------------- specfun


def _gamma_ratio_bound(params):
    worst = -math.inf
    for n in range(0, 201, 8):
        for npr in range(n, 201, 8):
            log_ratio = specfun.ln_gamma((n + npr) / 2.0 + 1.0) - 0.5 * (
                specfun.ln_gamma(n + 1.0) + specfun.ln_gamma(npr + 1.0)
            )
            worst = max(worst, math.exp(log_ratio) - 1.0)
    return worst, 1e-12


def _laguerre_reflection(params):
    worst = 0.0
    for t in (0.1, 1.0, 5.0):
        for n in range(0, 31, 3):
            for m in range(0, n + 1, 3):
                lhs = math.exp(specfun.ln_gamma(n + 1.0)) * specfun.assoc_laguerre(n, m - n, t)
                rhs = (
                    math.exp(specfun.ln_gamma(m + 1.0))
                    * (-t) ** (n - m)
                    * specfun.assoc_laguerre(m, n - m, t)
                )
                scale = max(abs(lhs), abs(rhs), 1e-300)
                worst = max(worst, abs(lhs - rhs) / scale)
    return worst, 1e-10


def _theta_form_equality(params):
    worst = 0.0
    for sigma in (0.2, 0.5, 1.0, 2.0, 5.0, 10.0):
        for J in np.linspace(-3.0, 3.0, 13):
            d = specfun.theta3_normalizer(J, sigma, "direct")
            p = specfun.theta3_normalizer(J, sigma, "poisson")
            worst = max(worst, abs(d - p))
    return worst, 1e-11


def _gauss_summation_at_one(params):
    worst = 0.0
    for n in (1, 2, 3, 5, 8):
        for b in (0.25, 1.5, 3.0):
            for c in (4.5, 7.25, 12.0):
                a = -float(n)
                if c - a - b <= 0:
                    continue
                lhs = specfun.gauss_2f1_terminating(-n, b, c, 1.0)
                rhs = math.exp(
                    specfun.ln_gamma(c)
                    + specfun.ln_gamma(c - a - b)
                    - specfun.ln_gamma(c - a)
                    - specfun.ln_gamma(c - b)
                )
                worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return worst, 1e-10


# ----------------------------------------------------------------- linalg


def _eig_reconstruction(params):
    worst = 0.0
    for dim, seed in ((24, 11), (64, 12), (128, 13)):
        op = _seeded_hermitian(dim, seed)
        es = linalg.hermitian_eig(op)
        recon = (es.eigenvectors * es.eigenvalues) @ es.eigenvectors.conj().T
        worst = max(
            worst,
            float(np.abs(recon - op.entries).max()) / linalg.op_norm_max(op),
        )
    return worst, 1e-10


def _spectral_composition(params):
    op = _seeded_hermitian(48, 21)
    g = lambda lam: lam / (1.0 + abs(lam))  # monotone
    f = lambda lam: lam ** 3 + 0.5 * lam
    direct = linalg.spectral_function(op, lambda lam: f(g(lam)))
    nested = linalg.spectral_function(linalg.spectral_function(op, g), f)
    return linalg.op_norm_max(direct - nested), 1e-9


def _sign_part_contract(params):
    op = _seeded_hermitian(48, 22)
    sig = linalg.sign_part(op)
    herm = linalg.op_norm_max(sig - sig.H)
    cube = linalg.op_norm_max(sig @ sig @ sig - sig)
    return max(herm, cube), 1e-10


def _exp_inverse(params):
    rng = np.random.default_rng(23)
    raw = rng.standard_normal((40, 40)) + 1j * rng.standard_normal((40, 40))
    G = TruncatedOperator((raw - raw.conj().T) / 2.0, BasisSpec("one_sided", 40, 0))
    U = linalg.anti_hermitian_exp(G)
    Uinv = linalg.anti_hermitian_exp(-1.0 * G)
    eye = np.eye(40)
    return float(np.abs((U @ Uinv).entries - eye).max()), 1e-10


# -------------------------------------------------------------- halfcircle


def _angle_support(params):
    worst = 0.0
    dim = params.dim or 64
    modes = (params.mode,) if params.mode else ("cyclic", "two_sided", "one_sided")
    for mode in modes:
        offset = 0 if mode in ("cyclic", "one_sided") else -dim // 2
        fam = halfcircle.build_shift_family(BasisSpec(mode, dim, offset))
        A = halfcircle.full_angle(fam)
        herm = linalg.op_norm_max(A - A.H)
        eig = linalg.hermitian_eig(A)
        low = max(0.0, -float(eig.eigenvalues[0]))
        high = max(0.0, float(eig.eigenvalues[-1]) - 2.0 * math.pi)
        worst = max(worst, herm, low, high)
    return worst, 1e-9


def _series_vs_spectral(params):
    dim = 32
    fam = halfcircle.build_shift_family(BasisSpec("cyclic", dim, 0))
    pair = halfcircle.cos_sin_pair(fam)
    tol = specfun.SeriesTolerance(abs_tol=1e-6, max_terms=500_000)
    a_series = halfcircle.angle_upper(pair.C, method="series", tol=tol)
    a_spectral = halfcircle.angle_upper(pair.C, method="spectral")
    eig = linalg.hermitian_eig(pair.C)
    keep = np.abs(np.abs(eig.eigenvalues) - 1.0) > 1e-8
    proj = eig.eigenvectors[:, keep] @ eig.eigenvectors[:, keep].conj().T
    diff = proj @ (a_series.entries - a_spectral.entries) @ proj
    return float(np.abs(diff).max()), 50 * 1e-6


def _contraction_norms(params):
    dim = params.dim or 96
    fam = halfcircle.build_shift_family(BasisSpec("two_sided", dim, -dim // 2))
    pair = halfcircle.cos_sin_pair(fam)
    worst = 0.0
    for op in (pair.C, pair.S):
        eig = linalg.hermitian_eig(op)
        worst = max(worst, float(np.abs(eig.eigenvalues).max()) - 1.0)
    return worst, 1e-12


def _power_commutator_identity(params):
    dim = 128
    fam = halfcircle.build_shift_family(BasisSpec("two_sided", dim, -dim // 2))
    pair = halfcircle.cos_sin_pair(fam)
    lo, hi = halfcircle.interior_window(fam.basis, 32)
    worst = 0.0
    prev_power = np.eye(dim, dtype=complex)  # C^{n-1}
    Cn = TruncatedOperator(np.eye(dim, dtype=complex), fam.basis)
    for n in range(1, 9):
        Cn = Cn @ pair.C
        lhs = linalg.commutator(fam.N, Cn)
        rhs = 1j * n * TruncatedOperator(prev_power @ pair.S.entries, fam.basis)
        worst = max(
            worst,
            linalg.op_norm_max(linalg.window_restrict(lhs - rhs, lo, hi)),
        )
        prev_power = prev_power @ pair.C.entries
    return worst, 1e-9


def _cyclic_exact_relations(params):
    dim = params.dim or 48
    fam = halfcircle.build_shift_family(BasisSpec("cyclic", dim, 0))
    pair = halfcircle.cos_sin_pair(fam)
    eye = np.eye(dim)
    comm = linalg.op_norm_max(linalg.commutator(pair.C, pair.S))
    pyth = float(np.abs((pair.C @ pair.C + pair.S @ pair.S).entries - eye).max())
    return max(comm, pyth), 1e-12


# ---------------------------------------------------------------- whquant


def _ccr_from_quantization(params):
    quad = whquant.QuadratureScheme(n_J=96, n_gamma=64)
    dim, block = 96, 48
    worst = 0.0
    t_values = (params.t,) if params.t is not None else (0.0, 0.3, 0.6)
    for t in t_values:
        weight = whquant.WeightSpec(kind="cahill_glauber", t=t)
        Az = whquant.quantize({1: ((lambda J: 1.0), 1)}, weight, quad, dim)
        Azb = whquant.quantize({-1: ((lambda J: 1.0), 1)}, weight, quad, dim)
        K = linalg.commutator(Az, Azb)
        dev = np.abs(K.entries - np.eye(dim))[:block, :block].max()
        worst = max(worst, float(dev))
    return worst, 1e-5


def _angle_matrix_structure(params):
    A = whquant.angle_matrix(params.t if params.t is not None else 0.25, params.dim or 48)
    herm = linalg.op_norm_max(A - A.H)
    diag = float(np.abs(np.real(np.diag(A.entries)) - math.pi).max())
    return max(herm, diag), 1e-12


def _angle_covariance_symbol_shift(params):
    dim, J, theta = 128, 50.0, 1.0
    A = whquant.angle_matrix(0.0, dim)
    weight = whquant.WeightSpec(kind="cahill_glauber", t=0.0)
    phases = np.exp(1j * theta * np.arange(dim))
    conj = TruncatedOperator((phases[:, None] * A.entries) * phases.conj()[None, :], A.basis)
    # phase pattern on the off-diagonals is exact
    expected = A.entries * np.exp(
        1j * theta * (np.arange(dim)[:, None] - np.arange(dim)[None, :])
    )
    pattern = float(np.abs(conj.entries - expected).max())
    worst = pattern
    # conjugating by e^{i n theta} drags the symbol backwards in the angle
    for gamma in (2.0, 3.5, 5.0):
        shifted = whquant.lower_symbol(
            conj, weight, whquant.PhaseSpacePoint(J, gamma), warn_leak=False
        ).real
        base = whquant.lower_symbol(
            A, weight, whquant.PhaseSpacePoint(J, (gamma - theta) % (2 * math.pi)), warn_leak=False
        ).real
        worst = max(worst, abs(shifted - base))
    return worst, 1e-3


def _f_symmetry(params):
    worst = 0.0
    for t in (0.0, 0.25, 0.5, 0.75):
        for n in range(0, 41, 5):
            for npr in range(n + 1, 41, 5):
                worst = max(
                    worst,
                    abs(whquant.f_coefficient(n, npr, t) - whquant.f_coefficient(npr, n, t)),
                )
    return worst, 1e-10


def _d_q_bound(params):
    worst = 0.0
    for q in (1, 2, 5, 10, 25, 50):
        for J in (0.5, 2.0, 10.0, 50.0, 120.0, 200.0):
            d = whquant.d_q_cs(q, J)
            worst = max(worst, -d, d - 1.0)
    return worst, 1e-12


def _wh_resolution_identity(params):
    quad = whquant.QuadratureScheme(n_J=80, n_gamma=128)
    weight = whquant.WeightSpec(kind="cahill_glauber", t=0.3)
    A = whquant.quantize({0: ((lambda J: 1.0), 0)}, weight, quad, 64)
    dev = np.abs(A.entries - np.eye(64))[:16, :16].max()
    return float(dev), 1e-6


def _fourier_taylor_bridge(params):
    # partial sums of the odd-harmonic cosine series against |theta|
    worst = 0.0
    Q = 400
    for theta in np.linspace(-math.pi + 0.3, math.pi - 0.3, 9):
        acc = math.pi / 2.0
        for n in range(Q):
            acc -= (4.0 / math.pi) * math.cos((2 * n + 1) * theta) / (2 * n + 1) ** 2
        worst = max(worst, abs(acc - abs(theta)))
    return worst, 1.0 / Q


def _boltzmann_diagonal(params):
    t, dim = 0.5, 32
    rho = whquant.m_s_diagonal(t, dim)
    diag = np.real(np.diag(rho.entries))
    nonneg = max(0.0, -float(diag.min()))
    decreasing = max(0.0, float(np.max(np.diff(diag))))
    trace_dev = abs(float(diag.sum()) - (1.0 - t ** dim))
    return max(nonneg, decreasing, trace_dev), 1e-12


# ---------------------------------------------------------------- circlecs


def _circle_resolution_identity(params):
    dim = 64
    basis = BasisSpec("two_sided", dim, -dim // 2)
    dist = circlecs.gaussian_distribution(1.0)
    span = dim / 3.0
    one = circlecs.quantize_cyl_grid(dist, basis, lambda J, phi: 1.0, j_span=(-span, span))
    labels = basis.labels()
    interior = np.where(np.abs(labels) <= span - 6.5)[0]
    block = one.entries[np.ix_(interior, interior)]
    return float(np.abs(block - np.eye(interior.size)).max()), 1e-6


def _state_normalization(params):
    dist = circlecs.gaussian_distribution(params.sigma or 1.0)
    dim = params.dim or 64
    basis = BasisSpec("two_sided", dim, -dim // 2)
    worst = 0.0
    for J in (-7.3, 0.0, 2.5, 11.0):
        for phi in (0.0, 1.1):
            vec = circlecs.cs_vector(dist, circlecs.CylinderPoint(J, phi), basis)
            worst = max(worst, abs(float(np.linalg.norm(vec)) - 1.0))
    return worst, 1e-12


def _action_is_number(params):
    dist = circlecs.gaussian_distribution(params.sigma or 1.0)
    dim = params.dim or 48
    basis = BasisSpec("two_sided", dim, -dim // 2)
    A = circlecs.quantize_cyl(dist, basis, f_action=lambda J: J)
    return (
        float(np.abs(A.entries - np.diag(basis.labels().astype(complex))).max()),
        1e-9,
    )


def _circle_covariance_shift(params):
    sigma, dim, theta = 10.0, 200, 1.0
    dist = circlecs.gaussian_distribution(sigma)
    basis = BasisSpec("two_sided", dim, -dim // 2)
    A = circlecs.quantize_cyl(
        dist, basis, fourier_angle=circlecs.circle_sawtooth_fourier(dim - 1)
    )
    labels = basis.labels()
    phases = np.exp(1j * theta * labels)
    conj = TruncatedOperator((phases[:, None] * A.entries) * phases.conj()[None, :], basis)
    expected = A.entries * np.exp(1j * theta * (labels[:, None] - labels[None, :]))
    worst = float(np.abs(conj.entries - expected).max())
    for phi in (2.0, 4.0):
        shifted = circlecs.lower_symbol_cyl(conj, dist, circlecs.CylinderPoint(0.0, phi)).real
        base = circlecs.lower_symbol_cyl(
            A, dist, circlecs.CylinderPoint(0.0, (phi + theta) % (2 * math.pi))
        ).real
        worst = max(worst, abs(shifted - base))
    return worst, 1e-2


def _d_m_bound(params):
    worst = 0.0
    for sigma in (0.5, 1.0, 5.0):
        dist = circlecs.gaussian_distribution(sigma)
        for m in (1, 2, 5):
            for J in (0.0, 0.4, 3.7):
                d = circlecs.d_m_sigma(dist, m, J)
                worst = max(worst, d - 1.0, -d)
    return worst, 1e-12


def _overlap_symmetry_spot(params):
    dist = circlecs.gaussian_distribution(1.0)
    rng = np.random.default_rng(31)
    worst = 0.0
    for _ in range(5):
        n, npr = int(rng.integers(-8, 9)), int(rng.integers(-8, 9))
        sep = abs(n - npr)

        def integrand(J):
            return math.sqrt(
                max(dist.pdf(J - n), 0.0) * max(dist.pdf(J - npr), 0.0)
            )

        direct = circlecs._panel_integral(
            integrand, min(n, npr) - dist.radius, max(n, npr) + dist.radius, dist.sigma
        )
        worst = max(worst, abs(direct - circlecs.overlap(dist, sep)))
    return worst, 1e-10


def _overlap_kernel_forms(params):
    dist = circlecs.gaussian_distribution(0.8)
    worst = 0.0
    for (J, phi, Jp, phip) in (
        (0.0, 0.0, 0.0, 1.0),
        (1.3, 0.4, -0.9, 2.2),
        (4.0, 5.9, 4.5, 0.3),
    ):
        d, p = circlecs.overlap_kernel(
            dist, circlecs.CylinderPoint(J, phi), circlecs.CylinderPoint(Jp, phip)
        )
        worst = max(worst, abs(d - p))
    return worst, 1e-10


def _harmonic_trend(params):
    values = []
    basis = BasisSpec("two_sided", 48, -24)
    worst = 0.0
    for sigma in (1.0, 2.0, 5.0, 10.0):
        dist = circlecs.gaussian_distribution(sigma)
        defect, p2 = circlecs.fourier_harmonic_defect(dist, basis)
        worst = max(worst, defect)
        values.append(p2)
    increasing = all(b > a for a, b in zip(values, values[1:]))
    trend_violation = 0.0 if (increasing and values[-1] > 0.99) else 1.0
    return max(worst, trend_violation), 1e-10


# ----------------------------------------------------------------- moments


def _s_k_bounded(params):
    seq = moments.integer_sequence()
    worst = -math.inf
    for k in range(0, 11):
        for t in (0.1, 1.0, 5.0, 10.0):
            bound = moments.generalized_exp(seq, t)
            worst = max(worst, (moments.s_k(seq, k, t) - bound) / bound)
    # equality holds at k = 0, so only rounding slack is allowed
    return worst, 1e-13


def _factorial_inequality(params):
    seq = moments.integer_sequence()
    rng = np.random.default_rng(41)
    fails = 0
    for _ in range(10_000):
        n1 = int(rng.integers(0, 301))
        n2 = int(rng.integers(0, 301))
        if not moments.half_factorial_bound_check(seq, n1, n2):
            fails += 1
    return float(fails), 0.0


_SUITES = {
    "specfun": [
        ("gamma_ratio_bound", _gamma_ratio_bound),
        ("laguerre_reflection", _laguerre_reflection),
        ("theta_form_equality", _theta_form_equality),
        ("gauss_summation_at_one", _gauss_summation_at_one),
    ],
    "linalg": [
        ("eig_reconstruction", _eig_reconstruction),
        ("spectral_composition", _spectral_composition),
        ("sign_part_contract", _sign_part_contract),
        ("exp_inverse", _exp_inverse),
    ],
    "halfcircle": [
        ("angle_support", _angle_support),
        ("series_vs_spectral", _series_vs_spectral),
        ("contraction_norms", _contraction_norms),
        ("power_commutator_identity", _power_commutator_identity),
        ("cyclic_exact_relations", _cyclic_exact_relations),
    ],
    "whquant": [
        ("ccr_from_quantization", _ccr_from_quantization),
        ("angle_matrix_structure", _angle_matrix_structure),
        ("angle_covariance_symbol_shift", _angle_covariance_symbol_shift),
        ("f_symmetry", _f_symmetry),
        ("d_q_bound", _d_q_bound),
        ("wh_resolution_identity", _wh_resolution_identity),
        ("fourier_taylor_bridge", _fourier_taylor_bridge),
        ("boltzmann_diagonal", _boltzmann_diagonal),
    ],
    "circlecs": [
        ("circle_resolution_identity", _circle_resolution_identity),
        ("state_normalization", _state_normalization),
        ("action_is_number", _action_is_number),
        ("circle_covariance_shift", _circle_covariance_shift),
        ("d_m_bound", _d_m_bound),
        ("overlap_symmetry_spot", _overlap_symmetry_spot),
        ("overlap_kernel_forms", _overlap_kernel_forms),
        ("harmonic_trend", _harmonic_trend),
    ],
    "moments": [
        ("s_k_bounded", _s_k_bounded),
        ("factorial_inequality", _factorial_inequality),
    ],
}


def suite_names():
    return list(_SUITES)


def _run_item(suite, name, thunk, params):
    measured, tolerance = thunk(params)
    status = "pass" if measured <= tolerance else "fail"
    return CheckResult(suite, name, status, float(measured), float(tolerance))


def run_suite(name, threads=1, params=None):
    if name not in _SUITES:
        raise DomainError(f"unknown check suite {name!r}; choose from {sorted(_SUITES)}")
    if params is None:
        params = CheckParams()
    items = _SUITES[name]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_run_item, name, inv, fn, params) for inv, fn in items]
            return [f.result() for f in futures]
    return [_run_item(name, inv, fn, params) for inv, fn in items]


def run_checks(names, threads=1, params=None):
    results = []
    for name in names:
        results.extend(run_suite(name, threads=threads, params=params))
    return results
