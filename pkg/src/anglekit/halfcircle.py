"""Angle operators built from the cosine of a shift operator.

A shift family (U, N) on a one-sided, two-sided or cyclic basis yields
cosine/sine contractions C and S, the upper and lower half-circle angle
operators ArcCos(C) and ArcCos(C) + pi, the sign isometry of S, and the
doubled-space full angle operator.  Covariance and commutator defects
are measured on interior label windows, away from truncation edges.

Sign conventions (fixed numerically, see the commutator helpers): with
U e_n = e_{n+1}, N e_n = n e_n, C = (U + U*)/2, S = (U - U*)/(2i) and
Sigma = sign(S), the finite-window identity is [ArcCos(C), N] = i Sigma,
equivalently d/dtheta of the conjugated angle at 0 equals +Sigma for
the flow exp(i theta N) (.) exp(-i theta N).
"""

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DomainError, ConvergenceError
from .linalg import BasisSpec, TruncatedOperator
from .specfun import SeriesTolerance, arccos_coefficient

__all__ = [
    "ShiftFamily",
    "CosSinPair",
    "build_shift_family",
    "ladder_from_shift",
    "cos_sin_pair",
    "angle_upper",
    "angle_lower",
    "full_angle",
    "sigma_isometry",
    "commutator_defect",
    "covariance_flow",
]

MINUS_ONE_ATOM_TOL = 1e-8  # eigenvalue within this of -1 counts as the spectral atom


@dataclass(frozen=True, eq=False)
class ShiftFamily:
    """Shift operator U and diagonal label operator N on a common basis."""

    U: TruncatedOperator
    N: TruncatedOperator
    basis: BasisSpec


@dataclass(frozen=True, eq=False)
class CosSinPair:
    C: TruncatedOperator
    S: TruncatedOperator


def build_shift_family(basis):
    """Shift U (entry 1 where label(row) = label(col) + 1) and diagonal N."""
    if basis.dim < 4:
        raise DomainError(f"shift family needs dim >= 4, got {basis.dim}")
    dim = basis.dim
    U = np.zeros((dim, dim), dtype=complex)
    for col in range(dim - 1):
        U[col + 1, col] = 1.0
    if basis.mode == "cyclic":
        U[0, dim - 1] = 1.0
    N = np.diag(basis.labels().astype(float)).astype(complex)
    return ShiftFamily(
        U=TruncatedOperator(U, basis),
        N=TruncatedOperator(N, basis),
        basis=basis,
    )


def ladder_from_shift(fam):
    """Raising/lowering pair a+ = U sqrt(N+... ) on the one-sided basis.

    a+ e_n = sqrt(n+1) e_{n+1} with the last column truncated, and
    a- = (a+)^H exactly.
    """
    if fam.basis.mode != "one_sided":
        raise DomainError("ladder operators need a one_sided basis")
    dim = fam.basis.dim
    a_plus = np.zeros((dim, dim), dtype=complex)
    for n in range(dim - 1):
        a_plus[n + 1, n] = math.sqrt(n + 1.0)
    a_plus_op = TruncatedOperator(a_plus, fam.basis)
    return a_plus_op, a_plus_op.H


def cos_sin_pair(fam):
    """C = (U + U*)/2 and S = (U - U*)/(2i); commuting contractions."""
    U = fam.U.entries
    C = (U + U.conj().T) / 2.0
    S = (U - U.conj().T) / 2.0j
    return CosSinPair(
        C=TruncatedOperator(C, fam.basis),
        S=TruncatedOperator(S, fam.basis),
    )


def _check_contraction_spectrum(eig, tol=1e-10):
    lo, hi = eig.eigenvalues[0], eig.eigenvalues[-1]
    if lo < -1.0 - tol or hi > 1.0 + tol:
        raise DomainError(f"spectrum [{lo}, {hi}] leaves [-1, 1] beyond tolerance {tol}")


def angle_upper(C, method="spectral", tol=None):
    """Upper half-circle angle operator ArcCos(C), spectrum in [0, pi].

    spectral: arccos applied to the (clipped) eigenvalues of C.
    series:   (pi/2) I - sum_n c_n C^{2n+1} with the MacLaurin
              coefficients c_n, summed until the term max-norm drops
              below tol.abs_tol.  Near eigenvalues +-1 the terms decay
              only like n^(-3/2), so series mode is slow there; the
              spectral route is the reference.
    """
    if tol is None:
        tol = SeriesTolerance(abs_tol=1e-10, max_terms=200_000)
    eig = linalg.hermitian_eig(C)
    _check_contraction_spectrum(eig)
    if method == "spectral":
        return linalg.spectral_function(
            C, lambda lam: math.acos(min(1.0, max(-1.0, lam))), eig=eig
        )
    if method != "series":
        raise DomainError(f"method must be 'spectral' or 'series', got {method!r}")
    dim = C.dim
    acc = np.zeros((dim, dim), dtype=complex)
    power = np.array(C.entries)  # C^{2n+1}, starting at n = 0
    C2 = C.entries @ C.entries
    for n in range(tol.max_terms):
        coeff = arccos_coefficient(n)
        acc += coeff * power
        if coeff * float(np.abs(power).max()) < tol.abs_tol:
            break
        power = power @ C2
    else:
        raise ConvergenceError("angle series exhausted max_terms before reaching abs_tol")
    out = (math.pi / 2.0) * np.eye(dim) - acc
    out = (out + out.conj().T) / 2.0
    return TruncatedOperator(out, C.basis)


def angle_lower(C):
    """Lower half-circle angle operator ArcCos(C) + pi, spectrum in [pi, 2 pi]."""
    eig = linalg.hermitian_eig(C)
    _check_contraction_spectrum(eig)
    return linalg.spectral_function(
        C, lambda lam: math.acos(min(1.0, max(-1.0, lam))) + math.pi, eig=eig
    )


def minus_one_projector(C, atom_tol=MINUS_ONE_ATOM_TOL, eig=None):
    """Spectral projector onto eigenvalues within atom_tol of -1."""
    return linalg.spectral_function(
        C, lambda lam: 1.0 if abs(lam + 1.0) <= atom_tol else 0.0, eig=eig
    )


def full_angle(fam):
    """Block angle operator on the doubled space.

    Upper block ArcCos(C); lower block ArcCos(C) + pi, corrected by
    -pi times the projector onto the C-eigenvalue -1 so the total
    spectrum stays inside [0, 2 pi] without double-covering 2 pi = 0.
    Rows are indexed 0..2 dim-1, upper block first.
    """
    pair = cos_sin_pair(fam)
    eig = linalg.hermitian_eig(pair.C)
    _check_contraction_spectrum(eig)
    upper = linalg.spectral_function(
        pair.C, lambda lam: math.acos(min(1.0, max(-1.0, lam))), eig=eig
    )
    lower = linalg.spectral_function(
        pair.C, lambda lam: math.acos(min(1.0, max(-1.0, lam))) + math.pi, eig=eig
    )
    atom = minus_one_projector(pair.C, eig=eig)
    dim = fam.basis.dim
    out = np.zeros((2 * dim, 2 * dim), dtype=complex)
    out[:dim, :dim] = upper.entries
    out[dim:, dim:] = lower.entries - math.pi * atom.entries
    return TruncatedOperator(out, BasisSpec("one_sided", 2 * dim, 0))


def sigma_isometry(S, zero_tol=None):
    """Sign part of S from its polar decomposition S = Sigma |S|."""
    return linalg.sign_part(S, zero_tol=zero_tol)


def interior_window(basis, margin):
    """Label window [offset + margin, offset + dim - 1 - margin]."""
    if margin < 0 or 2 * margin >= basis.dim:
        raise DomainError(f"margin {margin} leaves no interior for dim {basis.dim}")
    lo = basis.offset + margin
    hi = basis.offset + basis.dim - 1 - margin
    return lo, hi


def commutator_defect(fam, angle, sigma, window_margin):
    """Max-norm defect of [angle, N] - i sigma on an interior window.

    This orientation of the commutator (angle first) is the one the
    truncated model satisfies; the defect decays as the truncation
    grows at a fixed window.
    """
    if fam.basis.mode == "one_sided":
        raise DomainError("commutator defect needs a two_sided or cyclic basis")
    lo, hi = interior_window(fam.basis, window_margin)
    dev = linalg.commutator(angle, fam.N) - 1j * sigma
    return linalg.op_norm_max(linalg.window_restrict(dev, lo, hi))


def covariance_flow(fam, theta, window_margin=None, route_tol=1e-10):
    """Rotate the pair (C, S) by theta and rebuild the angle operator.

    The conjugation exp(i theta N) . exp(-i theta N) is computed both
    with exact diagonal phases and with the closed forms
    cos(theta) C - sin(theta) S and cos(theta) S + sin(theta) C; the two
    must agree on the interior window before the rotated angle operator
    is formed from the closed-form cosine.
    """
    if fam.basis.mode == "one_sided":
        raise DomainError("covariance flow needs a two_sided or cyclic basis")
    if window_margin is None:
        window_margin = max(1, fam.basis.dim // 4)
    pair = cos_sin_pair(fam)
    ct, st = math.cos(theta), math.sin(theta)
    C_closed = ct * pair.C - st * pair.S
    S_closed = ct * pair.S + st * pair.C
    phases = np.exp(1j * theta * fam.basis.labels())
    conj = lambda mat: (phases[:, None] * mat) * phases.conj()[None, :]
    C_phase = TruncatedOperator(conj(pair.C.entries), fam.basis)
    S_phase = TruncatedOperator(conj(pair.S.entries), fam.basis)
    lo, hi = interior_window(fam.basis, window_margin)
    for closed, phase_route in ((C_closed, C_phase), (S_closed, S_phase)):
        dev = linalg.op_norm_max(linalg.window_restrict(closed - phase_route, lo, hi))
        if dev > route_tol:
            raise ConvergenceError(
                f"covariance routes disagree by {dev:.3e} on interior window"
            )
    A_theta = angle_upper(C_closed, method="spectral")
    return C_closed, S_closed, A_theta
