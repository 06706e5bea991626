"""Dense complex Hermitian linear algebra on truncated operators.

The eigensolver is a cyclic Jacobi iteration with complex rotations and
a fixed sweep order, so identical inputs give bit-identical output on a
given platform.  Everything downstream (spectral functional calculus,
sign/polar parts, anti-Hermitian exponentials) is built on it.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import BasisMismatchError, ConvergenceError, DomainError

__all__ = [
    "BasisSpec",
    "TruncatedOperator",
    "EigenSystem",
    "hermitian_eig",
    "spectral_function",
    "sign_part",
    "anti_hermitian_exp",
    "commutator",
    "op_norm_max",
    "window_restrict",
]

_MODES = ("one_sided", "two_sided", "cyclic")


@dataclass(frozen=True)
class BasisSpec:
    """Indexing convention mapping abstract basis labels to matrix rows.

    one_sided labels 0..dim-1, two_sided labels offset..offset+dim-1
    (offset typically -dim//2), cyclic labels 0..dim-1 understood mod dim.
    """

    mode: str
    dim: int
    offset: int = 0

    def __post_init__(self):
        if self.mode not in _MODES:
            raise DomainError(f"mode must be one of {_MODES}, got {self.mode!r}")
        if self.dim < 1:
            raise DomainError(f"dim must be positive, got {self.dim}")
        if self.mode in ("one_sided", "cyclic") and self.offset != 0:
            raise DomainError(f"{self.mode} basis requires offset 0, got {self.offset}")

    def labels(self):
        return np.arange(self.offset, self.offset + self.dim)

    def row_of(self, label):
        if self.mode == "cyclic":
            return int(label) % self.dim
        row = int(label) - self.offset
        if not 0 <= row < self.dim:
            raise DomainError(f"label {label} outside basis range")
        return row


@dataclass(frozen=True, eq=False)
class TruncatedOperator:
    """Dense complex square matrix plus the basis labelling its rows."""

    entries: np.ndarray
    basis: BasisSpec

    def __post_init__(self):
        mat = np.asarray(self.entries, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DomainError(f"entries must be square, got shape {mat.shape}")
        if not (np.all(np.isfinite(mat.real)) and np.all(np.isfinite(mat.imag))):
            raise DomainError("entries contain non-finite values")
        if mat.shape[0] != self.basis.dim:
            raise DomainError(
                f"basis dim {self.basis.dim} does not match matrix dim {mat.shape[0]}"
            )
        object.__setattr__(self, "entries", mat)

    @property
    def dim(self):
        return self.basis.dim

    @property
    def H(self):
        return TruncatedOperator(self.entries.conj().T, self.basis)

    def same_basis(self, other):
        return self.basis == other.basis

    def __matmul__(self, other):
        _require_same_basis(self, other)
        return TruncatedOperator(self.entries @ other.entries, self.basis)

    def __add__(self, other):
        _require_same_basis(self, other)
        return TruncatedOperator(self.entries + other.entries, self.basis)

    def __sub__(self, other):
        _require_same_basis(self, other)
        return TruncatedOperator(self.entries - other.entries, self.basis)

    def __mul__(self, scalar):
        return TruncatedOperator(self.entries * scalar, self.basis)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Ascending eigenvalues and the unitary matrix of column eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _require_same_basis(a, b):
    if a.basis != b.basis:
        raise BasisMismatchError(f"basis mismatch: {a.basis} vs {b.basis}")


def identity_like(op):
    return TruncatedOperator(np.eye(op.dim, dtype=complex), op.basis)


def from_matrix(entries, basis=None, mode="one_sided", offset=0):
    """Wrap a bare matrix, synthesizing a BasisSpec when none is given."""
    entries = np.asarray(entries, dtype=complex)
    if basis is None:
        basis = BasisSpec(mode, entries.shape[0], offset)
    return TruncatedOperator(entries, basis)


def op_norm_max(op):
    """Max absolute entry."""
    mat = op.entries if isinstance(op, TruncatedOperator) else np.asarray(op)
    return float(np.abs(mat).max()) if mat.size else 0.0


def _offdiag_frobenius(mat):
    off = mat.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def hermitian_eig(op, max_sweeps=60, rel_off_tol=1e-14):
    """Eigendecomposition of a Hermitian operator by cyclic Jacobi sweeps.

    Rotations run in a fixed (p, q) row order; each pivot is annihilated
    by a phase rotation composed with a real Jacobi rotation.  Sweeps
    stop once the off-diagonal Frobenius mass drops below
    rel_off_tol * ||M||_F (with a stagnation guard at the float64
    rounding floor).  Output eigenvalues ascend; ties keep sweep order,
    so the result is deterministic.

    Raises ConvergenceError if max_sweeps is exhausted, and DomainError
    for visibly non-Hermitian input.
    """
    mat = op.entries
    dim = op.dim
    scale = op_norm_max(op)
    if scale > 0 and op_norm_max(from_matrix(mat - mat.conj().T, op.basis)) > 1e-12 * scale:
        raise DomainError("hermitian_eig requires a Hermitian matrix")
    A = np.array(mat, dtype=complex)
    V = np.eye(dim, dtype=complex)
    norm_f = float(np.linalg.norm(A))
    if norm_f == 0.0:
        return EigenSystem(np.zeros(dim), V)
    target = rel_off_tol * norm_f
    skip = target / dim
    floor = 1e-12 * norm_f
    prev_off = math.inf
    converged = False
    for _ in range(max_sweeps):
        off = _offdiag_frobenius(A)
        if off <= target or (off >= prev_off and off <= floor):
            converged = True
            break
        prev_off = off
        for p in range(dim - 1):
            for q in range(p + 1, dim):
                apq = A[p, q]
                r = abs(apq)
                if r <= skip:
                    continue
                phase = apq / r
                tau = (A[q, q].real - A[p, p].real) / (2.0 * r)
                t = (1.0 if tau >= 0.0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                sph = s * phase
                sphc = s * phase.conjugate()
                colp = A[:, p].copy()
                colq = A[:, q].copy()
                A[:, p] = c * colp - sphc * colq
                A[:, q] = sph * colp + c * colq
                rowp = A[p, :].copy()
                rowq = A[q, :].copy()
                A[p, :] = c * rowp - sph * rowq
                A[q, :] = sphc * rowp + c * rowq
                A[p, q] = 0.0
                A[q, p] = 0.0
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - sphc * vq
                V[:, q] = sph * vp + c * vq
    if not converged:
        raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps (dim {dim})")
    w = np.real(np.diag(A))
    order = np.argsort(w, kind="stable")
    return EigenSystem(w[order], V[:, order])


def spectral_function(op, f, eig=None):
    """Apply a real function to a Hermitian operator through its spectrum.

    Computes V f(Lambda) V^H and symmetrizes the product, which keeps
    the output Hermitian to rounding.  A precomputed EigenSystem can be
    passed to reuse a decomposition.
    """
    es = eig if eig is not None else hermitian_eig(op)
    fvals = np.array([f(lam) for lam in es.eigenvalues], dtype=float)
    out = (es.eigenvectors * fvals) @ es.eigenvectors.conj().T
    out = (out + out.conj().T) / 2.0
    return TruncatedOperator(out, op.basis)


def sign_part(op, zero_tol=None, eig=None):
    """Spectral sign with a dead zone: 0 on |lambda| <= zero_tol, else +-1.

    zero_tol defaults to 1e-8 * max|entry|, separating the true kernel
    from rounding noise.  The output satisfies Sigma = Sigma^3.
    """
    if zero_tol is None:
        zero_tol = 1e-8 * op_norm_max(op)

    def thresholded_sign(lam):
        if abs(lam) <= zero_tol:
            return 0.0
        return 1.0 if lam > 0 else -1.0

    return spectral_function(op, thresholded_sign, eig=eig)


def anti_hermitian_exp(op):
    """Unitary exponential of an anti-Hermitian operator.

    Diagonalizes the Hermitian matrix -iG and exponentiates i*lambda on
    the spectrum, so the result is unitary to the eigensolver tolerance.
    """
    scale = op_norm_max(op)
    if scale > 0:
        defect = op_norm_max(from_matrix(op.entries + op.entries.conj().T, op.basis))
        if defect > 1e-12 * scale:
            raise DomainError("anti_hermitian_exp requires G^H = -G")
    herm = TruncatedOperator(-1j * op.entries, op.basis)
    es = hermitian_eig(herm)
    out = (es.eigenvectors * np.exp(1j * es.eigenvalues)) @ es.eigenvectors.conj().T
    return TruncatedOperator(out, op.basis)


def commutator(a, b):
    """AB - BA on a shared basis."""
    _require_same_basis(a, b)
    return TruncatedOperator(a.entries @ b.entries - b.entries @ a.entries, a.basis)


def window_restrict(op, lo, hi):
    """Principal submatrix over basis labels in [lo, hi] inclusive."""
    labels = op.basis.labels()
    keep = np.where((labels >= lo) & (labels <= hi))[0]
    if keep.size == 0:
        raise DomainError(f"window [{lo}, {hi}] selects no labels")
    sub = op.entries[np.ix_(keep, keep)]
    mode = "two_sided" if op.basis.mode == "two_sided" else "one_sided"
    if mode == "one_sided" and int(labels[keep[0]]) != 0:
        mode = "two_sided"
    basis = BasisSpec(mode, keep.size, int(labels[keep[0]]) if mode == "two_sided" else 0)
    return TruncatedOperator(sub, basis)
