import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from anglekit import linalg
from anglekit.errors import BasisMismatchError, DomainError
from anglekit.linalg import (
    BasisSpec,
    TruncatedOperator,
    anti_hermitian_exp,
    commutator,
    from_matrix,
    hermitian_eig,
    op_norm_max,
    sign_part,
    spectral_function,
    window_restrict,
)
from conftest import random_hermitian


def cyclic_cosine(dim):
    """C = (U + U*)/2 for the cyclic shift; eigenvalues cos(2 pi k / dim)."""
    U = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        U[(col + 1) % dim, col] = 1.0
    return from_matrix((U + U.conj().T) / 2.0, mode="cyclic")


# --------------------------------------------------------------- types

def test_basis_spec_validation():
    with pytest.raises(DomainError):
        BasisSpec("sideways", 4)
    with pytest.raises(DomainError):
        BasisSpec("one_sided", 4, offset=1)
    with pytest.raises(DomainError):
        BasisSpec("cyclic", 0)
    spec = BasisSpec("two_sided", 6, -3)
    assert list(spec.labels()) == [-3, -2, -1, 0, 1, 2]
    assert spec.row_of(-3) == 0


def test_operator_requires_square_finite():
    with pytest.raises(DomainError):
        from_matrix(np.ones((2, 3)))
    with pytest.raises(DomainError):
        from_matrix(np.array([[np.inf, 0.0], [0.0, 1.0]]))
    with pytest.raises(DomainError):
        TruncatedOperator(np.eye(3), BasisSpec("one_sided", 4))


# ----------------------------------------------------------- eigensolve

def test_eig_diagonal_permutation():
    es = hermitian_eig(from_matrix(np.diag([3.0, 1.0, 2.0])))
    assert np.allclose(es.eigenvalues, [1.0, 2.0, 3.0])
    # columns are the permutation sending sorted values to their slots
    assert np.allclose(np.abs(es.eigenvectors), np.eye(3)[:, [1, 2, 0]])


def test_eig_pauli_x():
    es = hermitian_eig(from_matrix(np.array([[0.0, 1.0], [1.0, 0.0]])))
    assert np.allclose(es.eigenvalues, [-1.0, 1.0])


def test_eig_cyclic_cosine_spectrum():
    # independent oracle: circulant spectrum {cos(2 pi k / 4)} = {1, 0, -1, 0}
    oracle = sorted(math.cos(2.0 * math.pi * k / 4.0) for k in range(4))
    es = hermitian_eig(cyclic_cosine(4))
    assert np.allclose(es.eigenvalues, oracle, atol=1e-12)


def test_eig_reconstruction_and_unitarity():
    op = from_matrix(random_hermitian(96, seed=7))
    es = hermitian_eig(op)
    recon = (es.eigenvectors * es.eigenvalues) @ es.eigenvectors.conj().T
    scale = op_norm_max(op)
    assert np.abs(recon - op.entries).max() <= 1e-10 * scale
    eye = np.eye(96)
    assert np.abs(es.eigenvectors.conj().T @ es.eigenvectors - eye).max() <= 1e-11
    resid = op.entries @ es.eigenvectors - es.eigenvectors * es.eigenvalues
    assert np.abs(resid).max() <= 1e-10 * scale


@given(st.integers(min_value=2, max_value=12), st.integers(min_value=0, max_value=2 ** 31))
def test_eig_values_match_lapack_oracle(dim, seed):
    mat = random_hermitian(dim, seed)
    ours = hermitian_eig(from_matrix(mat)).eigenvalues
    lapack = np.linalg.eigvalsh(mat)
    assert np.abs(ours - lapack).max() <= 1e-11 * max(1.0, np.abs(lapack).max())


def test_eig_rejects_non_hermitian():
    with pytest.raises(DomainError):
        hermitian_eig(from_matrix(np.array([[0.0, 1.0], [0.0, 0.0]])))


def test_eig_deterministic_repeat():
    mat = random_hermitian(24, seed=99)
    a = hermitian_eig(from_matrix(mat))
    b = hermitian_eig(from_matrix(mat))
    assert np.array_equal(a.eigenvalues, b.eigenvalues)
    assert np.array_equal(a.eigenvectors, b.eigenvectors)


# ---------------------------------------------------- functional calculus

def test_spectral_identity_and_constant():
    op = from_matrix(random_hermitian(20, seed=3))
    same = spectral_function(op, lambda lam: lam)
    assert op_norm_max(same - op) <= 1e-11 * op_norm_max(op)
    one = spectral_function(op, lambda lam: 1.0)
    assert np.abs(one.entries - np.eye(20)).max() <= 1e-11


def test_spectral_arccos_on_cyclic():
    ang = spectral_function(cyclic_cosine(4), lambda lam: math.acos(min(1, max(-1, lam))))
    oracle = sorted(math.acos(v) for v in (1.0, 0.0, -1.0, 0.0))
    assert np.allclose(hermitian_eig(ang).eigenvalues, oracle, atol=1e-11)


def test_spectral_composition_for_monotone_inner():
    op = from_matrix(random_hermitian(24, seed=5))
    g = math.tanh
    f = lambda lam: lam ** 2 - lam
    direct = spectral_function(op, lambda lam: f(g(lam)))
    nested = spectral_function(spectral_function(op, g), f)
    assert op_norm_max(direct - nested) <= 1e-9


# ------------------------------------------------------------- sign part

def test_sign_part_diagonal():
    sig = sign_part(from_matrix(np.diag([2.0, -3.0, 0.0])))
    assert np.allclose(sig.entries, np.diag([1.0, -1.0, 0.0]), atol=1e-12)


def test_sign_part_zero_operator():
    sig = sign_part(from_matrix(np.zeros((4, 4))))
    assert op_norm_max(sig) == 0.0


def test_sign_part_cyclic_sine_kernel_rank():
    # S for the cyclic shift at dim 8 has eigenvalues sin(2 pi k/8):
    # two vanish, so Sigma^2 projects onto rank 6
    dim = 8
    U = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        U[(col + 1) % dim, col] = 1.0
    S = from_matrix((U - U.conj().T) / 2.0j, mode="cyclic")
    sig = sign_part(S)
    assert op_norm_max(sig @ sig @ sig - sig) <= 1e-10
    rank = round(np.real(np.trace((sig @ sig).entries)))
    assert rank == 6


def test_sign_part_invertible_squares_to_identity():
    sig = sign_part(from_matrix(np.diag([1.0, -2.0, 3.0])))
    assert np.abs((sig @ sig).entries - np.eye(3)).max() <= 1e-12


# ------------------------------------------------------------ exponential

def test_exp_of_zero():
    out = anti_hermitian_exp(from_matrix(np.zeros((5, 5))))
    assert np.allclose(out.entries, np.eye(5))


def test_exp_rotation_closed_form():
    theta = 0.7321
    G = from_matrix(np.array([[0.0, theta], [-theta, 0.0]]))
    out = anti_hermitian_exp(G)
    rot = np.array(
        [[math.cos(theta), math.sin(theta)], [-math.sin(theta), math.cos(theta)]]
    )
    assert np.abs(out.entries - rot).max() <= 1e-12


def test_exp_inverse_pairs(rng):
    raw = rng.standard_normal((32, 32)) + 1j * rng.standard_normal((32, 32))
    G = from_matrix((raw - raw.conj().T) / 2.0)
    forward = anti_hermitian_exp(G)
    backward = anti_hermitian_exp(-1.0 * G)
    assert np.abs((forward @ backward).entries - np.eye(32)).max() <= 1e-10


def test_exp_rejects_hermitian_input():
    with pytest.raises(DomainError):
        anti_hermitian_exp(from_matrix(np.diag([1.0, 2.0])))


# --------------------------------------------------- commutator & window

def test_commutator_with_self_vanishes():
    op = from_matrix(random_hermitian(10, seed=8))
    assert op_norm_max(commutator(op, op)) == 0.0


def test_commutator_of_diagonals_vanishes():
    a = from_matrix(np.diag([1.0, 2.0, 3.0]))
    b = from_matrix(np.diag([-1.0, 0.5, 4.0]))
    assert op_norm_max(commutator(a, b)) == 0.0


def test_commutator_number_shift_on_window():
    # [N, U] = U holds exactly on the interior of the two-sided truncation
    dim = 32
    basis = BasisSpec("two_sided", dim, -dim // 2)
    U = np.zeros((dim, dim), dtype=complex)
    for col in range(dim - 1):
        U[col + 1, col] = 1.0
    Uop = TruncatedOperator(U, basis)
    N = TruncatedOperator(np.diag(basis.labels().astype(complex)), basis)
    dev = commutator(N, Uop) - Uop
    assert op_norm_max(window_restrict(dev, -8, 8)) <= 1e-12


def test_commutator_requires_matching_basis():
    a = from_matrix(np.eye(4), mode="one_sided")
    b = TruncatedOperator(np.eye(4), BasisSpec("two_sided", 4, -2))
    with pytest.raises(BasisMismatchError):
        commutator(a, b)


def test_window_restrict_bounds():
    basis = BasisSpec("two_sided", 8, -4)
    op = TruncatedOperator(np.diag(np.arange(8).astype(complex)), basis)
    sub = window_restrict(op, -1, 2)
    assert sub.dim == 4
    assert np.allclose(np.diag(sub.entries).real, [3.0, 4.0, 5.0, 6.0])
    with pytest.raises(DomainError):
        window_restrict(op, 10, 12)
