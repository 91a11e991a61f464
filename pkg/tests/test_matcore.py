"""
Unit tests for the Hermitian matrix type and the tensor-factor operations.
"""

import numpy as np
import pytest

from zerocap.utils.errors import DimensionError, NotHermitianError, NotPsdError
from zerocap.services.matcore import (
    HermitianMatrix,
    hermitian_basis,
    is_projector,
    kron_perm,
    max_entangled,
    partial_trace,
    permute,
    random_density,
    random_hermitian,
    random_unitary,
    rank,
    support_basis,
    support_projector,
)


def test_rejects_non_hermitian_input():
    with pytest.raises(NotHermitianError):
        HermitianMatrix([[0, 1], [0, 0]])


def test_rejects_factor_signature_of_wrong_size():
    with pytest.raises(DimensionError):
        HermitianMatrix(np.eye(6), (2, 2))


def test_small_asymmetry_is_hermitized():
    m = np.array([[1.0, 0.5 + 1e-12], [0.5, 2.0]])
    h = HermitianMatrix(m)
    np.testing.assert_allclose(h.entries, h.entries.conj().T)
    assert not h.entries.flags.writeable


def test_eigvals_ascending_and_trace():
    h = HermitianMatrix.diagonal([3.0, -1.0, 2.0])
    np.testing.assert_allclose(h.eigvals, [-1.0, 2.0, 3.0])
    assert h.trace() == pytest.approx(4.0)


def test_partial_trace_of_product(rng):
    a = random_density(2, rng)
    b = random_density(3, rng)
    ab = HermitianMatrix(np.kron(a, b), (2, 3))
    np.testing.assert_allclose(partial_trace(ab, [0]).entries, a, atol=1e-12)
    np.testing.assert_allclose(partial_trace(ab, [1]).entries, b, atol=1e-12)
    assert partial_trace(ab, [1]).factors == (3,)


def test_partial_trace_of_max_entangled_is_identity():
    phi = max_entangled(3)
    assert phi.trace() == pytest.approx(3.0)
    np.testing.assert_allclose(partial_trace(phi, [0]).entries, np.eye(3), atol=1e-12)


def test_permute_swaps_kron_factors(rng):
    a = HermitianMatrix(random_hermitian(2, rng))
    b = HermitianMatrix(random_hermitian(3, rng))
    swapped = permute(a.kron(b).with_factors((2, 3)), [1, 0])
    np.testing.assert_allclose(swapped.entries, np.kron(b.entries, a.entries), atol=1e-12)
    assert swapped.factors == (3, 2)


def test_kron_perm_rejects_bad_order():
    a = HermitianMatrix.identity(2)
    with pytest.raises(DimensionError):
        kron_perm([a, a], [0, 0])


def test_hermitian_basis_is_orthonormal():
    for traceless, count in ((False, 9), (True, 8)):
        basis = hermitian_basis(3, traceless=traceless)
        assert basis.shape == (count, 3, 3)
        gram = np.einsum("kij,lij->kl", basis.conj(), basis)
        np.testing.assert_allclose(gram, np.eye(count), atol=1e-12)
        if traceless:
            np.testing.assert_allclose(np.einsum("kii->k", basis), 0.0, atol=1e-12)


def test_support_projector_and_rank(rng):
    v = random_unitary(4, rng)[:, :2]
    x = HermitianMatrix(v @ np.diag([2.0, 0.5]) @ v.conj().T)
    assert rank(x) == 2
    p = support_projector(x)
    assert is_projector(p)
    np.testing.assert_allclose(p.entries, v @ v.conj().T, atol=1e-10)


def test_support_basis_rejects_indefinite():
    with pytest.raises(NotPsdError):
        support_basis(HermitianMatrix.diagonal([1.0, -0.5]))


def test_partial_traces_compose(rng):
    x = HermitianMatrix(random_hermitian(12, rng), (2, 3, 2))
    step = partial_trace(partial_trace(x, [0, 2]), [1])
    np.testing.assert_allclose(step.entries, partial_trace(x, [2]).entries, atol=1e-12)
    step = partial_trace(partial_trace(x, [0, 1]), [0])
    np.testing.assert_allclose(step.entries, partial_trace(x, [0]).entries, atol=1e-12)
    assert step.factors == (2,)


def test_eigendecomposition_reconstructs_the_matrix(rng):
    for d in (1, 3, 6):
        h = HermitianMatrix(random_hermitian(d, rng))
        v = h.eigvecs
        np.testing.assert_allclose(v @ np.diag(h.eigvals) @ v.conj().T, h.entries, atol=1e-10)
        np.testing.assert_allclose(v.conj().T @ v, np.eye(d), atol=1e-10)
