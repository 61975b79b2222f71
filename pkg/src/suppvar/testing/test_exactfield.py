import numpy as np
import pytest

from src.suppvar.errors import FieldError
from src.suppvar.exactfield import (NO_SOLUTION, FieldSpec, blow_up, image_basis, in_span, inverse,
                                    kernel_basis, kron, matpow, rank, rref, solve)


def test_rejects_non_prime_characteristic():
    with pytest.raises(FieldError):
        FieldSpec(4)


def test_rejects_reducible_min_poly():
    # 1 + x^2 = (1 + x)^2 over F_2
    with pytest.raises(FieldError):
        FieldSpec(2, 2, (1, 0, 1))


def test_f4_inverses():
    F = FieldSpec(2, 2, (1, 1, 1))
    assert F.order == 4
    for a in range(1, 4):
        assert int(F.mul(a, F.inv(a))) == 1


def test_rref_and_rank_over_f3():
    F = FieldSpec(3)
    M = np.array([[1, 2, 0], [2, 1, 0], [0, 0, 1]])
    R, rk, pivots = rref(F, M)
    assert rk == 2
    assert pivots == [0, 2]
    assert rank(F, M) == 2


def test_kernel_basis_annihilates():
    F = FieldSpec(3)
    M = np.array([[1, 1, 1, 0], [0, 1, 2, 1]])
    K = kernel_basis(F, M)
    assert K.shape == (2, 4)
    assert not np.any(F.matmul(M, K.T))


def test_solve_and_no_solution():
    F = FieldSpec(2)
    A = np.array([[1, 0], [0, 0]])
    X = solve(F, A, np.array([[1], [0]]))
    assert np.array_equal(F.matmul(A, X), np.array([[1], [0]]))
    assert solve(F, A, np.array([[0], [1]])) is NO_SOLUTION


def test_inverse_and_singular():
    F = FieldSpec(5)
    M = np.array([[2, 1], [1, 1]])
    assert np.array_equal(F.matmul(M, inverse(F, M)), F.eye(2))
    with pytest.raises(FieldError):
        inverse(F, np.array([[1, 2], [2, 4]]))


def test_image_basis_and_span():
    F = FieldSpec(2)
    M = np.array([[1, 1, 0], [0, 0, 1], [1, 1, 1]])
    B = image_basis(F, M)
    assert B.shape[1] == 2
    assert in_span(F, B, M)
    assert not in_span(F, B[:, :1], M)


def test_kron_and_matpow():
    F = FieldSpec(3)
    A = np.array([[1, 1], [0, 1]])
    assert np.array_equal(matpow(F, A, 3), F.eye(2))
    assert kron(F, A, F.eye(2)).shape == (4, 4)


def test_blow_up_is_multiplicative():
    F = FieldSpec(2, 2, (1, 1, 1))
    rng = np.random.default_rng(7)
    A, B = F.random(rng, (3, 2)), F.random(rng, (2, 3))
    left = blow_up(F, F.matmul(A, B))
    right = (blow_up(F, A) @ blow_up(F, B)) % 2
    assert np.array_equal(left, right)
