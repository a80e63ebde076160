import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import linalg

from brake_index.errors import DegenerateEndpoint
from brake_index.symplectic import (LagrangianFrame, blocks, brake_N, endpoint_Mminus,
                                    endpoint_Mplus, gl_path, is_symplectic, lower_factor,
                                    middle_factor, resymplectify, sign_Jn, standard_J,
                                    symplectic_defect, unipotent_factorization)

from conftest import random_symplectic


def test_standard_J_small_cases():
    assert np.array_equal(standard_J(1), [[0, -1], [1, 0]])
    J2 = standard_J(2)
    assert np.array_equal(J2[:2, 2:], -np.eye(2))
    assert np.array_equal(J2[2:, :2], np.eye(2))
    assert np.array_equal(standard_J(3) @ standard_J(3), -np.eye(6))


@pytest.mark.parametrize("bad", [0, -1, 1.5])
def test_dimension_must_be_positive_integer(bad):
    with pytest.raises(ValueError):
        standard_J(bad)


def test_constant_matrices():
    assert np.array_equal(brake_N(1), [[-1, 0], [0, 1]])
    assert np.array_equal(endpoint_Mminus(1), [[0, -1], [1, 0]])
    assert np.array_equal(brake_N(2) @ brake_N(2), np.eye(4))
    for n in (1, 2, 3):
        assert is_symplectic(endpoint_Mplus(n)) and is_symplectic(endpoint_Mminus(n))
        N, J = brake_N(n), standard_J(n)
        assert np.array_equal(N @ J, -J @ N)
    assert np.array_equal(sign_Jn(3), np.diag([-1.0, 1.0, 1.0]))


def test_is_symplectic_cases():
    assert is_symplectic(np.eye(4), 1e-12)
    assert is_symplectic(endpoint_Mplus(2))
    assert not is_symplectic(np.diag([2.0, 1.0]))
    with pytest.raises(ValueError):
        symplectic_defect(np.eye(3))


def test_resymplectify_reduces_defect(rng):
    M = random_symplectic(rng, 2) + 1e-6 * rng.normal(size=(4, 4))
    before = symplectic_defect(M)
    assert symplectic_defect(resymplectify(M)) < 1e-3 * before


def test_factorization_of_Mplus():
    W, V, W2 = unipotent_factorization(endpoint_Mplus(2))
    assert np.allclose(W, 0) and np.allclose(V, np.eye(2)) and np.allclose(W2, 0)


def test_factorization_of_quarter_rotation():
    M = linalg.expm(np.pi / 4 * standard_J(1))
    W, V, W2 = unipotent_factorization(M)
    assert W[0, 0] == pytest.approx(-1.0, abs=1e-12)
    rebuilt = lower_factor(W) @ middle_factor(V) @ lower_factor(W2)
    assert np.max(np.abs(rebuilt - M)) <= 1e-12


def test_factorization_round_trip_random(rng):
    done = 0
    while done < 50:
        n = 1 + done % 3
        M = random_symplectic(rng, n)
        if abs(np.linalg.det(blocks(M)[1])) < 1e-3:
            continue
        W, V, W2 = unipotent_factorization(M)
        assert np.allclose(W, W.T) and np.allclose(W2, W2.T)
        assert np.max(np.abs(lower_factor(W) @ middle_factor(V) @ lower_factor(W2) - M)) <= 1e-9
        done += 1


def test_factorization_rejects_singular_V():
    with pytest.raises(DegenerateEndpoint):
        unipotent_factorization(np.eye(2))


def test_gl_path_cases():
    p = gl_path(np.eye(2), 8)
    assert np.allclose(p, np.eye(2))
    p = gl_path(np.diag([-1.0, 1.0]), 32)
    assert np.allclose(p[-1], sign_Jn(2))
    assert np.all(np.linalg.det(p) < 0)
    p = gl_path(np.array([[2.0]]), 16)
    assert np.allclose(p[-1], 1.0) and np.all(p[:, 0, 0] > 0)
    with pytest.raises(DegenerateEndpoint):
        gl_path(np.zeros((2, 2)))


@given(st.integers(0, 10_000), st.integers(1, 3))
def test_gl_path_keeps_determinant_sign(seed, n):
    V = np.random.default_rng(seed).normal(size=(n, n))
    if abs(np.linalg.det(V)) < 1e-3:
        return
    coarse, fine = gl_path(V, 64), gl_path(V, 128)
    sign = np.sign(np.linalg.det(V))
    assert np.all(np.sign(np.linalg.det(fine)) == sign)
    target = np.eye(n) if sign > 0 else sign_Jn(n)
    assert np.allclose(fine[-1], target)
    step_c = np.max(np.abs(np.diff(coarse, axis=0)))
    step_f = np.max(np.abs(np.diff(fine, axis=0)))
    assert step_f <= 0.6 * step_c + 1e-12


def test_lagrangian_frames():
    L1 = LagrangianFrame.L1(2)
    image = L1.p @ np.array([0, 0, 1.0, 2.0])
    assert np.allclose(image, [1.0, 2.0, 0, 0])
    with pytest.raises(ValueError):
        LagrangianFrame(np.diag([2.0, 0.5]))
    with pytest.raises(ValueError):
        LagrangianFrame(np.array([[1.0, 0.0], [1.0, 1.0]]))
    c, s = np.cos(0.3), np.sin(0.3)
    frame = LagrangianFrame.from_unitary(np.array([[c]]), np.array([[s]]))
    assert is_symplectic(frame.p)
