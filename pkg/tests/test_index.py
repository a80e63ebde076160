import math

import numpy as np
import pytest
from scipy import linalg

from brake_index.errors import DegenerateEndpoint, PerturbationFailure
from brake_index.flow import CoefficientPath, SymplecticPath, fundamental_solution
from brake_index.index import (closing_path_beta, l0_index, l0_index_nondegenerate,
                               l0_nullity, l0_winding, l1_index, l_index, prepend_arc,
                               q_curve)
from brake_index.iteration import random_brake_system, random_positive_system
from brake_index.symplectic import (LagrangianFrame, blocks, endpoint_Mminus,
                                    endpoint_Mplus, standard_J)


def scalar_oracle(c, n):
    """Index pair of ``B = c I`` on [0, 1]: one eigenvalue branch per mode
    ``pi l < c`` of the Galerkin operator."""
    q = c / math.pi
    resonant = abs(q - round(q)) < 1e-12
    return n * (math.ceil(q - 1e-12) - 1), n if resonant else 0


def rotation_path(omega, steps=256, n=1):
    t = np.linspace(0.0, 1.0, steps + 1)
    J = standard_J(n)
    return SymplecticPath(t, np.stack([linalg.expm(omega * s * J) for s in t]))


def test_nullity_examples():
    assert l0_nullity(SymplecticPath([0.0, 1.0], np.stack([np.eye(4)] * 2))) == 2
    assert l0_nullity(rotation_path(1.0)) == 0
    assert l0_nullity(rotation_path(np.pi)) == 1


def test_q_curve_rotation():
    trace = q_curve(rotation_path(1.0))
    assert np.allclose(trace.q_values[0], np.eye(1))
    assert np.allclose(trace.q_values[:, 0, 0], np.exp(2j * trace.grid), atol=1e-12)
    assert np.allclose(trace.delta - trace.delta[0], trace.grid, atol=1e-12)
    prod = trace.q_values @ np.conj(np.swapaxes(trace.q_values, 1, 2))
    assert np.max(np.abs(prod - np.eye(1))) <= 1e-8


@pytest.mark.parametrize("n", [1, 2, 3])
def test_q_at_Mplus(n):
    _, V, _, U = blocks(endpoint_Mplus(n))
    Q = (U - 1j * V) @ np.linalg.inv(U + 1j * V)
    assert np.allclose(Q, -np.eye(n))
    assert np.linalg.det(Q) == pytest.approx((-1) ** n)


def test_prepend_arc_endpoints():
    g = rotation_path(0.7, n=2)
    full = prepend_arc(g)
    assert np.allclose(full.values[0], standard_J(2))
    assert np.allclose(full.value_at(0.5), np.eye(4))
    assert np.allclose(full.end, g.end)


def test_beta_constant_at_Mplus():
    beta = closing_path_beta(endpoint_Mplus(2))
    assert np.allclose(beta.values, endpoint_Mplus(2))


def test_beta_quarter_turn_ends_at_Mminus():
    beta = closing_path_beta(linalg.expm(np.pi / 2 * standard_J(1)))
    assert np.allclose(beta.end, endpoint_Mminus(1))
    assert np.min(np.abs(np.linalg.det(blocks(beta.values)[1]))) > 0.1


def test_beta_stays_in_stratum_random(rng):
    from conftest import random_symplectic
    done = 0
    while done < 50:
        n = 1 + done % 2
        M = random_symplectic(rng, n)
        if abs(np.linalg.det(blocks(M)[1])) < 1e-3:
            continue
        beta = closing_path_beta(M)
        dets = np.linalg.det(blocks(beta.values)[1])
        assert np.all(np.sign(dets) == np.sign(dets[0]))
        target = endpoint_Mplus(n) if dets[0] > 0 else endpoint_Mminus(n)
        assert np.allclose(beta.end, target)
        done += 1


def test_small_rotation_index_and_jump():
    i = l0_index_nondegenerate(rotation_path(0.1))
    assert isinstance(i, int)
    assert i == l0_index(CoefficientPath.scalar(0.1, 1)).index


def test_beta_resolution_independence(rng):
    count = 0
    for seed in range(50):
        B = random_brake_system(seed, 1 + seed % 2) if seed % 3 else random_positive_system(seed, 1)
        g = fundamental_solution(B, 1.0, 512)
        if l0_nullity(g):
            continue
        assert l0_index_nondegenerate(g, beta_steps=16) == l0_index_nondegenerate(g, beta_steps=128)
        count += 1
    assert count >= 45


def test_grid_stability_quarter_turn():
    B = CoefficientPath.scalar(np.pi / 2, 1)
    coarse = l0_index_nondegenerate(fundamental_solution(B, 1.0, 2 ** 9))
    fine = l0_index_nondegenerate(fundamental_solution(B, 1.0, 2 ** 12))
    assert coarse == fine == 0


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("c", [-7.0, -4.0, -math.pi, -1.0, 0.0, 0.1, 1.0, math.pi, 4.0,
                               2 * math.pi, 7.0])
def test_scalar_oracle(c, n):
    B = CoefficientPath.scalar(c, n)
    assert l0_index(B).as_tuple() == scalar_oracle(c, n)
    assert l1_index(B).as_tuple() == scalar_oracle(c, n)


def test_zero_coefficient_oracle():
    pair = l0_index(CoefficientPath.scalar(0.0, 2))
    assert pair.as_tuple() == (-2, 2)
    assert pair.perturbation > 0


def test_winding_is_near_integer():
    for seed in range(10):
        g = fundamental_solution(random_brake_system(seed, 2), 1.0, 1024)
        if l0_nullity(g) == 0:
            w = l0_winding(g)
            assert abs(w - round(w)) <= 1e-3


def test_degenerate_winding_rejected():
    with pytest.raises(DegenerateEndpoint):
        l0_winding(rotation_path(np.pi))


def test_perturbation_failure_needs_two_agreeing_eps():
    with pytest.raises(PerturbationFailure):
        l0_index(CoefficientPath.scalar(0.0, 1), schedule=(1e-2,))


def test_l_index_identity_frame_matches_l0():
    B = random_brake_system(11, 2)
    assert l_index(B, LagrangianFrame.L0(2)).as_tuple() == l0_index(B).as_tuple()
    assert l1_index(B).boundary == "L1"


@pytest.mark.parametrize("seed", range(12))
def test_positive_coefficients_have_nonnegative_indices(seed):
    B = random_positive_system(seed, 1 + seed % 2)
    assert l0_index(B).index >= 0
    assert l1_index(B).index >= 0


@pytest.mark.parametrize("seed", range(8))
def test_eps_jump_identity(seed):
    n = 1 + seed % 2
    B = random_brake_system(seed, n)
    eps = 1e-3
    pair = l0_index(B)
    assert l0_index(B.shifted(eps)).index - l0_index(B.shifted(-eps)).index == pair.nullity
    assert abs(pair.index - l1_index(B).index) <= n
