import numpy as np
import pytest

from brake_index.errors import VerificationFailure
from brake_index.flow import CoefficientPath, check_brake_symmetry
from brake_index.iteration import (SystemIndices, VerificationReport, iteration_chain,
                                   random_brake_system, random_positive_system, run_suite,
                                   verify_bott_even, verify_bott_odd, verify_index_bounds,
                                   verify_iteration_inequalities, verify_period_doubling)
from brake_index.periodic import anchor_system


def test_generators_are_reproducible_and_structured():
    a, b = random_brake_system(4, 2), random_brake_system(4, 2)
    t = np.linspace(0, 2, 17)
    assert np.array_equal(a(t), b(t))
    rep = check_brake_symmetry(random_brake_system(9, 2), tol=1e-12)
    assert rep.two_periodic and rep.brake_symmetric
    P = random_positive_system(3, 2)
    assert np.min(np.linalg.eigvalsh(P(np.linspace(0, 1, 101)))) > 0


@pytest.mark.parametrize("B", [CoefficientPath.scalar(0.0, 1), anchor_system(1),
                               CoefficientPath.scalar(0.0, 2)], ids=["zero1", "anchor", "zero2"])
def test_bott_odd_oracles(B):
    assert verify_bott_odd(B, 3).passed


def test_bott_even_zero():
    assert verify_bott_even(CoefficientPath.scalar(0.0, 1), 4).passed


@pytest.mark.parametrize("k", [4, 6])
def test_bott_even_random(k):
    assert verify_bott_even(random_brake_system(42, 2), k).passed


@pytest.mark.parametrize("B", [CoefficientPath.scalar(0.0, 1), CoefficientPath.scalar(0.3, 1)],
                         ids=["zero", "0.3I"])
def test_period_doubling_examples(B):
    rep = verify_period_doubling(B)
    assert rep.passed and len(rep.rows) == 2


@pytest.mark.parametrize("k", range(1, 7))
def test_inequality_chain(k):
    d = SystemIndices(random_brake_system(17, 1))
    rep = verify_iteration_inequalities(d, k)
    assert rep.passed
    lower, mid, upper, terms = iteration_chain(d, k)
    assert lower <= mid <= upper
    assert "i_1(gamma^2)" in terms


def test_k1_chain_collapses():
    lower, mid, upper, _ = iteration_chain(random_brake_system(3, 2), 1)
    assert lower == mid == upper


@pytest.mark.parametrize("B", [CoefficientPath.scalar(0.0, 1), CoefficientPath.scalar(2.0, 2)],
                         ids=["zero", "positive"])
def test_index_bounds_examples(B):
    assert verify_index_bounds(B).passed


def test_argument_checks():
    B = CoefficientPath.scalar(1.0, 1)
    with pytest.raises(ValueError):
        verify_bott_odd(B, 4)
    with pytest.raises(ValueError):
        verify_bott_even(B, 2)


def test_report_failure_raises_with_report():
    rep = VerificationReport("manual", "demo")
    rep.add("row", "==", 1, 2)
    assert not rep.passed
    with pytest.raises(VerificationFailure) as info:
        rep.require()
    assert info.value.report is rep
    assert rep.to_dict()["pass"] is False


def test_small_suite_passes():
    reports = run_suite(seed=3, count=2, ks=(3, 4))
    assert reports and all(r.passed for r in reports)
