"""Conditional min-entropies: the solver route, the four closed forms,
and the purification embeddings."""

import numpy as np
import pytest

from ugame.analytic import min_entropy_of, pguess_max_d2
from ugame.entropy import (
    EntropyCurvePoint,
    entropy_curve_d2,
    hmin_B_given_R_d2,
    hmin_P_given_R_initial,
    hmin_P_given_R_t2_d2,
    hmin_sdp,
    hmin_X_given_R_d2,
    rp_joint_t1,
    rp_joint_t2,
)
from ugame.game import GameConfig, joint_state_t2, phi_jl
from ugame.linalg import PureState, basis_state, eig_hermitian, schmidt_coefficients


def test_hmin_sdp_bell_state():
    psi = np.zeros(4, dtype=complex)
    psi[0] = psi[3] = 1.0 / np.sqrt(2.0)
    assert abs(hmin_sdp(np.outer(psi, psi.conj()), (2, 2)) - (-1.0)) < 1e-6


def test_hmin_sdp_product_of_maximally_mixed():
    # Uncorrelated uniform qubit: one full bit of min-entropy.
    assert abs(hmin_sdp(np.eye(4, dtype=complex) / 4, (2, 2)) - 1.0) < 1e-6


def test_hmin_sdp_game_joint_state():
    rho = joint_state_t2(GameConfig(2, 0.5), phi_jl(2, 0, 1).density())
    want = -np.log2(1.5)
    assert abs(hmin_sdp(rho, (2, 2)) - want) < 1e-6


def test_hmin_sdp_input_validation():
    rho = np.eye(4, dtype=complex) / 4
    with pytest.raises(ValueError):
        hmin_sdp(rho, (4, 1))  # conditioning system must be a qubit
    with pytest.raises(ValueError):
        hmin_sdp(rho, (2, 3))  # shape mismatch
    with pytest.raises(ValueError):
        hmin_sdp(np.eye(4, dtype=complex), (2, 2))  # trace 4


def test_closed_form_target_entropy():
    assert hmin_B_given_R_d2(0.0) == 0.0
    assert hmin_B_given_R_d2(1.0) == -1.0
    assert abs(hmin_B_given_R_d2(0.5) - (-0.5849625007211562)) < 1e-15


def test_closed_form_outcome_entropy():
    assert hmin_X_given_R_d2(1.0) == 0.0
    assert abs(hmin_X_given_R_d2(0.0) - 0.22844669683638807) < 1e-12


def test_outcome_entropy_is_entropy_of_max_guessing():
    rng = np.random.default_rng(79)
    for _ in range(100):
        g = float(rng.uniform(0.0, 1.0))
        want = min_entropy_of(pguess_max_d2(g))
        assert abs(hmin_X_given_R_d2(g) - want) < 1e-12


def test_closed_form_purification_entropy_initial():
    assert hmin_P_given_R_initial(0.0) == -1.0
    assert hmin_P_given_R_initial(1.0) == 0.0
    assert abs(hmin_P_given_R_initial(0.6) - (-0.8479969065549501)) < 1e-12


def test_initial_purification_entropy_from_schmidt_weights():
    # for a pure two-qubit state 2^{-H_min} is the squared sum of the
    # Schmidt coefficients; here that equals 1 + sqrt(1 - gamma^2)
    for g in (0.0, 0.3, 0.8, 1.0):
        rho = rp_joint_t1(g)
        w, v = eig_hermitian(rho)
        assert w[0] > 1.0 - 1e-12  # pure
        coeffs = schmidt_coefficients(v[:, 0], (2, 2))
        total = float(coeffs.sum()) ** 2
        assert abs(total - (1.0 + np.sqrt(1.0 - g * g))) < 1e-10
        assert abs(total - 2.0 ** (-hmin_P_given_R_initial(g))) < 1e-10


def test_final_purification_entropy_is_zero():
    for g in (0.0, 0.25, 0.5, 0.75, 1.0):
        assert hmin_P_given_R_t2_d2(g) == 0.0
    for g in (0.0, 0.5, 1.0):
        assert abs(hmin_sdp(rp_joint_t2(g), (2, 2))) < 1e-6


def test_rp_joint_t2_register_blocks_decouple_for_optimal_inputs():
    # <phi|F^dag|phi> = 0 for the phi_jl inputs, so the register
    # off-diagonal blocks vanish
    for phi in (phi_jl(2, 0, 1), phi_jl(2, 1, 0)):
        for g in (0.0, 0.5, 1.0):
            rho = rp_joint_t2(g, phi)
            assert np.max(np.abs(rho[0:2, 2:4])) < 1e-12


def test_rp_joint_t2_is_a_state_for_any_input():
    rho = rp_joint_t2(0.5, PureState(basis_state(2, 0)))
    assert abs(float(rho.trace().real) - 1.0) < 1e-12
    assert np.linalg.eigvalsh(rho)[0] > -1e-12
    # a basis input does not decouple the register blocks
    assert np.max(np.abs(rho[0:2, 2:4])) > 0.1


def test_rp_joint_t2_rejects_non_qubit_input():
    with pytest.raises(ValueError):
        rp_joint_t2(0.5, PureState(basis_state(3, 0)))


def test_curve_endpoints():
    points = entropy_curve_d2([0.0, 1.0])
    first, last = points
    assert first.h_B_given_R == 0.0
    assert abs(first.h_X_given_R - 0.22844669683638807) < 1e-12
    assert first.h_P_given_R_t1 == -1.0
    assert first.h_P_given_R_t2 == 0.0
    assert last.h_B_given_R == -1.0
    assert last.h_X_given_R == 0.0
    assert last.h_P_given_R_t1 == 0.0
    assert last.h_P_given_R_t2 == 0.0


def test_curve_gap_grows_with_coherence():
    grid = np.linspace(0.0, 1.0, 11)
    points = entropy_curve_d2(grid)
    gaps = [p.h_X_given_R - p.h_B_given_R for p in points]
    assert all(b > a for a, b in zip(gaps, gaps[1:]))
    assert abs(gaps[-1] - 1.0) < 1e-12


def test_curve_solver_check_passes():
    entropy_curve_d2([0.0, 0.5, 1.0], check_sdp=True)


def test_curve_rejects_out_of_range_grid():
    with pytest.raises(ValueError):
        entropy_curve_d2([0.0, 1.5])


def test_curve_point_invariants():
    with pytest.raises(ValueError):
        EntropyCurvePoint(
            gamma=0.5,
            h_B_given_R=-1.0,
            h_X_given_R=0.5,
            h_P_given_R_t1=0.0,
            h_P_given_R_t2=0.0,
        )
    with pytest.raises(ValueError):
        EntropyCurvePoint(
            gamma=0.5,
            h_B_given_R=-0.5,
            h_X_given_R=0.1,
            h_P_given_R_t1=0.0,
            h_P_given_R_t2=0.1,
        )
