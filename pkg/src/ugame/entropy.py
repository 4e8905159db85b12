"""Conditional min-entropies of the game registers.

H_min(B|A) of a bipartite state rho_AB is -log2 of the optimum of
min {Tr sigma : sigma (x) I_B >= rho_AB}, computed here by the barrier
solver with the conditioning system always the first, two-dimensional
factor.  For the two-dimensional game at its optimal inputs all four
quantities of interest have closed forms: the entropy of the target
given the register before and after the measurement, and the entropy
of the register's purification at the initial and final times.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import sdp_core
from .game import phi_jl
from .linalg import PureState, assert_density_matrix, fourier_matrix

CURVE_ATOL = 1e-9
SDP_CHECK_ATOL = 1e-6


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma = {gamma!r} outside [0, 1]")
    return gamma


def hmin_sdp(rho_ab: np.ndarray, dims: tuple[int, int], tol: float = 1e-9) -> float:
    """Conditional min-entropy H_min(B|A) of a bipartite state.

    Parameters
    ----------
    rho_ab : (2 dB, 2 dB) array
        Density matrix with the conditioning system A as the first
        tensor factor; A must be a qubit.
    dims : (int, int)
        (dA, dB) with dA = 2.
    tol : float
        Certified gap passed to the barrier solver.

    Returns
    -------
    float
        -log2 of min {Tr sigma : sigma (x) I_B >= rho_AB}.
    """
    da, db = dims
    if da != 2:
        raise ValueError(f"conditioning system must be a qubit, got dA = {da}")
    if db < 1:
        raise ValueError(f"dB must be >= 1, got {db}")
    rho_ab = np.asarray(rho_ab, dtype=np.complex128)
    if rho_ab.shape != (2 * db, 2 * db):
        raise ValueError(
            f"joint state has shape {rho_ab.shape}, expected {(2 * db, 2 * db)}"
        )
    assert_density_matrix(rho_ab, what="joint state")
    lift = sdp_core.IDENTITY if db == 1 else sdp_core.TensorIdentity(db)
    problem = sdp_core.TraceMinProblem(((lift, rho_ab),))
    sol = sdp_core.solve_trace_min(problem, tol)
    return float(-np.log2(sol.value))


def hmin_B_given_R_d2(gamma: float) -> float:
    """H_min(B|R) after the measurement interaction: -log2(1 + gamma)."""
    gamma = _check_gamma(gamma)
    return float(-np.log2(1.0 + gamma))


def hmin_X_given_R_d2(gamma: float) -> float:
    """H_min(X|R) of the outcome: 1 - log2(sqrt(2 + 2 gamma^2)/2 + 1)."""
    gamma = _check_gamma(gamma)
    return float(1.0 - np.log2(np.sqrt(2.0 + 2.0 * gamma * gamma) / 2.0 + 1.0))


def hmin_P_given_R_initial(gamma: float) -> float:
    """H_min(P|R) before the interaction: -log2(1 + sqrt(1 - gamma^2))."""
    gamma = _check_gamma(gamma)
    return float(-np.log2(1.0 + np.sqrt(max(1.0 - gamma * gamma, 0.0))))


def hmin_P_given_R_t2_d2(gamma: float) -> float:
    """H_min(P|R) after the interaction: 0 for every coherence.

    Holds for input states with <phi|F|phi> = 0 (the optimal ones);
    verifiable through hmin_sdp on the two-qubit embedding built by
    rp_joint_t2.
    """
    _check_gamma(gamma)
    return 0.0


def rp_joint_t1(gamma: float) -> np.ndarray:
    """Purification of the register as a two-qubit state, R first.

    |psi_RP> = sqrt((1+gamma)/2) |+>|0> + sqrt((1-gamma)/2) |->|1>,
    whose reduced register state is the coherence-gamma register.
    """
    gamma = _check_gamma(gamma)
    plus = np.array([1.0, 1.0], dtype=np.complex128) / np.sqrt(2.0)
    minus = np.array([1.0, -1.0], dtype=np.complex128) / np.sqrt(2.0)
    e0 = np.array([1.0, 0.0], dtype=np.complex128)
    e1 = np.array([0.0, 1.0], dtype=np.complex128)
    psi = np.sqrt((1.0 + gamma) / 2.0) * np.kron(plus, e0)
    psi += np.sqrt((1.0 - gamma) / 2.0) * np.kron(minus, e1)
    return np.outer(psi, psi.conj())


def rp_joint_t2(gamma: float, phi: PureState | None = None) -> np.ndarray:
    """Register/purification state after the interaction, as two qubits.

    Traces the target out of the global pure state at t2.  The
    purification is embedded as a qubit: the two subnormalized P
    vectors have overlap gamma/2, realized as |0>/sqrt(2) and
    (gamma |0> + sqrt(1-gamma^2) |1>)/sqrt(2).  The register
    off-diagonal blocks carry the factor <phi|F^dag|phi>, which
    vanishes for the default input phi_01.
    """
    gamma = _check_gamma(gamma)
    if phi is None:
        phi = phi_jl(2, 0, 1)
    if phi.dim != 2:
        raise ValueError(f"input state must be a qubit, got dimension {phi.dim}")
    f = fourier_matrix(2)
    a = phi.amplitudes
    b = f @ a
    # c[r, s] = <phi| (F^s)^dag F^r |phi>; c[0, 1] = <phi|F^dag|phi>
    cross = complex(np.vdot(b, a))
    c = np.array([[1.0, cross], [cross.conjugate(), 1.0]], dtype=np.complex128)
    p = (
        np.array([1.0, 0.0], dtype=np.complex128) / np.sqrt(2.0),
        np.array([gamma, np.sqrt(max(1.0 - gamma * gamma, 0.0))], dtype=np.complex128)
        / np.sqrt(2.0),
    )
    rho = np.zeros((4, 4), dtype=np.complex128)
    for r in range(2):
        for s in range(2):
            block = np.zeros((2, 2), dtype=np.complex128)
            block[r, s] = c[r, s]
            rho += np.kron(block, np.outer(p[r], p[s].conj()))
    return rho


@dataclass(frozen=True)
class EntropyCurvePoint:
    """All four min-entropies of the d = 2 game at one coherence."""

    gamma: float
    h_B_given_R: float
    h_X_given_R: float
    h_P_given_R_t1: float
    h_P_given_R_t2: float

    def __post_init__(self):
        if self.h_X_given_R > self.h_B_given_R + 1.0 + CURVE_ATOL:
            raise ValueError(
                "outcome entropy exceeds the target entropy by more than one bit"
            )
        if abs(self.h_P_given_R_t2) > CURVE_ATOL:
            raise ValueError("post-interaction purification entropy must be 0")


def entropy_curve_d2(grid, check_sdp: bool = False) -> tuple:
    """Evaluate the four closed forms on a coherence grid.

    With check_sdp, every point is re-derived through hmin_sdp on the
    relevant joint states (target, outcome, and purification at both
    times); a deviation beyond 1e-6 raises.
    """
    from .game import GameConfig, ensemble, joint_state_t2

    points = []
    for gamma in np.asarray(grid, dtype=float):
        g = _check_gamma(gamma)
        point = EntropyCurvePoint(
            gamma=g,
            h_B_given_R=hmin_B_given_R_d2(g),
            h_X_given_R=hmin_X_given_R_d2(g),
            h_P_given_R_t1=hmin_P_given_R_initial(g),
            h_P_given_R_t2=hmin_P_given_R_t2_d2(g),
        )
        if check_sdp:
            config = GameConfig(2, g)
            phi = phi_jl(2, 0, 1)
            rho_rb = joint_state_t2(config, phi.density())
            ens = ensemble(config, phi)
            rho_rx = sum(
                np.kron(ens.states[x], np.outer(np.eye(2)[x], np.eye(2)[x]))
                for x in range(2)
            )
            computed = {
                "h_B_given_R": hmin_sdp(rho_rb, (2, 2)),
                "h_X_given_R": hmin_sdp(rho_rx, (2, 2)),
                "h_P_given_R_t1": hmin_sdp(rp_joint_t1(g), (2, 2)),
                "h_P_given_R_t2": hmin_sdp(rp_joint_t2(g), (2, 2)),
            }
            for name, value in computed.items():
                if abs(value - getattr(point, name)) > SDP_CHECK_ATOL:
                    raise RuntimeError(
                        f"{name} at gamma={g}: closed form "
                        f"{getattr(point, name)!r} vs solver {value!r}"
                    )
        points.append(point)
    return tuple(points)
