"""States produced by the measurement circuit.

Bob hands Alice a d-dimensional state rho_B.  Alice holds a qubit
register R whose coherence gamma selects her measurement basis: she
applies the controlled unitary U = |0><0| (x) I + |1><1| (x) F (F the
discrete Fourier matrix) and measures the target in the standard
basis.  This module builds the register state rho_R(gamma), the joint
state right after U, the post-measurement register ensemble that the
discrimination layer consumes, and gamma from the environment-overlap
model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    PureState,
    assert_density_matrix,
    fourier_matrix,
    schmidt_coefficients,
)

GAMMA_ATOL = 1e-12
ENSEMBLE_ATOL = 1e-10


def register_state(gamma) -> np.ndarray:
    """Register state rho_R = 1/2 [[1, conj(gamma)], [gamma, 1]].

    gamma may be complex with |gamma| <= 1; the conjugate sits in the
    upper-right corner.  Eigenvalues are (1 +- |gamma|)/2.
    """
    g = complex(gamma)
    if abs(g) > 1.0 + GAMMA_ATOL:
        raise ValueError(f"|gamma| = {abs(g)!r} exceeds 1")
    return 0.5 * np.array([[1.0, g.conjugate()], [g, 1.0]], dtype=np.complex128)


def controlled_fourier(d: int) -> np.ndarray:
    """The controlled unitary U = |0><0| (x) I_d + |1><1| (x) F."""
    u = np.zeros((2 * d, 2 * d), dtype=np.complex128)
    u[:d, :d] = np.eye(d)
    u[d:, d:] = fourier_matrix(d)
    return u


@dataclass(frozen=True)
class GameConfig:
    """One game instance: outcome count d and register coherence gamma.

    gamma may be complex (|gamma| <= 1) for the ensemble builder; the
    joint-state paths require it real in [0, 1].
    """

    d: int
    gamma: complex

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise ValueError(f"d must be an integer >= 2, got {self.d!r}")
        object.__setattr__(self, "d", int(self.d))
        g = complex(self.gamma)
        if not np.isfinite([g.real, g.imag]).all():
            raise ValueError("gamma must be finite")
        if abs(g) > 1.0 + GAMMA_ATOL:
            raise ValueError(f"|gamma| = {abs(g)!r} exceeds 1")
        object.__setattr__(self, "gamma", g)

    def real_gamma(self) -> float:
        """gamma as a real number in [0, 1]; error if it is not one."""
        g = self.gamma
        if abs(g.imag) > GAMMA_ATOL or not -GAMMA_ATOL <= g.real <= 1.0 + GAMMA_ATOL:
            raise ValueError(f"this operation needs real gamma in [0, 1], got {g!r}")
        return min(max(g.real, 0.0), 1.0)


@dataclass(frozen=True)
class Ensemble:
    """The d subnormalized post-measurement register states.

    states[x] is the 2x2 matrix rho~^x_R; its trace is the outcome
    probability p_x (independent of gamma), and the states sum to the
    reduced register state.  Validated on construction: each member
    PSD within 1e-10 and traces summing to 1 within 1e-10.
    """

    d: int
    states: tuple

    def __post_init__(self):
        if len(self.states) != self.d:
            raise ValueError(f"expected {self.d} states, got {len(self.states)}")
        frozen = []
        total = 0.0
        for x, s in enumerate(self.states):
            s = np.asarray(s, dtype=np.complex128)
            if s.shape != (2, 2):
                raise ValueError(f"ensemble member {x} has shape {s.shape}, expected (2, 2)")
            if np.max(np.abs(s - s.conj().T)) > ENSEMBLE_ATOL:
                raise ValueError(f"ensemble member {x} is not Hermitian")
            if np.linalg.eigvalsh(s)[0] < -ENSEMBLE_ATOL:
                raise ValueError(f"ensemble member {x} is not PSD")
            total += float(s.trace().real)
            s = s.copy()
            s.flags.writeable = False
            frozen.append(s)
        if abs(total - 1.0) > ENSEMBLE_ATOL:
            raise ValueError(f"ensemble traces sum to {total!r}, expected 1")
        object.__setattr__(self, "states", tuple(frozen))

    @property
    def probs(self) -> np.ndarray:
        """Outcome probabilities p_x = Tr rho~^x_R."""
        return np.array([float(s.trace().real) for s in self.states])


def ensemble(config: GameConfig, state) -> Ensemble:
    """Post-measurement register ensemble {rho~^x_R} for Bob's input.

    ``state`` is a PureState or a d x d density matrix.  Each member is

        rho~^x_R = 1/2 [[<x|rho|x>,          conj(gamma) <x|rho F^dag|x>],
                        [gamma <x|F rho|x>,  <x|F rho F^dag|x>          ]]

    with the conjugated coherence in the upper-right corner.  Complex
    gamma is admitted here (the phase only rotates the members by a
    fixed unitary).
    """
    d = config.d
    g = complex(config.gamma)
    gbar = g.conjugate()
    f = fourier_matrix(d)
    states = []
    if isinstance(state, PureState):
        if state.dim != d:
            raise ValueError(f"state dimension {state.dim} does not match d={d}")
        a = state.amplitudes
        b = f @ a
        for x in range(d):
            states.append(
                0.5
                * np.array(
                    [
                        [abs(a[x]) ** 2, gbar * a[x] * b[x].conjugate()],
                        [g * b[x] * a[x].conjugate(), abs(b[x]) ** 2],
                    ],
                    dtype=np.complex128,
                )
            )
    else:
        rho = np.asarray(state, dtype=np.complex128)
        if rho.shape != (d, d):
            raise ValueError(f"density matrix shape {rho.shape} does not match d={d}")
        assert_density_matrix(rho)
        rho_fd = rho @ f.conj().T
        f_rho = f @ rho
        f_rho_fd = f @ rho_fd
        for x in range(d):
            states.append(
                0.5
                * np.array(
                    [
                        [rho[x, x], gbar * rho_fd[x, x]],
                        [g * f_rho[x, x], f_rho_fd[x, x]],
                    ],
                    dtype=np.complex128,
                )
            )
    return Ensemble(d=d, states=tuple(states))


def joint_state_t2(config: GameConfig, rho_b: np.ndarray) -> np.ndarray:
    """Joint register/target state U (rho_R (x) rho_B) U^dag after the circuit."""
    d = config.d
    g = config.real_gamma()
    rho_b = np.asarray(rho_b, dtype=np.complex128)
    if rho_b.shape != (d, d):
        raise ValueError(f"density matrix shape {rho_b.shape} does not match d={d}")
    assert_density_matrix(rho_b)
    u = controlled_fourier(d)
    joint = np.kron(register_state(g), rho_b)
    return u @ joint @ u.conj().T


def gamma_from_environment(overlap, n: int, j: int) -> complex:
    """Coherence left after n - j environment qubits decohere: overlap**(n-j).

    ``overlap`` is the single-qubit environment overlap <alpha|beta>
    with modulus at most 1; j of the n environment qubits stay with
    the register, so the exponent is n - j.
    """
    ov = complex(overlap)
    if abs(ov) > 1.0 + GAMMA_ATOL:
        raise ValueError(f"|overlap| = {abs(ov)!r} exceeds 1")
    if n < 0 or not 0 <= j <= n:
        raise ValueError(f"need 0 <= j <= n, got n={n}, j={j}")
    return ov ** (n - j)


def phi_jl(d: int, j: int, l: int) -> PureState:
    """Bob's input c (|j> + w^{jl} F^dag |l>) with w = exp(2 pi i / d).

    c = sqrt(sqrt(d) / (2 sqrt(d) + 2)) normalizes the state.  These
    are the inputs that maximize the guessing probability at gamma = 0;
    j = l is allowed here (the state is still well formed), only the
    discrimination certificates require j != l.
    """
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    if not (0 <= j < d and 0 <= l < d):
        raise ValueError(f"need j, l in [0, {d - 1}], got j={j}, l={l}")
    rd = np.sqrt(d)
    c = np.sqrt(rd / (2.0 * rd + 2.0))
    omega = np.exp(2j * np.pi / d)
    m = np.arange(d)
    amps = omega ** (j * l) * omega ** (-l * m) / rd
    amps[j] += 1.0
    return PureState(c * amps)


def joint_schmidt_t2(config: GameConfig, phi: PureState) -> np.ndarray:
    """Schmidt coefficients of the pure joint state at t2 (gamma = 1 only).

    For gamma = 1 the register starts in |+> and the joint state after
    the controlled Fourier is (|0>|phi> + |1>|F phi>)/sqrt(2); its
    Schmidt coefficients across the R|B cut are returned descending.
    For gamma < 1 the joint state is mixed and the request is rejected.
    """
    if config.gamma != 1:
        raise ValueError("joint Schmidt coefficients are defined only at gamma = 1")
    d = config.d
    if phi.dim != d:
        raise ValueError(f"state dimension {phi.dim} does not match d={d}")
    f = fourier_matrix(d)
    psi = np.concatenate([phi.amplitudes, f @ phi.amplitudes]) / np.sqrt(2.0)
    return schmidt_coefficients(psi, (2, d))
