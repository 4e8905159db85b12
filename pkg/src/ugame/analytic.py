"""Closed forms for optimal play and the probability/entropy bridge.

Everything here is an explicit formula: the maximum guessing
probability for the two-dimensional game at any coherence, the
zero-coherence optimum for any dimension together with the states that
reach it, the Bloch-sphere description of the optimal two-dimensional
inputs, the purity form of the optimum, and the conversion between a
guessing probability and a min-entropy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .game import phi_jl
from .linalg import PureState, assert_density_matrix

BLOCH_ATOL = 1e-12

_INV_SQRT2 = 1.0 / np.sqrt(2.0)


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma = {gamma!r} outside [0, 1]")
    return gamma


@dataclass(frozen=True)
class BlochVector:
    """A point (cx, cy, cz) in the Bloch ball, |c| <= 1."""

    cx: float
    cy: float
    cz: float

    def __post_init__(self):
        for name in ("cx", "cy", "cz"):
            object.__setattr__(self, name, float(getattr(self, name)))
        n2 = self.cx**2 + self.cy**2 + self.cz**2
        if n2 > 1.0 + BLOCH_ATOL:
            raise ValueError(f"Bloch vector has squared length {n2!r} > 1")

    def density(self) -> np.ndarray:
        """The qubit state 1/2 (I + cx sx + cy sy + cz sz)."""
        return 0.5 * np.array(
            [
                [1.0 + self.cz, self.cx - 1j * self.cy],
                [self.cx + 1j * self.cy, 1.0 - self.cz],
            ],
            dtype=np.complex128,
        )


@dataclass(frozen=True)
class OptimalSetD2:
    """The set of optimal d = 2 input states at a given coherence.

    For 0 < gamma < 1 the set is the two isolated vectors
    (+-1/sqrt(2), 0, -+1/sqrt(2)); at gamma = 0 the mirrored pair
    (+-1/sqrt(2), 0, +-1/sqrt(2)) joins them; at gamma = 1 it is the
    one-parameter family (sin t, +-sqrt(cos 2t), -sin t) with
    t in [-pi/4, pi/4], exposed through ``sample`` and discretized by
    ``members``.
    """

    gamma: float
    vectors: tuple
    is_family: bool

    def sample(self, theta: float, branch: int = +1) -> BlochVector:
        """One member of the gamma = 1 family at angle ``theta``."""
        if not self.is_family:
            raise ValueError("discrete optimal set; use .vectors")
        theta = float(theta)
        if not -np.pi / 4 - 1e-12 <= theta <= np.pi / 4 + 1e-12:
            raise ValueError(f"theta = {theta!r} outside [-pi/4, pi/4]")
        s = np.sin(theta)
        cy = np.sqrt(max(np.cos(2.0 * theta), 0.0))
        return BlochVector(s, np.copysign(cy, branch), -s)

    def members(self, samples: int = 9) -> tuple:
        """The discrete vectors, or ``samples`` points per family branch."""
        if not self.is_family:
            return self.vectors
        thetas = np.linspace(-np.pi / 4, np.pi / 4, samples)
        return tuple(
            self.sample(t, branch) for t in thetas for branch in (+1, -1)
        )


def pguess_max_d2(gamma: float) -> float:
    """Maximum guessing probability of the d = 2 game.

    p = 1/2 (1 + sqrt(2 + 2 gamma^2)/2); 0.8536 at gamma = 0, 1 at
    gamma = 1.
    """
    gamma = _check_gamma(gamma)
    return 0.5 * (1.0 + np.sqrt(2.0 + 2.0 * gamma * gamma) / 2.0)


def pguess_max_gamma0(d: int) -> float:
    """Maximum guessing probability at zero coherence: 1/2 (1 + 1/sqrt(d))."""
    if int(d) != d or d < 2:
        raise ValueError(f"d must be an integer >= 2, got {d!r}")
    return 0.5 * (1.0 + 1.0 / np.sqrt(d))


def optimal_states_gamma0(d: int) -> tuple:
    """All d^2 states phi_jl, each reaching the zero-coherence optimum.

    Ordered row-major in (j, l).
    """
    return tuple(phi_jl(d, j, l) for j in range(d) for l in range(d))


def optimal_states_d2(gamma: float) -> OptimalSetD2:
    """The optimal d = 2 input states at coherence ``gamma``.

    See OptimalSetD2 for the case split; every member reaches
    pguess_max_d2(gamma) under optimal discrimination.
    """
    gamma = _check_gamma(gamma)
    main = (
        BlochVector(_INV_SQRT2, 0.0, -_INV_SQRT2),
        BlochVector(-_INV_SQRT2, 0.0, _INV_SQRT2),
    )
    if gamma == 1.0:
        return OptimalSetD2(gamma=1.0, vectors=(), is_family=True)
    if gamma == 0.0:
        mirrored = (
            BlochVector(_INV_SQRT2, 0.0, _INV_SQRT2),
            BlochVector(-_INV_SQRT2, 0.0, -_INV_SQRT2),
        )
        return OptimalSetD2(gamma=0.0, vectors=main + mirrored, is_family=False)
    return OptimalSetD2(gamma=gamma, vectors=main, is_family=False)


def pguess_from_purity(rho_r: np.ndarray) -> float:
    """Maximum guessing probability from the register's purity.

    p = 1/2 (1 + sqrt(Tr rho_R^2)) for a register state with uniform
    diagonal (any coherence); other diagonals are rejected since the
    formula does not apply to them.
    """
    rho_r = np.asarray(rho_r, dtype=np.complex128)
    if rho_r.shape != (2, 2):
        raise ValueError(f"register state has shape {rho_r.shape}, expected (2, 2)")
    assert_density_matrix(rho_r, what="register state")
    if abs(rho_r[0, 0] - 0.5) > 1e-10 or abs(rho_r[1, 1] - 0.5) > 1e-10:
        raise ValueError("register state must have diagonal (1/2, 1/2)")
    purity = float(np.trace(rho_r @ rho_r).real)
    return 0.5 * (1.0 + np.sqrt(purity))


def min_entropy_of(p: float) -> float:
    """Min-entropy -log2(p) of a guessing probability p in (0, 1]."""
    p = float(p)
    if p <= 0.0:
        raise ValueError(f"guessing probability must be positive, got {p!r}")
    if p > 1.0 + 1e-9:
        raise ValueError(f"guessing probability must be <= 1, got {p!r}")
    return float(-np.log2(p))


def bloch_state(rho: np.ndarray) -> BlochVector:
    """Bloch coordinates (cx, cy, cz) of a qubit density matrix."""
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (2, 2):
        raise ValueError(f"expected a qubit state, got shape {rho.shape}")
    assert_density_matrix(rho)
    return BlochVector(
        2.0 * rho[1, 0].real, 2.0 * rho[1, 0].imag, (rho[0, 0] - rho[1, 1]).real
    )
