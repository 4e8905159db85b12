"""Optimal discrimination of the post-measurement register ensembles.

The guessing probability of an ensemble {rho~^x} is the value of the
semidefinite program max_POVM sum_x Tr(M_x rho~^x), which by duality
equals min {Tr H : H >= rho~^x for all x}.  Two states admit the
Helstrom closed form; the general case goes through the barrier solver
in sdp_core, with the square-root measurement supplying a primal value
for duality-gap diagnostics.  For the phi_jl input family both the
explicit dual certificate and the closed-form optimum are available.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import sdp_core
from .game import Ensemble, GameConfig, ensemble, phi_jl
from .linalg import abs_hermitian, dag, eig_hermitian, trace_norm_hermitian

TRACE_SUM_ATOL = 1e-10
POVM_ATOL = 1e-9
#: eigenvalues of the ensemble average below this are treated as zero
#: when forming the square-root measurement
PGM_KERNEL_CUTOFF = 1e-12


@dataclass(frozen=True)
class DiscriminationResult:
    """Outcome of one discrimination instance.

    p_guess is reported from the dual (tight up to solver tolerance);
    primal_value is the success probability of a concrete measurement,
    so gap = dual_value - primal_value is a duality-gap diagnostic,
    not an error bar on p_guess.  povm, when present, holds 2x2 PSD
    operators summing to the identity.
    """

    p_guess: float
    dual_value: float
    primal_value: float
    gap: float = None
    povm: tuple | None = None

    def __post_init__(self):
        if self.gap is None:
            object.__setattr__(self, "gap", self.dual_value - self.primal_value)
        if not -1e-9 <= self.p_guess <= 1.0 + 1e-9:
            raise ValueError(f"p_guess = {self.p_guess!r} is not a probability")
        if self.primal_value > self.dual_value + 1e-8:
            raise ValueError(
                f"primal value {self.primal_value!r} exceeds dual value "
                f"{self.dual_value!r} beyond tolerance"
            )
        if self.povm is not None:
            members = []
            total = np.zeros((2, 2), dtype=np.complex128)
            for x, m in enumerate(self.povm):
                m = np.asarray(m, dtype=np.complex128)
                if np.linalg.eigvalsh(m)[0] < -POVM_ATOL:
                    raise ValueError(f"POVM element {x} is not PSD")
                total += m
                m = m.copy()
                m.flags.writeable = False
                members.append(m)
            if np.max(np.abs(total - np.eye(2))) > POVM_ATOL:
                raise ValueError("POVM elements do not sum to the identity")
            object.__setattr__(self, "povm", tuple(members))


def helstrom(rho0: np.ndarray, rho1: np.ndarray) -> DiscriminationResult:
    """Optimal discrimination of two subnormalized states.

    Parameters
    ----------
    rho0, rho1 : (2, 2) arrays
        Hermitian PSD matrices whose traces are the a-priori outcome
        probabilities and must sum to 1.

    Returns
    -------
    DiscriminationResult
        p_guess = 1/2 (1 + ||rho0 - rho1||_1), exact, so dual and
        primal coincide.  The POVM projects onto the nonnegative and
        negative eigenspaces of rho0 - rho1 (zero eigenvalues count
        toward outcome 0); for rho0 = rho1 it degenerates to
        (I/2, I/2).
    """
    rho0 = np.asarray(rho0, dtype=np.complex128)
    rho1 = np.asarray(rho1, dtype=np.complex128)
    total = 0.0
    for x, rho in enumerate((rho0, rho1)):
        if rho.shape != (2, 2):
            raise ValueError(f"state {x} has shape {rho.shape}, expected (2, 2)")
        if np.max(np.abs(rho - dag(rho))) > TRACE_SUM_ATOL:
            raise ValueError(f"state {x} is not Hermitian")
        if np.linalg.eigvalsh(rho)[0] < -TRACE_SUM_ATOL:
            raise ValueError(f"state {x} is not PSD")
        total += float(rho.trace().real)
    if abs(total - 1.0) > TRACE_SUM_ATOL:
        raise ValueError(f"traces sum to {total!r}, expected 1")

    g = rho0 - rho1
    tn = trace_norm_hermitian(g)
    p = 0.5 * (1.0 + tn)
    if tn < 1e-14:
        m0 = 0.5 * np.eye(2, dtype=np.complex128)
        povm = (m0, m0.copy())
    else:
        w, v = eig_hermitian(g)
        pos = v[:, w >= 0.0]
        m0 = pos @ dag(pos)
        povm = (m0, np.eye(2, dtype=np.complex128) - m0)
    return DiscriminationResult(
        p_guess=p, dual_value=p, primal_value=p, gap=0.0, povm=povm
    )


def pguess_sdp(ens: Ensemble, tol: float = 1e-9) -> DiscriminationResult:
    """Guessing probability of an ensemble through the trace-min dual.

    Parameters
    ----------
    ens : Ensemble
        The d subnormalized register states.
    tol : float
        Certified gap passed to the barrier solver.

    Returns
    -------
    DiscriminationResult
        p_guess and dual_value are the solver optimum, primal_value is
        the square-root-measurement value, and povm is the solver's
        feasible measurement (its value lies within tol of the dual).
    """
    problem = sdp_core.TraceMinProblem.from_states(ens.states)
    sol = sdp_core.solve_trace_min(problem, tol)
    primal = pgm_value(ens)
    return DiscriminationResult(
        p_guess=sol.value,
        dual_value=sol.value,
        primal_value=primal,
        povm=sol.dual_operators,
    )


def pgm_value(ens: Ensemble) -> float:
    """Success probability of the square-root ("pretty good") measurement.

    M_x = S^{-1/2} rho~^x S^{-1/2} with S the ensemble sum, using the
    pseudo-inverse on the support of S; the identity deficit I - Pi is
    split equally among the outcomes.  Always a valid measurement, so
    the value lower-bounds the optimum.
    """
    s = np.zeros((2, 2), dtype=np.complex128)
    for m in ens.states:
        s = s + m
    w, v = eig_hermitian(s)
    support = w > PGM_KERNEL_CUTOFF
    inv_half = np.where(support, 1.0 / np.sqrt(np.where(support, w, 1.0)), 0.0)
    s_inv_half = (v * inv_half) @ dag(v)
    pi = (v * support.astype(float)) @ dag(v)
    completion = (np.eye(2, dtype=np.complex128) - pi) / ens.d
    value = 0.0
    for m in ens.states:
        povm_x = s_inv_half @ m @ s_inv_half + completion
        value += float(np.trace(povm_x @ m).real)
    return value


def certificate_phi_jl(d: int, gamma: float, j: int, l: int) -> np.ndarray:
    """Dual certificate Q' for the phi_jl ensemble.

    Q' = 1/2 (rho~^j + rho~^l + |rho~^j - rho~^l|) dominates every
    ensemble member, and its trace 1/2 (p_j + p_l + ||G||_1) equals
    the guessing probability; feasibility can be confirmed with
    sdp_core.is_feasible against the same ensemble.
    """
    if j == l:
        raise ValueError("certificate needs two distinct outcomes, got j = l")
    gamma = float(gamma)
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma = {gamma!r} outside [0, 1]")
    ens = ensemble(GameConfig(d, gamma), phi_jl(d, j, l))
    g = ens.states[j] - ens.states[l]
    return 0.5 * (ens.states[j] + ens.states[l] + abs_hermitian(g))


def pguess_phi_jl_closed_form(d: int, gamma: float, j: int, l: int) -> float:
    """Closed-form guessing probability for the phi_jl input family.

    p = (2 + 2 sqrt(d) + d + sqrt(d (2+sqrt(d))^2
         + 2 gamma^2 (1+sqrt(d))^2 (1 - cos(2 pi (j^2-l^2)/d))))
        / (4 (d + sqrt(d)))

    At gamma = 0 this reduces to (1 + 1/sqrt(d))/2 for every pair;
    whenever (j^2 - l^2)/d is an integer the oscillatory term vanishes
    and the value stays constant in gamma.
    """
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    if j == l:
        raise ValueError("closed form needs two distinct outcomes, got j = l")
    gamma = float(gamma)
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma = {gamma!r} outside [0, 1]")
    rd = np.sqrt(d)
    osc = 1.0 - np.cos(2.0 * np.pi * (j * j - l * l) / d)
    root = np.sqrt(d * (2.0 + rd) ** 2 + 2.0 * gamma**2 * (1.0 + rd) ** 2 * osc)
    return (2.0 + 2.0 * rd + d + root) / (4.0 * (d + rd))
