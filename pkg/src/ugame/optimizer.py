"""Multi-start Nelder-Mead search for the best input state.

The objective is the guessing probability of the register ensemble
induced by a pure input state, evaluated through the compiled barrier
solver.  States are parametrized by 2d unconstrained reals (interleaved
real/imaginary parts); normalization and the global phase are absorbed
by the objective, so the simplex explores plain Euclidean space.  Every
value that leaves this module is re-verified as the full solver value
of a concrete state, which makes each reported number a valid lower
bound on the true maximum.
"""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from ._kernels import pguess_value
from .discrimination import pguess_sdp
from .game import GameConfig, ensemble
from .linalg import PureState, fourier_matrix

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class OptimizerConfig:
    """Search hyperparameters.

    restarts independent searches per call, each from a fresh random
    state; a restart stops when its simplex value spread drops below
    simplex_tol or after max_evals_per_restart objective evaluations.
    """

    restarts: int = 64
    max_evals_per_restart: int = 2000
    simplex_tol: float = 1e-10
    seed: int = 0
    sdp_tol: float = 1e-9

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError(f"restarts must be >= 1, got {self.restarts}")
        if self.max_evals_per_restart < 1:
            raise ValueError(
                f"max_evals_per_restart must be >= 1, got {self.max_evals_per_restart}"
            )
        if not self.simplex_tol > 0.0:
            raise ValueError(f"simplex_tol must be positive, got {self.simplex_tol}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed}")
        if not 1e-12 <= self.sdp_tol <= 1e-3:
            raise ValueError(f"sdp_tol = {self.sdp_tol!r} outside [1e-12, 1e-3]")


class NMResult(NamedTuple):
    """Final point, value, convergence flag, and evaluation count."""

    x: np.ndarray
    value: float
    converged: bool
    evals: int


@dataclass(frozen=True)
class OptResult:
    """Best state found, its re-verified value, and per-restart values."""

    best_state: PureState
    best_value: float
    per_restart_values: np.ndarray
    evals_used: int

    def __post_init__(self):
        values = np.asarray(self.per_restart_values, dtype=float)
        values.flags.writeable = False
        object.__setattr__(self, "per_restart_values", values)
        if abs(self.best_value - float(values.max())) > 1e-12:
            raise ValueError("best_value must be the maximum per-restart value")
        if self.best_value > 1.0 + 1e-9:
            raise ValueError(f"best_value = {self.best_value!r} exceeds 1")


def random_pure_state(d: int, rng: np.random.Generator) -> PureState:
    """A Haar-uniform pure state: 2d standard normals, normalized."""
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    z = rng.standard_normal(2 * d)
    return PureState.normalized(z[0::2] + 1j * z[1::2])


def nelder_mead(
    objective: Callable[[np.ndarray], float], x0, config: OptimizerConfig
) -> NMResult:
    """Maximize ``objective`` from ``x0`` with the Nelder-Mead simplex.

    Standard coefficients (reflection 1, expansion 2, contraction 1/2,
    shrink 1/2).  Stops when the spread of the simplex values falls
    below config.simplex_tol (converged) or when the evaluation budget
    config.max_evals_per_restart is spent (best-so-far, unconverged).
    """
    x0 = np.asarray(x0, dtype=float)
    n = x0.size
    budget = config.max_evals_per_restart
    evals = 0

    def f(x):
        nonlocal evals
        evals += 1
        return -objective(x)

    points = [x0]
    for i in range(n):
        step = 0.05 * x0[i] if abs(x0[i]) > 1e-8 else 0.00025
        x = x0.copy()
        x[i] += step
        points.append(x)
    values = []
    for x in points:
        if evals >= budget:
            # dummy so the simplex is complete; never better than x0
            values.append(np.inf)
        else:
            values.append(f(x))

    while evals < budget:
        order = np.argsort(values, kind="stable")
        points = [points[i] for i in order]
        values = [values[i] for i in order]
        if values[-1] - values[0] < config.simplex_tol:
            return NMResult(points[0], -values[0], True, evals)
        centroid = np.mean(points[:-1], axis=0)

        reflected = centroid + (centroid - points[-1])
        fr = f(reflected)
        if fr < values[0]:
            if evals < budget:
                expanded = centroid + 2.0 * (centroid - points[-1])
                fe = f(expanded)
                if fe < fr:
                    points[-1], values[-1] = expanded, fe
                    continue
            points[-1], values[-1] = reflected, fr
            continue
        if fr < values[-2]:
            points[-1], values[-1] = reflected, fr
            continue
        if evals >= budget:
            break
        # contraction, on whichever side of the centroid is better
        if fr < values[-1]:
            contracted = centroid + 0.5 * (reflected - centroid)
        else:
            contracted = centroid + 0.5 * (points[-1] - centroid)
        fc = f(contracted)
        if fc < min(fr, values[-1]):
            points[-1], values[-1] = contracted, fc
            continue
        # shrink toward the best vertex
        for i in range(1, n + 1):
            if evals >= budget:
                break
            points[i] = points[0] + 0.5 * (points[i] - points[0])
            values[i] = f(points[i])

    best = int(np.argmin(values))
    return NMResult(points[best], -values[best], False, evals)


def _amps_from_params(x: np.ndarray) -> np.ndarray:
    return x[0::2] + 1j * x[1::2]


def _params_from_state(state: PureState) -> np.ndarray:
    x = np.empty(2 * state.dim, dtype=float)
    x[0::2] = state.amplitudes.real
    x[1::2] = state.amplitudes.imag
    return x


def maximize_pguess(
    d: int, gamma: float, config: OptimizerConfig, extra_starts: tuple = ()
) -> OptResult:
    """Best guessing probability over pure input states, by restarts.

    Runs config.restarts Nelder-Mead searches from Haar-random states
    (per-restart streams split deterministically from config.seed),
    plus one search from each state in ``extra_starts``.  Every
    restart's final point is re-evaluated through the full solver
    path, so per_restart_values and best_value are honest values of
    concrete states.  An evaluation whose solve fails scores 0 and the
    search continues.
    """
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    config_gamma = GameConfig(d, gamma)
    g = config_gamma.real_gamma()
    fmat = fourier_matrix(d)
    failures = 0

    def objective(x):
        nonlocal failures
        value = pguess_value(x, fmat, g, config.sdp_tol, 200)
        if value == 0.0:
            failures += 1
        return value

    starts = []
    children = np.random.SeedSequence(config.seed).spawn(config.restarts)
    for child in children:
        starts.append(random_pure_state(d, np.random.default_rng(child)))
    for state in extra_starts:
        if not isinstance(state, PureState) or state.dim != d:
            raise ValueError("extra starts must be PureState values of dimension d")
        starts.append(state)

    best_state = None
    best_value = -np.inf
    best_key = None
    per_restart = np.empty(len(starts))
    evals_used = 0
    for i, start in enumerate(starts):
        result = nelder_mead(objective, _params_from_state(start), config)
        evals_used += result.evals
        amps = _amps_from_params(result.x)
        norm = np.linalg.norm(amps)
        if norm < 1e-12 or not np.isfinite(norm):
            state = start  # degenerate endpoint; keep the honest start
        else:
            state = PureState.normalized(amps)
        value = pguess_sdp(ensemble(GameConfig(d, g), state), config.sdp_tol).dual_value
        per_restart[i] = value
        key = tuple(np.round(_params_from_state(state), 12))
        if value > best_value or (value == best_value and key < best_key):
            best_state, best_value, best_key = state, value, key
    if failures:
        log.warning(
            "%d of %d objective evaluations failed to solve and scored 0",
            failures,
            evals_used,
        )
    return OptResult(
        best_state=best_state,
        best_value=best_value,
        per_restart_values=per_restart,
        evals_used=evals_used,
    )


def sweep_gamma(d: int, gamma_grid, config: OptimizerConfig) -> tuple:
    """maximize_pguess along an ascending coherence grid, warm-started.

    Each grid point derives its own seed from config.seed, and from the
    second point on the previous best state joins the random restarts
    as one extra start, so the reported curve is elementwise a valid
    lower bound and never loses ground to a neighboring point's basin.
    """
    grid = np.asarray(gamma_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 1:
        raise ValueError("gamma grid must be a nonempty 1-d array")
    if np.any(grid < 0.0) or np.any(grid > 1.0):
        raise ValueError("gamma grid must lie in [0, 1]")
    if np.any(np.diff(grid) < 0.0):
        raise ValueError("gamma grid must be sorted ascending")
    point_seeds = np.random.SeedSequence(config.seed).generate_state(
        grid.size, dtype=np.uint64
    )
    results = []
    previous = None
    for i, gamma in enumerate(grid):
        point_config = dataclasses.replace(config, seed=int(point_seeds[i]))
        extra = () if previous is None else (previous,)
        result = maximize_pguess(d, float(gamma), point_config, extra_starts=extra)
        previous = result.best_state
        results.append(result)
    return tuple(results)
