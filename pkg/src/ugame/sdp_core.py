"""Interior-point solver for one family of small SDPs.

    minimize  Tr H   over 2x2 Hermitian H
    such that Lift_i(H) >= A_i            for every constraint i

where Lift is either the identity (H against a 2x2 bound; the shape of
state-discrimination duals) or H (x) I_d (the shape of conditional
min-entropy duals).  The algorithm is log-det barrier path following on
the 4 real coordinates of H: damped Newton centering, barrier weight mu
divided by 10 per outer round, strictly feasible start
H0 = (max_i lam_max(A_i) + 1) I, and a global budget of 200 Newton
steps.

Every solve is certified: at each outer round the scaled slack
inverses Z_i = mu (Lift_i(H) - A_i)^-1 are renormalized into exact dual
multipliers (a POVM for identity lifts), giving a lower bound L that
must come within ``tol`` of the feasible value U = Tr H before the
solver reports success.  Non-convergence raises ``SolverError`` with
the last iterate and residuals; there is no silent wrong answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import _kernels
from .linalg import assert_hermitian, eig_hermitian

NEWTON_BUDGET = 200
TOL_MIN, TOL_MAX = 1e-12, 1e-3

# Hermitian coordinate basis: H = t0 E0 + t1 E1 + t2 E2 + t3 E3.
_BASIS = (
    np.array([[1.0, 0.0], [0.0, 0.0]], dtype=np.complex128),
    np.array([[0.0, 0.0], [0.0, 1.0]], dtype=np.complex128),
    np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128),
    np.array([[0.0, 1.0j], [-1.0j, 0.0]], dtype=np.complex128),
)


@dataclass(frozen=True)
class Identity:
    """Lift placing H directly against a 2x2 bound."""


@dataclass(frozen=True)
class TensorIdentity:
    """Lift placing H (x) I_d against a 2d x 2d bound."""

    d: int

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"tensor factor dimension must be a positive integer, got {self.d!r}")
        object.__setattr__(self, "d", int(self.d))


IDENTITY = Identity()

Lift = Union[Identity, TensorIdentity]


@dataclass(frozen=True)
class Constraint:
    lift: Lift
    bound: np.ndarray

    def __post_init__(self):
        side = 2 if isinstance(self.lift, Identity) else 2 * self.lift.d
        b = assert_hermitian(self.bound, what="constraint bound")
        if b.shape != (side, side):
            raise ValueError(f"bound shape {b.shape} does not match lift (expected {(side, side)})")
        b = b.copy()
        b.flags.writeable = False
        object.__setattr__(self, "bound", b)


@dataclass(frozen=True)
class TraceMinProblem:
    """A list of (lift, bound) constraints; at least one required."""

    constraints: tuple

    def __post_init__(self):
        cons = tuple(
            c if isinstance(c, Constraint) else Constraint(lift=c[0], bound=c[1]) for c in self.constraints
        )
        if not cons:
            raise ValueError("a trace-min problem needs at least one constraint")
        object.__setattr__(self, "constraints", cons)

    @classmethod
    def from_states(cls, states) -> "TraceMinProblem":
        """Identity-lift problem H >= rho for each 2x2 state given."""
        return cls(tuple(Constraint(IDENTITY, s) for s in states))


@dataclass(frozen=True)
class TraceMinSolution:
    """Certified solution: ``value`` is within the requested tol of the infimum.

    ``dual_value`` is the certified lower bound and ``dual_operators``
    the renormalized dual multipliers that achieve it (for identity
    lifts: a POVM over the constraints).  ``min_slack`` is the smallest
    eigenvalue across all slack matrices of ``optimum``.
    """

    optimum: np.ndarray
    value: float
    min_slack: float
    iterations: int
    barrier_mu_final: float
    dual_value: float
    dual_operators: Optional[tuple] = None


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    min_slack: float


class SolverError(RuntimeError):
    """Barrier solve did not certify a value within tolerance."""

    def __init__(self, message, last_h=None, value=None, dual_value=None, min_slack=None, iterations=None, mu=None):
        super().__init__(message)
        self.last_h = last_h
        self.value = value
        self.dual_value = dual_value
        self.min_slack = min_slack
        self.iterations = iterations
        self.mu = mu


def _theta_to_mat(th) -> np.ndarray:
    return np.array(
        [[th[0], th[2] + 1j * th[3]], [th[2] - 1j * th[3], th[1]]],
        dtype=np.complex128,
    )


def _mat_to_coords(b: np.ndarray) -> tuple:
    return (float(b[0, 0].real), float(b[1, 1].real), float(b[0, 1].real), float(b[0, 1].imag))


def is_feasible(h: np.ndarray, problem: TraceMinProblem, slack_tol: float) -> FeasibilityReport:
    """Check every slack Lift_i(h) - A_i against -slack_tol."""
    h = assert_hermitian(h, what="candidate H")
    if h.shape != (2, 2):
        raise ValueError(f"candidate must be 2x2, got {h.shape}")
    worst = np.inf
    for c in problem.constraints:
        lifted = h if isinstance(c.lift, Identity) else np.kron(h, np.eye(c.lift.d))
        lo = float(np.linalg.eigvalsh(lifted - c.bound)[0])
        worst = min(worst, lo)
    return FeasibilityReport(feasible=bool(worst >= -slack_tol), min_slack=worst)


def solve_trace_min(problem: TraceMinProblem, tol: float = 1e-9) -> TraceMinSolution:
    """Solve the trace-min SDP to certified tolerance ``tol``.

    Deterministic for fixed inputs.  Raises SolverError (with the last
    iterate and residuals attached) if the 200-step Newton budget runs
    out before the primal/dual bracket closes.
    """
    if not TOL_MIN <= tol <= TOL_MAX:
        raise ValueError(f"tol must lie in [{TOL_MIN:g}, {TOL_MAX:g}], got {tol!r}")
    if all(isinstance(c.lift, Identity) for c in problem.constraints):
        return _solve_identity_fast(problem, tol)
    return _solve_general(problem, tol)


def _solve_identity_fast(problem: TraceMinProblem, tol: float) -> TraceMinSolution:
    bounds = np.array([_mat_to_coords(c.bound) for c in problem.constraints])
    th, value, dual_value, min_slack, iters, mu, status, mcoords = _kernels.solve_identity(
        bounds, tol, NEWTON_BUDGET
    )
    if status != _kernels.STATUS_OK:
        raise SolverError(
            f"barrier solve did not certify tol={tol:g} within {NEWTON_BUDGET} Newton steps "
            f"(status {status}, bracket {value - dual_value:.3e}, mu {mu:.3e})",
            last_h=_theta_to_mat(th),
            value=float(value),
            dual_value=float(dual_value),
            min_slack=float(min_slack),
            iterations=int(iters),
            mu=float(mu),
        )
    # dual coordinates share the (p, q, u, v) layout of theta
    povm = tuple(_theta_to_mat(m) for m in mcoords)
    return TraceMinSolution(
        optimum=_theta_to_mat(th),
        value=float(value),
        min_slack=float(min_slack),
        iterations=int(iters),
        barrier_mu_final=float(mu),
        dual_value=float(dual_value),
        dual_operators=povm,
    )


class _GeneralBarrier:
    """Numpy evaluation of the barrier pieces for arbitrary lift mixes."""

    def __init__(self, problem: TraceMinProblem):
        self.cons = []
        for c in problem.constraints:
            db = 1 if isinstance(c.lift, Identity) else c.lift.d
            eye = np.eye(db)
            basis = tuple(np.kron(e, eye) if db > 1 else e for e in _BASIS)
            self.cons.append((db, basis, np.asarray(c.bound, dtype=np.complex128)))

    def lam_max_start(self) -> float:
        return max(float(np.linalg.eigvalsh(b)[-1]) for _, _, b in self.cons)

    def slacks(self, th):
        h = _theta_to_mat(th)
        out = []
        for db, _, bound in self.cons:
            lifted = h if db == 1 else np.kron(h, np.eye(db))
            out.append(lifted - bound)
        return out

    def fval(self, th, mu):
        f = th[0] + th[1]
        for s in self.slacks(th):
            try:
                chol = np.linalg.cholesky(s)
            except np.linalg.LinAlgError:
                return False, 0.0
            f -= mu * 2.0 * float(np.sum(np.log(np.diag(chol).real)))
        return True, f

    def grad_hess(self, th, mu):
        grad = np.array([1.0, 1.0, 0.0, 0.0])
        hess = np.zeros((4, 4))
        for (db, basis, bound), s in zip(self.cons, self.slacks(th)):
            try:
                np.linalg.cholesky(s)
            except np.linalg.LinAlgError:
                return None, None
            w = np.linalg.inv(s)
            ps = [w @ e for e in basis]
            for k in range(4):
                grad[k] -= mu * float(np.trace(ps[k]).real)
            for j in range(4):
                for k in range(j, 4):
                    t = mu * float(np.tensordot(ps[j], ps[k].T).real)
                    hess[j, k] += t
                    if k != j:
                        hess[k, j] += t
        return grad, hess

    def bracket(self, th, mu):
        """(lower bound, dual operators) or (None, None) if unavailable."""
        zs = []
        t2 = np.zeros((2, 2), dtype=np.complex128)
        for (db, _, bound), s in zip(self.cons, self.slacks(th)):
            try:
                np.linalg.cholesky(s)
            except np.linalg.LinAlgError:
                return None, None
            z = mu * np.linalg.inv(s)
            zs.append(z)
            if db == 1:
                t2 += z
            else:
                t2 += np.trace(z.reshape(2, db, 2, db), axis1=1, axis2=3)
        w, v = np.linalg.eigh(t2)
        if w[0] <= 0.0:
            return None, None
        r = (v / np.sqrt(w)) @ v.conj().T
        lsum = 0.0
        duals = []
        for (db, _, bound), z in zip(self.cons, zs):
            rl = r if db == 1 else np.kron(r, np.eye(db))
            mmat = rl @ z @ rl
            duals.append(mmat)
            lsum += float(np.tensordot(mmat, bound.T).real)
        return lsum, tuple(duals)

    def min_slack(self, th) -> float:
        return min(float(np.linalg.eigvalsh(s)[0]) for s in self.slacks(th))


def _solve_general(problem: TraceMinProblem, tol: float) -> TraceMinSolution:
    barrier = _GeneralBarrier(problem)
    th = np.array([0.0, 0.0, 0.0, 0.0])
    th[0] = th[1] = barrier.lam_max_start() + 1.0
    mu = 1.0
    iters = 0
    lbest = -np.inf
    dual_ops = None
    status = "mu underflow"
    for _outer in range(_kernels.MAX_OUTER):
        for _inner in range(_kernels.MAX_INNER):
            grad, hess = barrier.grad_hess(th, mu)
            if grad is None:
                break
            delta = _ridge_solve(hess, -grad)
            lam2 = float(-grad @ delta)
            if lam2 < _kernels.CENTER_TOL:
                break
            if iters >= NEWTON_BUDGET:
                break
            iters += 1
            lamn = np.sqrt(lam2) if lam2 > 0.0 else 0.0
            t = 1.0 if lamn <= 0.25 else 1.0 / (1.0 + lamn)
            _, f0 = barrier.fval(th, mu)
            moved = False
            for _bt in range(60):
                thn = th + t * delta
                ok, f1 = barrier.fval(thn, mu)
                if ok and f1 <= f0 + 1e-12 * (1.0 + abs(f0)):
                    th = thn
                    moved = True
                    break
                t *= 0.5
            if not moved:
                break
        u = float(th[0] + th[1])
        l, ops = barrier.bracket(th, mu)
        if l is not None and l > lbest:
            lbest = l
            dual_ops = ops
        if u - lbest <= tol:
            status = "ok"
            break
        if iters >= NEWTON_BUDGET:
            status = "budget"
            break
        mu *= 0.1
        if mu < 1e-18:
            status = "mu underflow"
            break
    value = float(th[0] + th[1])
    min_slack = barrier.min_slack(th)
    if status != "ok":
        raise SolverError(
            f"barrier solve did not certify tol={tol:g} within {NEWTON_BUDGET} Newton steps "
            f"({status}, bracket {value - lbest:.3e}, mu {mu:.3e})",
            last_h=_theta_to_mat(th),
            value=value,
            dual_value=float(lbest),
            min_slack=min_slack,
            iterations=iters,
            mu=mu,
        )
    return TraceMinSolution(
        optimum=_theta_to_mat(th),
        value=value,
        min_slack=min_slack,
        iterations=iters,
        barrier_mu_final=mu,
        dual_value=float(lbest),
        dual_operators=dual_ops,
    )


def _ridge_solve(hess: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.solve(hess, rhs)
    except np.linalg.LinAlgError:
        pass
    ridge = 1e-14 * max(float(np.trace(hess)), 1.0)
    for _ in range(8):
        try:
            return np.linalg.solve(hess + ridge * np.eye(4), rhs)
        except np.linalg.LinAlgError:
            ridge *= 100.0
    return rhs.copy()
