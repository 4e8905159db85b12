"""Numba kernels for the identity-lift trace-minimization barrier.

Hot inner loops behind ``sdp_core.solve_trace_min`` (for problems whose
constraints all use the identity lift, i.e. state-discrimination duals)
and the optimizer objective.  A 2x2 Hermitian matrix is carried as four
real coordinates (p, q, u, v) <-> [[p, u+iv], [u-iv, q]].

The solver follows the analytic center of  min Tr H - mu * sum_i
log det(H - A_i)  with damped Newton steps, dividing mu by 10 per outer
round.  After each centering it extracts the scaled slack inverses
Z_i = mu * (H - A_i)^-1, renormalizes them into an exact POVM
M_i = T^-1/2 Z_i T^-1/2 (T = sum Z_i), and uses L = sum Tr(M_i A_i) as
a certified lower bound against the feasible upper bound U = Tr H.
The reported value is accepted only once U - L <= tol, so the answer
is correct to tol regardless of how well centered the iterates are.
"""

import numpy as np
from numba import njit

STATUS_OK = 0
STATUS_BUDGET = 2
STATUS_MU_UNDERFLOW = 3

# Newton decrement^2 threshold that counts as "centered".
CENTER_TOL = 2e-13
MAX_OUTER = 40
MAX_INNER = 30


@njit(cache=True)
def _lam_max(p, q, u, v):
    return 0.5 * ((p + q) + np.sqrt((p - q) ** 2 + 4.0 * (u * u + v * v)))


@njit(cache=True)
def _lam_min(p, q, u, v):
    return 0.5 * ((p + q) - np.sqrt((p - q) ** 2 + 4.0 * (u * u + v * v)))


@njit(cache=True)
def _fval(th, bounds, mu):
    """Barrier objective Tr H - mu * sum log det(slack); (ok, value)."""
    f = th[0] + th[1]
    for i in range(bounds.shape[0]):
        sp = th[0] - bounds[i, 0]
        sq = th[1] - bounds[i, 1]
        su = th[2] - bounds[i, 2]
        sv = th[3] - bounds[i, 3]
        det = sp * sq - su * su - sv * sv
        if sp <= 0.0 or sq <= 0.0 or det <= 0.0:
            return False, 0.0
        f -= mu * np.log(det)
    return True, f


@njit(cache=True)
def _grad_hess(th, bounds, mu, grad, hess):
    """Gradient and Hessian of the barrier objective at a feasible point."""
    grad[0] = 1.0
    grad[1] = 1.0
    grad[2] = 0.0
    grad[3] = 0.0
    for j in range(4):
        for k in range(4):
            hess[j, k] = 0.0
    for i in range(bounds.shape[0]):
        sp = th[0] - bounds[i, 0]
        sq = th[1] - bounds[i, 1]
        su = th[2] - bounds[i, 2]
        sv = th[3] - bounds[i, 3]
        det = sp * sq - su * su - sv * sv
        if sp <= 0.0 or sq <= 0.0 or det <= 0.0:
            return False
        # W = slack^-1 = [[a, br+i*bi], [br-i*bi, c]]
        a = sq / det
        c = sp / det
        br = -su / det
        bi = -sv / det
        grad[0] -= mu * a
        grad[1] -= mu * c
        grad[2] -= mu * 2.0 * br
        grad[3] -= mu * 2.0 * bi
        # Tr(W E_j W E_k) in the Hermitian basis E0=diag(1,0), E1=diag(0,1),
        # E2=[[0,1],[1,0]], E3=[[0,i],[-i,0]]
        bb = br * br + bi * bi
        dd = br * br - bi * bi
        hess[0, 0] += mu * a * a
        hess[0, 1] += mu * bb
        hess[0, 2] += mu * 2.0 * a * br
        hess[0, 3] += mu * 2.0 * a * bi
        hess[1, 1] += mu * c * c
        hess[1, 2] += mu * 2.0 * c * br
        hess[1, 3] += mu * 2.0 * c * bi
        hess[2, 2] += mu * (2.0 * a * c + 2.0 * dd)
        hess[2, 3] += mu * 4.0 * br * bi
        hess[3, 3] += mu * (2.0 * a * c - 2.0 * dd)
    hess[1, 0] = hess[0, 1]
    hess[2, 0] = hess[0, 2]
    hess[3, 0] = hess[0, 3]
    hess[2, 1] = hess[1, 2]
    hess[3, 1] = hess[1, 3]
    hess[3, 2] = hess[2, 3]
    return True


@njit(cache=True)
def _chol_solve4(hm, rhs, out):
    """Solve the 4x4 SPD system hm @ out = rhs; False if not SPD."""
    l = np.zeros((4, 4))
    for j in range(4):
        s = hm[j, j]
        for k in range(j):
            s -= l[j, k] * l[j, k]
        if s <= 0.0 or not np.isfinite(s):
            return False
        l[j, j] = np.sqrt(s)
        for i in range(j + 1, 4):
            t = hm[i, j]
            for k in range(j):
                t -= l[i, k] * l[j, k]
            l[i, j] = t / l[j, j]
    y = np.zeros(4)
    for i in range(4):
        t = rhs[i]
        for k in range(i):
            t -= l[i, k] * y[k]
        y[i] = t / l[i, i]
    for i in range(3, -1, -1):
        t = y[i]
        for k in range(i + 1, 4):
            t -= l[k, i] * out[k]
        out[i] = t / l[i, i]
    return True


@njit(cache=True)
def _newton_dir(hess, grad, delta):
    """Newton direction -hess^-1 grad, with a deterministic ridge fallback."""
    rhs = np.empty(4)
    for k in range(4):
        rhs[k] = -grad[k]
    if _chol_solve4(hess, rhs, delta):
        return
    tr = hess[0, 0] + hess[1, 1] + hess[2, 2] + hess[3, 3]
    ridge = 1e-14 * (tr if tr > 0.0 else 1.0)
    hm = np.empty((4, 4))
    for _ in range(8):
        for j in range(4):
            for k in range(4):
                hm[j, k] = hess[j, k]
            hm[j, j] += ridge
        if _chol_solve4(hm, rhs, delta):
            return
        ridge *= 100.0
    for k in range(4):
        delta[k] = rhs[k]


@njit(cache=True)
def _dual_bracket(th, bounds, mu, mout):
    """Certified lower bound from the renormalized dual POVM.

    Writes the POVM elements (as 4-real coordinates) into ``mout`` and
    returns sum_i Tr(M_i A_i), or -1e300 when the extraction is not
    available at this iterate.
    """
    m = bounds.shape[0]
    ta = 0.0
    tc = 0.0
    tbr = 0.0
    tbi = 0.0
    for i in range(m):
        sp = th[0] - bounds[i, 0]
        sq = th[1] - bounds[i, 1]
        su = th[2] - bounds[i, 2]
        sv = th[3] - bounds[i, 3]
        det = sp * sq - su * su - sv * sv
        if sp <= 0.0 or sq <= 0.0 or det <= 0.0:
            return -1e300
        za = mu * sq / det
        zc = mu * sp / det
        zbr = -mu * su / det
        zbi = -mu * sv / det
        mout[i, 0] = za
        mout[i, 1] = zc
        mout[i, 2] = zbr
        mout[i, 3] = zbi
        ta += za
        tc += zc
        tbr += zbr
        tbi += zbi
    dt = ta * tc - tbr * tbr - tbi * tbi
    if dt <= 0.0 or ta <= 0.0 or tc <= 0.0:
        return -1e300
    # R = T^-1/2 via sqrt(T) = (T + sqrt(det T) I) / sqrt(tr T + 2 sqrt(det T))
    s = np.sqrt(dt)
    k2 = ta + tc + 2.0 * s
    if k2 <= 0.0:
        return -1e300
    kk = np.sqrt(k2) * s
    ra = (tc + s) / kk
    rc = (ta + s) / kk
    rb = complex(-tbr, -tbi) / kk
    rbc = np.conj(rb)
    lsum = 0.0
    for i in range(m):
        za = mout[i, 0]
        zc = mout[i, 1]
        zb = complex(mout[i, 2], mout[i, 3])
        zbc = np.conj(zb)
        # M = R Z R with Hermitian R, Z
        x00 = ra * za + rb * zbc
        x01 = ra * zb + rb * zc
        x10 = rbc * za + rc * zbc
        x11 = rbc * zb + rc * zc
        m00 = x00 * ra + x01 * rbc
        m01 = x00 * rb + x01 * rc
        m11 = x10 * rb + x11 * rc
        ma = m00.real
        mc = m11.real
        mbr = m01.real
        mbi = m01.imag
        mout[i, 0] = ma
        mout[i, 1] = mc
        mout[i, 2] = mbr
        mout[i, 3] = mbi
        lsum += ma * bounds[i, 0] + mc * bounds[i, 1] + 2.0 * (mbr * bounds[i, 2] + mbi * bounds[i, 3])
    return lsum


@njit(cache=True)
def solve_identity(bounds, tol, newton_budget):
    """Barrier solve of min Tr H s.t. H >= A_i for 2x2 Hermitian bounds.

    ``bounds`` is an (m, 4) array of constraint coordinates.  Returns
    (theta, value, dual_value, min_slack, iterations, mu, status, povm)
    where status 0 means the bracket value - dual_value <= tol was
    certified, 2 means the Newton budget ran out, and 3 means the
    barrier parameter underflowed.
    """
    m = bounds.shape[0]
    lam = -1e300
    for i in range(m):
        lm = _lam_max(bounds[i, 0], bounds[i, 1], bounds[i, 2], bounds[i, 3])
        if lm > lam:
            lam = lm
    th = np.zeros(4)
    th[0] = lam + 1.0
    th[1] = lam + 1.0
    grad = np.zeros(4)
    hess = np.zeros((4, 4))
    delta = np.zeros(4)
    thn = np.zeros(4)
    mout = np.zeros((m, 4))
    mbest = np.zeros((m, 4))
    mu = 1.0
    iters = 0
    status = STATUS_MU_UNDERFLOW
    lbest = -1e300
    for _outer in range(MAX_OUTER):
        for _inner in range(MAX_INNER):
            if not _grad_hess(th, bounds, mu, grad, hess):
                break
            _newton_dir(hess, grad, delta)
            lam2 = -(grad[0] * delta[0] + grad[1] * delta[1] + grad[2] * delta[2] + grad[3] * delta[3])
            if lam2 < CENTER_TOL:
                break
            if iters >= newton_budget:
                break
            iters += 1
            lamn = np.sqrt(lam2) if lam2 > 0.0 else 0.0
            t = 1.0 if lamn <= 0.25 else 1.0 / (1.0 + lamn)
            okf, f0 = _fval(th, bounds, mu)
            moved = False
            for _bt in range(60):
                for k in range(4):
                    thn[k] = th[k] + t * delta[k]
                okn, f1 = _fval(thn, bounds, mu)
                if okn and f1 <= f0 + 1e-12 * (1.0 + abs(f0)):
                    for k in range(4):
                        th[k] = thn[k]
                    moved = True
                    break
                t *= 0.5
            if not moved:
                break
        u = th[0] + th[1]
        l = _dual_bracket(th, bounds, mu, mout)
        if l > lbest:
            lbest = l
            for i in range(m):
                for k in range(4):
                    mbest[i, k] = mout[i, k]
        if u - lbest <= tol:
            status = STATUS_OK
            break
        if iters >= newton_budget:
            status = STATUS_BUDGET
            break
        mu *= 0.1
        if mu < 1e-18:
            status = STATUS_MU_UNDERFLOW
            break
    min_slack = 1e300
    for i in range(m):
        sp = th[0] - bounds[i, 0]
        sq = th[1] - bounds[i, 1]
        su = th[2] - bounds[i, 2]
        sv = th[3] - bounds[i, 3]
        lmin = _lam_min(sp, sq, su, sv)
        if lmin < min_slack:
            min_slack = lmin
    return th, th[0] + th[1], lbest, min_slack, iters, mu, status, mbest


@njit(cache=True)
def pguess_value(theta, fmat, gamma, tol, newton_budget):
    """Certified guessing probability for raw optimizer coordinates.

    ``theta`` holds 2d reals (re, im interleaved) that normalize to
    Bob's input state; ``fmat`` is the d x d Fourier matrix.  Returns
    the SDP dual value, or 0.0 when the point is degenerate or the
    solve fails (the search treats that point as worthless).
    """
    d = fmat.shape[0]
    n2 = 0.0
    for k in range(2 * d):
        n2 += theta[k] * theta[k]
    if not np.isfinite(n2) or n2 < 1e-280:
        return 0.0
    inv = 1.0 / np.sqrt(n2)
    a = np.empty(d, dtype=np.complex128)
    for k in range(d):
        a[k] = complex(theta[2 * k], theta[2 * k + 1]) * inv
    bounds = np.empty((d, 4))
    for x in range(d):
        bx = 0.0j
        for k in range(d):
            bx += fmat[x, k] * a[k]
        ab = a[x] * np.conj(bx)
        bounds[x, 0] = 0.5 * (a[x].real * a[x].real + a[x].imag * a[x].imag)
        bounds[x, 1] = 0.5 * (bx.real * bx.real + bx.imag * bx.imag)
        bounds[x, 2] = 0.5 * gamma * ab.real
        bounds[x, 3] = 0.5 * gamma * ab.imag
    th, u, l, ms, iters, mu, status, mout = solve_identity(bounds, tol, newton_budget)
    if status != STATUS_OK:
        return 0.0
    return u
