"""Dense complex linear algebra for small quantum systems.

All matrices are plain numpy ``complex128`` arrays, sized for at most a
few dozen rows.  Provides the discrete Fourier matrix, Hermitian
eigendecomposition with a deterministic ordering, trace norms, partial
traces, Schmidt coefficients, and a value-comparable pure-state type
with a canonical global phase.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Absolute tolerance below which a matrix counts as Hermitian.
HERMITIAN_ATOL = 1e-12
# Amplitudes with modulus below this are ignored when fixing the global phase.
PHASE_ATOL = 1e-10
# Validation tolerance for density matrices (Hermiticity / trace / PSD).
DENSITY_ATOL = 1e-10


def dag(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(m).conj().T


def is_hermitian(m: np.ndarray, atol: float = HERMITIAN_ATOL) -> bool:
    """True iff max elementwise deviation |M - M^dag| is below ``atol``."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.max(np.abs(m - m.conj().T)) < atol)


def assert_hermitian(m: np.ndarray, atol: float = HERMITIAN_ATOL, what: str = "matrix") -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{what} must be square, got shape {m.shape}")
    dev = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    if not np.isfinite(m.view(np.float64)).all():
        raise ValueError(f"{what} contains non-finite entries")
    if dev >= atol:
        raise ValueError(f"{what} is not Hermitian (max deviation {dev:.3e} >= {atol:.0e})")
    return m


def assert_density_matrix(m: np.ndarray, atol: float = DENSITY_ATOL, what: str = "density matrix") -> np.ndarray:
    """Validate a density matrix: Hermitian, unit trace and PSD within ``atol``.

    Violations are hard errors so that nothing questionable reaches the
    SDP layer.  Returns the input as a complex array.
    """
    m = assert_hermitian(m, atol=atol, what=what)
    tr = float(m.trace().real)
    if abs(tr - 1.0) > atol:
        raise ValueError(f"{what} has trace {tr!r}, expected 1")
    lo = float(np.linalg.eigvalsh(m)[0])
    if lo < -atol:
        raise ValueError(f"{what} is not PSD (min eigenvalue {lo:.3e})")
    return m


def basis_state(d: int, i: int) -> np.ndarray:
    """The computational basis ket |i> as a length-d complex vector."""
    if not 0 <= i < d:
        raise ValueError(f"basis index {i} out of range for dimension {d}")
    v = np.zeros(d, dtype=np.complex128)
    v[i] = 1.0
    return v


def fourier_matrix(d: int) -> np.ndarray:
    """Discrete Fourier matrix F with F[k, j] = omega^(jk)/sqrt(d).

    omega = exp(2*pi*i/d), so F|j> = (1/sqrt(d)) sum_k omega^(jk) |k>.
    For d=2 this is the Hadamard matrix.
    """
    d = int(d)
    if d < 1:
        raise ValueError("dimension must be a positive integer")
    idx = np.arange(d)
    return np.exp(2j * np.pi * np.outer(idx, idx) / d) / np.sqrt(d)


def _canonical_column_phases(v: np.ndarray) -> np.ndarray:
    """Rotate each column so its first non-negligible entry is real >= 0."""
    v = v.copy()
    for k in range(v.shape[1]):
        col = v[:, k]
        nz = np.flatnonzero(np.abs(col) > PHASE_ATOL)
        if nz.size:
            pivot = col[nz[0]]
            v[:, k] = col * (pivot.conjugate() / abs(pivot))
    return v


def eig_hermitian(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Returns ``(w, v)`` with ``m = v @ diag(w) @ v.conj().T``; column k of
    ``v`` is the eigenvector of ``w[k]``.  Ordering is deterministic:
    eigenvalues descend, exact ties are broken by the lexicographic
    order of the eigenvector entries as (re, im) pairs, and each column
    carries a canonical global phase.  Non-Hermitian input is rejected.
    """
    m = assert_hermitian(m)
    w, v = np.linalg.eigh(m)
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = _canonical_column_phases(v[:, order])
    # break exact eigenvalue ties by eigenvector lexicographic order
    i = 0
    n = w.size
    while i < n:
        j = i
        while j + 1 < n and w[j + 1] == w[i]:
            j += 1
        if j > i:
            cols = sorted(
                range(i, j + 1),
                key=lambda k: tuple((float(z.real), float(z.imag)) for z in v[:, k]),
            )
            v[:, i : j + 1] = v[:, cols]
        i = j + 1
    return w, v


def trace_norm_hermitian(m: np.ndarray) -> float:
    """Trace norm (sum of |eigenvalues|) of a Hermitian matrix."""
    m = assert_hermitian(m)
    return float(np.sum(np.abs(np.linalg.eigvalsh(m))))


def abs_hermitian(m: np.ndarray) -> np.ndarray:
    """Matrix absolute value |M| = V |diag| V^dag of a Hermitian M."""
    w, v = eig_hermitian(m)
    return (v * np.abs(w)) @ v.conj().T


def partial_trace(m: np.ndarray, dims: tuple[int, int], keep: str) -> np.ndarray:
    """Partial trace of a bipartite operator on dims (dA, dB).

    ``keep`` selects the surviving factor, "A" or "B".  The input must
    be square with side dA*dB (row-major tensor ordering, A first).
    """
    da, db = int(dims[0]), int(dims[1])
    m = np.asarray(m, dtype=np.complex128)
    if m.shape != (da * db, da * db):
        raise ValueError(f"operator shape {m.shape} does not match dims {(da, db)}")
    t = m.reshape(da, db, da, db)
    if keep == "A":
        return np.trace(t, axis1=1, axis2=3)
    if keep == "B":
        return np.trace(t, axis1=0, axis2=2)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


@dataclass(frozen=True)
class PureState:
    """Unit vector with a canonical global phase.

    The constructor accepts any sequence of complex amplitudes whose
    norm is within 1e-6 of one (it renormalizes the residual drift),
    then rotates the global phase so the first amplitude with modulus
    above 1e-10 is real and non-negative.  Two PureStates representing
    the same ray therefore compare equal entrywise.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1).copy()
        if amps.size == 0:
            raise ValueError("state needs at least one amplitude")
        if not np.isfinite(amps.view(np.float64)).all():
            raise ValueError("state contains non-finite amplitudes")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > 1e-6:
            raise ValueError(f"state norm {norm!r} too far from 1; use PureState.normalized")
        amps /= norm
        nz = np.flatnonzero(np.abs(amps) > PHASE_ATOL)
        if nz.size:
            pivot = amps[nz[0]]
            amps *= pivot.conjugate() / abs(pivot)
            amps[nz[0]] = abs(amps[nz[0]])
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, amplitudes) -> "PureState":
        """Build a PureState from any nonzero amplitude vector."""
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        norm = float(np.linalg.norm(amps))
        if not np.isfinite(norm) or norm < 1e-150:
            raise ValueError("cannot normalize a (near-)zero or non-finite vector")
        return cls(amps / norm)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density(self) -> np.ndarray:
        """Rank-one projector |psi><psi|."""
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def __eq__(self, other):
        if not isinstance(other, PureState):
            return NotImplemented
        return self.dim == other.dim and bool(np.array_equal(self.amplitudes, other.amplitudes))

    def __hash__(self):
        return hash(self.amplitudes.tobytes())


def schmidt_coefficients(psi, dims: tuple[int, int]) -> np.ndarray:
    """Schmidt coefficients (descending singular values) across an A|B cut.

    ``psi`` may be a PureState or a plain amplitude vector of length
    dA*dB; the coefficients are the singular values of the dA x dB
    amplitude matrix, whose squares sum to 1 for a normalized state.
    """
    da, db = int(dims[0]), int(dims[1])
    amps = psi.amplitudes if isinstance(psi, PureState) else np.asarray(psi, dtype=np.complex128).reshape(-1)
    if amps.size != da * db:
        raise ValueError(f"state dimension {amps.size} does not match dims {(da, db)}")
    return np.linalg.svd(amps.reshape(da, db), compute_uv=False)
