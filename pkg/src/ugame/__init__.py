"""Uncertainty guessing-game toolkit.

A small library for a two-measurement guessing game on a d-dimensional
system: a qubit register R with coherence gamma selects between the
standard and Fourier measurement bases, and the guessing probability of
the measurement outcome given R is computed by quantum state
discrimination.  Closed forms, a specialized trace-minimization SDP
solver with dual certificates, a multi-start Nelder-Mead search over
input states, and conditional min-entropy curves are included, plus a
CLI that renders the standard sweeps to CSV/SVG.
"""

__version__ = "0.1.0"

from . import analytic, discrimination, entropy, game, linalg, optimizer, sdp_core

__all__ = [
    "__version__",
    "analytic",
    "discrimination",
    "entropy",
    "game",
    "linalg",
    "optimizer",
    "sdp_core",
]
