import pytest

from ugame.optimizer import OptimizerConfig, maximize_pguess


@pytest.fixture(scope="session")
def best_at_full_coherence():
    """Best states found at gamma = 1 for d = 3, 4, 5.

    One expensive multi-start search per dimension (256 restarts,
    fixed seed), shared by every test that needs the full-coherence
    optima: the no-perfect-guessing bound, the Schmidt profiles, and
    the d = 4 / d = 5 comparison.
    """
    config = OptimizerConfig(restarts=256, seed=11)
    return {d: maximize_pguess(d, 1.0, config) for d in (3, 4, 5)}
