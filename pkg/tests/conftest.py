import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(20240901)))


def random_channel_probs(rng) -> np.ndarray:
    """Random Pauli-channel probability table (Dirichlet over 16 cells)."""
    p = rng.dirichlet(np.ones(16))
    return p.reshape(4, 4)
