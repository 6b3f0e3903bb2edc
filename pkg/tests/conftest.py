import numpy as np
import pytest

from probgate.states import QubitState


def random_state(rng: np.random.Generator, real: bool = False) -> QubitState:
    if real:
        t = rng.uniform(0, 2 * np.pi)
        return QubitState(np.cos(t), np.sin(t))
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    v /= np.linalg.norm(v)
    return QubitState(v[0], v[1])


def random_psd(rng: np.random.Generator, n: int, rank: int | None = None) -> np.ndarray:
    rank = n if rank is None else rank
    f = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    return f @ f.conj().T


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
