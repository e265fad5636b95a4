import numpy as np
import pytest

from qdnoise import ArrayGeometry, CorrelationSet, DimerPartition, MaterialParams, shell_wavevector


@pytest.fixture(scope="session")
def gaas():
    return MaterialParams()


@pytest.fixture(scope="session")
def abar(gaas):
    """Resonant spacing 2 pi / qbar for E = 5 meV."""
    return 2.0 * np.pi / shell_wavevector(5.0, gaas.sound_speed)


@pytest.fixture(scope="session")
def array4(gaas, abar):
    """The reference device: four dots at the resonant spacing."""
    return ArrayGeometry(n_dots=4, well_width=4.0, splitting=5.0, spacing=abar)


@pytest.fixture(scope="session")
def partition4():
    return DimerPartition(((1, 2), (3, 4)))


@pytest.fixture(scope="session")
def cset4(array4, gaas):
    """Full correlation set at the reference device; shared (expensive)."""
    return CorrelationSet.compute(array4, gaas, 10.0)


def random_psd_equal_diagonal(rng: np.random.Generator, n: int) -> np.ndarray:
    """Random PSD matrix with constant diagonal (identical-dots symmetry)."""
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    m = a @ a.conj().T + n * np.eye(n)
    d = np.sqrt(np.diag(m).real)
    return m / np.outer(d, d) * rng.uniform(0.2, 3.0)
