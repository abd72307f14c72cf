import numpy as np
import pytest

from mabkcert.pauli import BlochVector


def random_bloch(rng: np.random.Generator) -> BlochVector:
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    return BlochVector(float(v[0]), float(v[1]), float(v[2]))


def bloch_with_z(z: float, rng: np.random.Generator) -> BlochVector:
    r = np.sqrt(1.0 - z * z)
    angle = rng.uniform(0.0, 2.0 * np.pi)
    return BlochVector(float(r * np.cos(angle)), float(r * np.sin(angle)), float(z))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240811)
