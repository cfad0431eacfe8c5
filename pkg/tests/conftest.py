import numpy as np
import pytest

from blindspots import LindbladModel, Superposition, normalize

HBAR = 0.075

COMPACT_CENTERS = [(0.0, 0.0), (1.5, -0.1), (0.2, 1.5)]
OBLIQUE_CENTERS = [(0.0, 0.0), (-4.0, 0.3), (0.2, 3.0)]


def triplet(centers, hbar=HBAR, amps=(1.0, 1.0, 1.0)):
    return normalize(Superposition.from_centers(hbar, amps, centers))


def corner_triplet_state(d, hbar=HBAR):
    return triplet([(0.0, 0.0), (0.0, d), (d, 0.0)], hbar)


def random_identity_state(rng, n_terms, hbar, span=2.5):
    amps = rng.uniform(0.2, 1.0, n_terms) * np.exp(1j * rng.uniform(0, 2 * np.pi, n_terms))
    centers = rng.uniform(-span, span, (n_terms, 2))
    return normalize(Superposition.from_centers(hbar, amps, centers))


@pytest.fixture(scope="session")
def compact_triplet():
    return triplet(COMPACT_CENTERS)


@pytest.fixture(scope="session")
def oblique_triplet():
    return triplet(OBLIQUE_CENTERS)


@pytest.fixture(scope="session")
def corner_triplet():
    return corner_triplet_state(5.0)


@pytest.fixture(scope="session")
def pq_model():
    return LindbladModel.position_momentum()
