import numpy as np
import pytest

from ncequi import constructions
from ncequi.algebra import AlgebraDescriptor
from ncequi.equiangular import Configuration

# scalar seeds with their exact equiangular target a
SCALAR_SEEDS = {
    "orthonormal": (lambda: constructions.orthonormal(2), 0.0),
    "trine": (constructions.trine, 0.25),
    "etf_3_2": (constructions.etf_3_2, 0.25),
    "sic_d2": (constructions.sic_d2, 1 / 3),
    "icosahedron": (constructions.icosahedron, 0.2),
}


@pytest.fixture
def rng():
    return np.random.default_rng(20241016)


def random_config(rng, algebra: AlgebraDescriptor, d: int, n: int) -> Configuration:
    arrays = [rng.standard_normal((n, d, m, m)) + 1j * rng.standard_normal((n, d, m, m))
              for m in algebra.block_sizes]
    return Configuration.from_block_arrays(algebra, arrays)


def random_unitary(rng, k: int) -> np.ndarray:
    z = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))
