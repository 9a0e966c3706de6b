import cmath
import math

import numpy as np
import pytest

from tritstate.oracle import enumerate_functions, roots_of_unity_encoding
from tritstate.partition import decompose_bases, partition_rays

# alpha written out from its real and imaginary parts, not via exp()
ALPHA = complex(-0.5, math.sqrt(3) / 2)
ALPHABAR = ALPHA.conjugate()

# the nine printed vectors, grouped by column of the scheme table
PAPER_COLUMNS = (
    ((1, 1, 1), (1, ALPHA, ALPHABAR), (1, ALPHABAR, ALPHA)),
    ((1, 1, ALPHA), (1, ALPHA, 1), (ALPHA, 1, 1)),
    ((1, 1, ALPHABAR), (1, ALPHABAR, 1), (ALPHABAR, 1, 1)),
)


def parallel(u, v, tol=1e-9):
    """Cauchy-Schwarz equality: u and v span the same complex line."""
    u, v = np.asarray(u, dtype=complex), np.asarray(v, dtype=complex)
    return abs(abs(np.vdot(v, u)) - np.linalg.norm(u) * np.linalg.norm(v)) < tol


@pytest.fixture(scope="session")
def paper_table():
    return partition_rays(enumerate_functions(3), roots_of_unity_encoding(3))


@pytest.fixture(scope="session")
def paper_decomp(paper_table):
    return decompose_bases(paper_table)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def test_alpha_constant_agrees_with_exponential():
    assert abs(ALPHA - cmath.exp(2j * cmath.pi / 3)) < 1e-15
