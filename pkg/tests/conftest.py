import math

import numpy as np
import pytest

from roundcone import SubspaceBasis, kernels, orthonormalize


def random_subspace(rng, n, k):
    if k == 0:
        return SubspaceBasis.zero(n)
    return orthonormalize(rng.standard_normal((k, n)), n)


def random_unit(rng, n):
    x = rng.standard_normal(n)
    return x / np.linalg.norm(x)


def literal_phi1(phi, psi):
    """Projected aperture straight from the arccos/sqrt expression."""
    c2 = math.cos(psi) ** 2
    return math.acos(math.sqrt(max(0.0, (math.cos(phi) ** 2 - c2) / (1.0 - c2))))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def xy_plane():
    return SubspaceBasis.coordinate([0, 1], 3)


BACKENDS = [pytest.param(kernels.python, id="python")]
if kernels.compiled is not None:
    BACKENDS.append(pytest.param(kernels.compiled, id="cython"))


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param
