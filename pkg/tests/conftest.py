import numpy as np
import pytest

from tatekit.groups import cyclic, direct_product


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def klein():
    return direct_product(cyclic(2), cyclic(2))


def small_groups(max_order=6):
    """Cyclic groups of order 2..max_order, the Klein four-group and C2 x C3."""
    out = [cyclic(n) for n in range(2, max_order + 1)]
    if max_order >= 4:
        out.append(direct_product(cyclic(2), cyclic(2)))
    if max_order >= 6:
        out.append(direct_product(cyclic(2), cyclic(3)))
    return out
