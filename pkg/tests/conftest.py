import pytest

from hypzero.checks import suite


@pytest.fixture(scope="session")
def random_suite():
    """The seeded 200-family suite shared by module and acceptance tests."""
    return suite(seed=0, draws=200)


def rel_err(a, b):
    import numpy as np
    a = np.asarray(a)
    b = np.asarray(b)
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(b))))
