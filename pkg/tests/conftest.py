import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240824)


def random_ab(rng, n, a_lo=0.05, a_hi=3.0, b_lo=0.05, b_hi=3.0):
    """Random (a, b) draws with a > 0, b > 0."""
    a = rng.uniform(a_lo, a_hi, n)
    b = rng.uniform(b_lo, b_hi, n)
    return np.column_stack([a, b])
