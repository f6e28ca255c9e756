import itertools
import random

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci",
    derandomize=True,
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


def all_indices(shape):
    return itertools.product(*[range(d) for d in shape])


def random_array(rng, shape, elem_type=None):
    """Dense array with reproducible values for probe tests."""
    import ndkit as nd

    elem_type = elem_type or nd.FLOAT64
    n = nd.element_count(shape)
    if elem_type is nd.FLOAT64:
        vals = [rng.uniform(-100.0, 100.0) for _ in range(n)]
    elif elem_type is nd.INT64:
        vals = [rng.randint(-1000, 1000) for _ in range(n)]
    else:
        vals = [rng.random() < 0.5 for _ in range(n)]
    return nd.from_values(vals, shape, elem_type)
