import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from holologic.holostate import HoloPoly

finite = st.floats(min_value=-3, max_value=3, allow_nan=False, allow_infinity=False).map(lambda v: round(v, 6))
coeffs = st.builds(complex, finite, finite)


def indices(dim, max_degree):
    return [a for a in itertools.product(range(max_degree + 1), repeat=dim) if sum(a) <= max_degree]


@st.composite
def polys(draw, dim=None, max_degree=None, min_terms=0):
    d = draw(st.integers(1, 3)) if dim is None else dim
    D = draw(st.integers(0, 3)) if max_degree is None else max_degree
    keys = draw(st.lists(st.sampled_from(indices(d, D)), min_size=min_terms, max_size=6, unique=True))
    return HoloPoly(d, D, {k: draw(coeffs) for k in keys})


def random_poly(rng, dim, max_degree, density=0.7):
    terms = {}
    for idx in indices(dim, max_degree):
        if rng.random() < density:
            terms[idx] = complex(rng.normal(), rng.normal())
    return HoloPoly(dim, max_degree, terms)


def assert_poly_close(f, g, tol=1e-12):
    keys = set(f.terms) | set(g.terms)
    for k in keys:
        assert abs(f.coefficient(k) - g.coefficient(k)) <= tol, (k, f.coefficient(k), g.coefficient(k))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
