"""Shared strategies and generators for the test suite."""

import hypothesis.strategies as st
import numpy as np

from schmidt_forge import SampleSpec, make_spectrum, sample_haar_spectrum


@st.composite
def spectra(draw, min_dim=2, max_dim=10, min_value=1e-3):
    d = draw(st.integers(min_dim, max_dim))
    vals = draw(
        st.lists(
            st.floats(min_value, 1.0, allow_nan=False, allow_infinity=False),
            min_size=d,
            max_size=d,
        )
    )
    return make_spectrum(np.asarray(vals), normalize=True)


def haar(dim: int, seed: int):
    return sample_haar_spectrum(SampleSpec(dim=dim, seed=seed, count=1))[0]


def dirichlet_spectrum(rng: np.random.Generator, dim: int):
    return make_spectrum(rng.dirichlet(np.ones(dim)), normalize=True)


def random_reference(rng: np.random.Generator, dim: int, margin: float = 0.0):
    """Uniform reference purity in [1/D + margin * span, 1]."""
    from schmidt_forge import ReferenceLevel

    lo = 1.0 / dim
    u = rng.uniform(margin, 1.0)
    return ReferenceLevel(dim, lo + u * (1.0 - lo))
