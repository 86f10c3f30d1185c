"""Reproducible random Schmidt spectra.

Spectra are drawn from the measure induced by partial-tracing a Haar-random
pure state of two D-dimensional parties: normalized squared singular values
of a D x D matrix with independent standard complex Gaussian entries. Such a
state carries a Schmidt number around D/2. Sampling is seeded per spectrum
(``seed + index``) so results do not depend on how work is split.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectrum import SchmidtSpectrum


@dataclass(frozen=True)
class SampleSpec:
    """What to sample: dimension, base seed, number of spectra."""

    dim: int
    seed: int
    count: int

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("dim must be >= 2")
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit an unsigned 64-bit integer")


def _one_spectrum(dim: int, seed: int) -> SchmidtSpectrum:
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    # squared singular values via the Gram matrix; clip rounding negatives
    w = np.linalg.eigvalsh(g.conj().T @ g)
    w = np.clip(w, 0.0, None)[::-1]
    w /= w.sum()
    return SchmidtSpectrum(dim, w)


def sample_haar_spectrum(spec: SampleSpec) -> list[SchmidtSpectrum]:
    """Draw ``spec.count`` spectra, deterministically in ``spec.seed``."""
    return [_one_spectrum(spec.dim, spec.seed + i) for i in range(spec.count)]
