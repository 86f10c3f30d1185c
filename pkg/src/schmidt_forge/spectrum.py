"""Schmidt spectra and the entanglement measures derived from them.

A bipartite pure qudit state is represented here only by the squares of its
Schmidt coefficients; the Schmidt basis kets are implicit in index position.
All types are immutable after construction and all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    EmptyInputError,
    InvalidSpectrumError,
    NegativeEntryError,
    NotNormalizedError,
)

#: stored spectra must sum to one within this
NORM_TOL = 1e-12
#: user-supplied coefficients may be off by this much before ingestion balks
INGEST_TOL = 1e-9


def _frozen_array(values) -> np.ndarray:
    a = np.array(values, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SchmidtSpectrum:
    """Squared Schmidt coefficients of a D-dimensional pure bipartite state."""

    dim: int
    sq_coeffs: np.ndarray

    def __post_init__(self):
        coeffs = _frozen_array(self.sq_coeffs)
        object.__setattr__(self, "sq_coeffs", coeffs)
        if coeffs.ndim != 1 or self.dim != coeffs.size:
            raise InvalidSpectrumError(
                f"dim={self.dim} does not match {coeffs.size} coefficients"
            )
        if self.dim < 2:
            raise InvalidSpectrumError("a bipartite spectrum needs dim >= 2")
        if np.any(coeffs < 0.0):
            raise NegativeEntryError("squared coefficients must be nonnegative")
        if np.any(coeffs > 1.0 + NORM_TOL):
            raise InvalidSpectrumError("a squared coefficient exceeds 1")
        total = float(np.sum(coeffs))
        if abs(total - 1.0) > NORM_TOL:
            raise NotNormalizedError(
                f"squared coefficients sum to {total!r}, not 1 within {NORM_TOL}"
            )

    @property
    def min_sq(self) -> float:
        return float(np.min(self.sq_coeffs))

    @property
    def rank(self) -> int:
        """Number of strictly positive coefficients."""
        return int(np.count_nonzero(self.sq_coeffs))


@dataclass(frozen=True)
class Measures:
    """Entanglement measures of one spectrum.

    ``schmidt_number`` is exactly ``1/purity`` and ``concurrence`` is the
    square root of ``concurrence_sq``; all four are views of one quantity.
    """

    concurrence: float
    concurrence_sq: float
    schmidt_number: float
    purity: float


def make_spectrum(values, input_kind: str = "squared", normalize: bool = False) -> SchmidtSpectrum:
    """Validate and build a spectrum from raw coefficients.

    ``input_kind`` is ``"squared"`` (values are a_m^2) or ``"amplitudes"``
    (values are a_m and get squared first). With ``normalize`` unset the
    squared values must already sum to 1 within ``INGEST_TOL``; either way the
    stored spectrum is rescaled to unit sum so downstream code sees exact
    normalization.
    """
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise EmptyInputError("no coefficients given")
    if np.any(arr < 0.0):
        raise NegativeEntryError("coefficients must be nonnegative")
    if input_kind == "amplitudes":
        arr = arr * arr
    elif input_kind != "squared":
        raise ValueError(f"unknown input_kind {input_kind!r}")
    total = float(np.sum(arr))
    if total <= 0.0:
        raise NotNormalizedError("all-zero coefficient list cannot be normalized")
    if not normalize and abs(total - 1.0) > INGEST_TOL:
        raise NotNormalizedError(
            f"squared coefficients sum to {total!r}; pass normalize=True to rescale"
        )
    arr = arr / total
    return SchmidtSpectrum(int(arr.size), arr)


def measures(s: SchmidtSpectrum) -> Measures:
    """Purity, Schmidt number and I-Concurrence of a spectrum."""
    sq = s.sq_coeffs
    purity = float(np.dot(sq, sq))
    d = s.dim
    c_sq = (d / (d - 1.0)) * (1.0 - purity)
    c_sq = min(max(c_sq, 0.0), 1.0)  # clip float residue at the range ends
    return Measures(
        concurrence=float(np.sqrt(c_sq)),
        concurrence_sq=c_sq,
        schmidt_number=1.0 / purity,
        purity=purity,
    )


def sort_descending(s: SchmidtSpectrum) -> tuple[SchmidtSpectrum, tuple[int, ...]]:
    """Sort coefficients in nonincreasing order.

    Returns the sorted spectrum and a permutation mapping sorted index to
    original index. The sort is stable: ties keep their original order, so
    repeated coefficients always produce the same permutation.
    """
    perm = np.argsort(-s.sq_coeffs, kind="stable")
    sorted_spectrum = SchmidtSpectrum(s.dim, s.sq_coeffs[perm])
    return sorted_spectrum, tuple(int(i) for i in perm)


def invert_permutation(perm) -> tuple[int, ...]:
    inv = np.empty(len(perm), dtype=int)
    inv[np.asarray(perm, dtype=int)] = np.arange(len(perm))
    return tuple(int(i) for i in inv)


def unsort(values, perm) -> np.ndarray:
    """Undo :func:`sort_descending`: scatter sorted values back to original slots."""
    values = np.asarray(values)
    out = np.empty_like(values)
    out[np.asarray(perm, dtype=int)] = values
    return out
