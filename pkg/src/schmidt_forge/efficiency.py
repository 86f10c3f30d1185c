"""Efficiency-optimal entanglement concentration.

The planner maximizes the payoff

    Q(y) = p_s(y)^2 * (C(y)^2 - C_ref^2)
         = D/(D-1) * [ P_ref * (sum_m a_m^2 y_m)^2 - sum_m a_m^4 y_m^2 ]

over the box 0 <= y_m <= 1, where y_m are the squared diagonal Kraus weights
and P_ref = 1 - (D-1)/D * C_ref^2 is the reference purity. The maximizer is
closed form: crop the n largest squared coefficients down to a common level
and leave the rest untouched, with n as large as the feasibility conditions
allow. Working in x_m = a_m^2 y_m, the payoff (up to the D/(D-1) factor) is
P_ref * (sum x)^2 - sum x^2 on the orthotope 0 <= x_m <= a_m^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    InfeasibleError,
    OutOfRangeError,
    RankDeficientFullConcentrationError,
    YOutOfBoxError,
)
from .spectrum import Measures, SchmidtSpectrum, measures, sort_descending, unsort

#: feasibility comparisons share this additive tolerance; at exact equality
#: the n and n-1 plans coincide, so inclusion is harmless
FEAS_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ReferenceLevel:
    """Reference purity P_ref with its equivalent views.

    The three parameterizations (reference purity, squared reference
    I-Concurrence, reference Schmidt number) store one number; ``p_ref`` is
    canonical.
    """

    dim: int
    p_ref: float

    def __post_init__(self):
        lo = 1.0 / self.dim
        if not lo - FEAS_TOL <= self.p_ref <= 1.0 + FEAS_TOL:
            raise OutOfRangeError(
                f"p_ref={self.p_ref!r} outside [1/{self.dim}, 1]"
            )

    @property
    def c_ref_sq(self) -> float:
        d = self.dim
        return (d / (d - 1.0)) * (1.0 - self.p_ref)

    @property
    def k_ref(self) -> float:
        return 1.0 / self.p_ref

    @property
    def is_standard_concentration(self) -> bool:
        """True when P_ref sits at its minimum 1/D (C_ref = 1)."""
        return abs(self.p_ref - 1.0 / self.dim) <= FEAS_TOL


def reference_from(kind: str, value: float, dim: int) -> ReferenceLevel:
    """Build a reference level from any of its equivalent parameterizations.

    ``kind`` is one of ``p_ref``, ``c_ref``, ``c_ref_sq``, ``k_ref``.
    """
    value = float(value)
    if kind == "p_ref":
        p_ref = value
    elif kind == "c_ref":
        if not -FEAS_TOL <= value <= 1.0 + FEAS_TOL:
            raise OutOfRangeError(f"c_ref={value!r} outside [0, 1]")
        p_ref = 1.0 - (dim - 1.0) / dim * value * value
    elif kind == "c_ref_sq":
        if not -FEAS_TOL <= value <= 1.0 + FEAS_TOL:
            raise OutOfRangeError(f"c_ref_sq={value!r} outside [0, 1]")
        p_ref = 1.0 - (dim - 1.0) / dim * value
    elif kind == "k_ref":
        if not 1.0 - FEAS_TOL <= value <= dim + FEAS_TOL:
            raise OutOfRangeError(f"k_ref={value!r} outside [1, {dim}]")
        p_ref = 1.0 / value
    else:
        raise ValueError(f"unknown reference kind {kind!r}")
    return ReferenceLevel(dim, p_ref)


@dataclass(frozen=True, eq=False)
class ConcentrationPlan:
    """A diagonal filtering plan.

    ``y`` holds the squared Kraus weights (original index order), ``z`` their
    positive square roots, and ``x = a^2 * y`` the unnormalized
    post-concentration coefficients. ``cropped_indices`` are the original
    indices whose x was lowered to ``crop_level``; everywhere else
    x_m = a_m^2. Globally x_m = min(a_m^2, crop_level).
    """

    y: np.ndarray
    z: np.ndarray
    x: np.ndarray
    n_opt: int
    crop_level: float
    cropped_indices: tuple[int, ...]

    def __post_init__(self):
        for name in ("y", "z", "x"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


@dataclass(frozen=True, eq=False)
class ConcentrationOutcome:
    """A plan together with everything it achieves on a given spectrum.

    ``q_value`` is the efficiency payoff when a reference level was part of
    the computation, else None (the fixed-probability planner has no
    reference).
    """

    plan: ConcentrationPlan
    p_success: float
    post_spectrum: SchmidtSpectrum
    post_measures: Measures
    q_value: float | None


def _scale(dim: int) -> float:
    return dim / (dim - 1.0)


def _check_box(y: np.ndarray):
    if np.any(y < -FEAS_TOL) or np.any(y > 1.0 + FEAS_TOL):
        raise YOutOfBoxError("y leaves the box [0, 1]^D")


def efficiency_q(s: SchmidtSpectrum, y, ref: ReferenceLevel) -> float:
    """Evaluate the efficiency payoff Q at an arbitrary box point."""
    y = np.asarray(y, dtype=float)
    if y.shape != (s.dim,):
        raise DimensionMismatchError(f"y has shape {y.shape}, expected ({s.dim},)")
    _check_box(y)
    x = s.sq_coeffs * y
    total = float(np.sum(x))
    return _scale(s.dim) * (ref.p_ref * total * total - float(np.dot(x, x)))


def _tail_sums(values: np.ndarray) -> np.ndarray:
    """tail[n-1] = sum of values[n:] for n = 1..D (strictly-after sums)."""
    rev = np.cumsum(values[::-1])[::-1]
    return np.append(rev[1:], 0.0)


def _identity_plan(s: SchmidtSpectrum) -> ConcentrationPlan:
    ones = np.ones(s.dim)
    return ConcentrationPlan(
        y=ones,
        z=ones,
        x=s.sq_coeffs.copy(),
        n_opt=0,
        crop_level=float(np.max(s.sq_coeffs)),  # a no-op cap: min(a^2, level) = a^2
        cropped_indices=(),
    )


def _crop_plan(
    s: SchmidtSpectrum,
    sorted_sq: np.ndarray,
    perm: tuple[int, ...],
    n: int,
    level: float,
) -> ConcentrationPlan:
    """Assemble the plan that lowers the n largest coefficients to ``level``."""
    d = s.dim
    x_sorted = np.where(np.arange(d) < n, level, sorted_sq)
    # untouched coefficients divide to exactly 1.0; zero coefficients (only
    # ever untouched) keep y = 1 so no Kraus weight vanishes
    y_sorted = np.divide(
        x_sorted, sorted_sq, out=np.ones(d), where=sorted_sq > 0.0
    )
    y_sorted = np.minimum(y_sorted, 1.0)
    y = unsort(y_sorted, perm)
    x = unsort(x_sorted, perm)
    return ConcentrationPlan(
        y=y,
        z=np.sqrt(y),
        x=x,
        n_opt=n,
        crop_level=float(level),
        cropped_indices=tuple(sorted(perm[:n])),
    )


def _outcome_from_plan(
    s: SchmidtSpectrum, plan: ConcentrationPlan, p_success: float, q_value: float | None
) -> ConcentrationOutcome:
    post = SchmidtSpectrum(s.dim, plan.x / p_success)
    return ConcentrationOutcome(plan, float(p_success), post, measures(post), q_value)


def optimal_plan_efficiency(s: SchmidtSpectrum, ref: ReferenceLevel) -> ConcentrationOutcome:
    """Globally maximize the efficiency payoff over all diagonal plans.

    At the minimum reference purity P_ref = 1/D this is standard
    concentration: every coefficient is pulled down to the smallest one
    (z_m = a_min/a_m), the post state is maximally entangled and
    p_success = D * a_min^2.

    For P_ref > 1/D the sorted squared coefficients are scanned for the
    largest crop count n satisfying both the box condition
    alpha_n <= a_n^2 and the curvature bound n < 1/P_ref, where
    alpha_n = P_ref * beta_n / (1 - n * P_ref) and beta_n is the weight left
    uncropped. If no n qualifies the identity plan (keep the state) is
    optimal and is returned with n_opt = 0.
    """
    if s.dim != ref.dim:
        raise DimensionMismatchError(
            f"spectrum dim {s.dim} != reference dim {ref.dim}"
        )
    d = s.dim
    p_ref = ref.p_ref

    if ref.is_standard_concentration:
        amin = s.min_sq
        if amin == 0.0:
            raise RankDeficientFullConcentrationError(
                "full concentration needs every coefficient positive"
            )
        y = amin / s.sq_coeffs
        plan = ConcentrationPlan(
            y=y,
            z=np.sqrt(y),
            x=np.full(d, amin),
            n_opt=d,
            crop_level=amin,
            cropped_indices=tuple(range(d)),
        )
        post = SchmidtSpectrum(d, np.full(d, 1.0 / d))
        return ConcentrationOutcome(plan, d * amin, post, measures(post), 0.0)

    rank = s.rank
    if rank < d and p_ref < 1.0 / rank - FEAS_TOL:
        # demanding more entanglement than the support dimension can carry:
        # the payoff supremum is 0, approached only as p_success -> 0
        raise RankDeficientFullConcentrationError(
            f"p_ref={p_ref!r} below 1/rank with rank={rank}: no plan with "
            "positive success probability reaches the reference entanglement"
        )

    sorted_spectrum, perm = sort_descending(s)
    a = sorted_spectrum.sq_coeffs
    beta = _tail_sums(a)
    gamma = _tail_sums(a * a)
    ns = np.arange(1, d + 1, dtype=float)
    denom = 1.0 - ns * p_ref
    hessian_ok = ns < 1.0 / p_ref - FEAS_TOL
    with np.errstate(divide="ignore", invalid="ignore"):
        alpha = np.where(hessian_ok, p_ref * beta / denom, np.inf)
    # a crop is only a plan if something survives it: alpha = beta = 0 would
    # zero every coefficient and leave nothing to succeed with
    feasible = hessian_ok & (alpha <= a + FEAS_TOL) & ((alpha > 0.0) | (beta > 0.0))

    if not np.any(feasible):
        plan = _identity_plan(s)
        q = _scale(d) * (p_ref - float(np.dot(a, a)))
        return _outcome_from_plan(s, plan, float(np.sum(s.sq_coeffs)), q)

    n_opt = int(np.max(np.nonzero(feasible)[0])) + 1
    level = float(alpha[n_opt - 1])
    plan = _crop_plan(s, a, perm, n_opt, level)
    p_success = n_opt * level + float(beta[n_opt - 1])
    q = _scale(d) * (level * float(beta[n_opt - 1]) - float(gamma[n_opt - 1]))
    return _outcome_from_plan(s, plan, p_success, q)


def apply_plan(
    s: SchmidtSpectrum, plan: ConcentrationPlan, ref: ReferenceLevel | None = None
) -> ConcentrationOutcome:
    """Evaluate an arbitrary (not necessarily optimal) plan on a spectrum.

    Everything is recomputed from ``plan.y``, so this doubles as an
    independent check of planner-built outcomes. ``q_value`` is filled only
    when a reference level is supplied.
    """
    y = np.asarray(plan.y, dtype=float)
    if y.shape != (s.dim,):
        raise DimensionMismatchError(
            f"plan dimension {y.shape[0]} != spectrum dim {s.dim}"
        )
    _check_box(y)
    x = s.sq_coeffs * y
    p_success = float(np.sum(x))
    if p_success <= 0.0:
        raise InfeasibleError("plan has zero success probability")
    post = SchmidtSpectrum(s.dim, x / p_success)
    q = efficiency_q(s, y, ref) if ref is not None else None
    return ConcentrationOutcome(plan, p_success, post, measures(post), q)
