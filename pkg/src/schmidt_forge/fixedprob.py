"""Maximum-entanglement concentration at a fixed success probability.

Pinning p_success = p_fix turns the payoff problem into minimizing the
post-state purity sum_m a_m^4 y_m^2 / p_fix^2 subject to
sum_m a_m^2 y_m = p_fix and the box 0 <= y_m <= 1. The minimizer has the same
structure as the efficiency optimum: the n largest squared coefficients are
cropped to a common level kappa_n = (p_fix - beta_n) / n, with n as large as
feasibility allows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .efficiency import (
    FEAS_TOL,
    ConcentrationOutcome,
    ReferenceLevel,
    _crop_plan,
    _identity_plan,
    _outcome_from_plan,
    _tail_sums,
    optimal_plan_efficiency,
)
from .errors import InfeasibleError, PFixOutOfRangeError
from .spectrum import SchmidtSpectrum, sort_descending


@dataclass(frozen=True)
class FixedProbRequest:
    """A target success probability in (0, 1]."""

    p_fix: float

    def __post_init__(self):
        if not 0.0 < self.p_fix <= 1.0 + FEAS_TOL:
            raise PFixOutOfRangeError(f"p_fix={self.p_fix!r} outside (0, 1]")


def optimal_plan_fixed(s: SchmidtSpectrum, req: FixedProbRequest) -> ConcentrationOutcome:
    """Minimize post-concentration purity among plans succeeding with p_fix.

    The outcome's ``p_success`` equals ``p_fix`` to rounding and its purity is
    the global minimum over the feasible set; ``q_value`` is None because no
    reference level takes part in this problem.
    """
    p_fix = float(req.p_fix)
    sorted_spectrum, perm = sort_descending(s)
    a = sorted_spectrum.sq_coeffs
    beta = _tail_sums(a)
    ns = np.arange(1, s.dim + 1, dtype=float)
    kappa = (p_fix - beta) / ns
    feasible = (kappa >= -FEAS_TOL) & (kappa <= a + FEAS_TOL)

    if not np.any(feasible):
        # unreachable for p_fix in (0, 1]: the per-n feasibility intervals
        # [beta_n, beta_n + n * a_n^2] chain together and cover (0, 1]
        if abs(p_fix - 1.0) <= 1e-9:
            plan = _identity_plan(s)
            return _outcome_from_plan(s, plan, float(np.sum(s.sq_coeffs)), None)
        raise InfeasibleError(f"no prefix crop meets p_fix={p_fix!r}")

    n_opt = int(np.max(np.nonzero(feasible)[0])) + 1
    level = max(float(kappa[n_opt - 1]), 0.0)
    plan = _crop_plan(s, a, perm, n_opt, level)
    p_success = n_opt * level + float(beta[n_opt - 1])
    return _outcome_from_plan(s, plan, p_success, None)


def duality_check(s: SchmidtSpectrum, ref: ReferenceLevel, tol: float = 1e-10) -> bool:
    """Cross-validate the two planners against each other.

    Feeding the efficiency optimum's success probability to the
    fixed-probability planner must reproduce the same x vector: the payoff
    maximizer is also the purity minimizer at its own success probability
    (otherwise a lower-purity plan at equal probability would beat it).
    """
    eff = optimal_plan_efficiency(s, ref)
    fixed = optimal_plan_fixed(s, FixedProbRequest(eff.p_success))
    return bool(np.max(np.abs(eff.plan.x - fixed.plan.x)) <= tol)
