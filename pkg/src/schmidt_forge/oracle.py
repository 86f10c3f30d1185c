"""Independent verifiers for the closed-form planners.

Two routes certify the planners without reusing their logic:

* exhaustive active-set enumeration: every assignment of coordinates to the
  zero / upper-bound / interior sets yields at most one critical point, all of
  which (plus the corner points) are scored directly;
* multi-start box-projected gradient ascent on the quadratic payoff, a
  library-free stand-in for a numerical QP solver.

The module also carries the relative-difference metrics used to compare the
two routes, and direct checks of two structural facts: the unreferenced
payoff p^2 C^2 is maximized by doing nothing, and off-diagonal filter
components can only lower the payoff.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .efficiency import (
    FEAS_TOL,
    ReferenceLevel,
    _scale,
    optimal_plan_efficiency,
)
from .errors import (
    DimensionMismatchError,
    DimensionTooLargeError,
    DivisionByZeroGuardError,
    NotPSDError,
    SchmidtForgeError,
    SpectralBoundViolatedError,
)
from .fixedprob import FixedProbRequest, optimal_plan_fixed
from .spectrum import SchmidtSpectrum

#: exhaustive enumeration cost guards
MAX_ENUM_DIM = 14
MAX_ZERO_FACE_DIM = 8


@dataclass(frozen=True)
class Configuration:
    """One active-set assignment and its critical point.

    ``level`` is the common value of the interior coordinates (the crop
    level), NaN for pure corner points. ``value`` is the scaled payoff in
    efficiency mode and the post-state purity in fixed-probability mode.
    """

    zero_set: tuple[int, ...]
    outer_set: tuple[int, ...]
    inner_set: tuple[int, ...]
    n: int
    beta: float
    gamma: float
    level: float
    value: float


@dataclass(frozen=True, eq=False)
class OracleReport:
    """Best point found by an oracle plus comparison metrics.

    ``delta_y_relative`` / ``delta_q_relative`` compare the oracle's best
    point against the closed-form planner;  None when the metric is undefined
    (zero denominator).
    """

    mode: str
    best_y: np.ndarray
    best_q: float | None
    best_purity: float | None
    configurations_tested: int
    delta_y_relative: float | None
    delta_q_relative: float | None
    converged: bool = True
    best_config: Configuration | None = None
    candidates: tuple[Configuration, ...] | None = None


@lru_cache(maxsize=None)
def _inner_masks(dim: int) -> np.ndarray:
    """Boolean membership table of every nonempty subset of range(dim)."""
    masks = np.arange(1, 1 << dim, dtype=np.uint32)
    return ((masks[:, None] >> np.arange(dim)) & 1).astype(bool)


def relative_diffs(y_num, y_alg, q_num: float, q_alg: float) -> tuple[float, float]:
    """Mean per-coordinate relative y difference and relative payoff difference."""
    y_num = np.asarray(y_num, dtype=float)
    y_alg = np.asarray(y_alg, dtype=float)
    if y_num.shape != y_alg.shape:
        raise DimensionMismatchError(
            f"y vectors have shapes {y_num.shape} and {y_alg.shape}"
        )
    if np.any(y_num == 0.0):
        raise DivisionByZeroGuardError("y_num has a zero entry")
    if q_num == 0.0:
        raise DivisionByZeroGuardError("q_num is zero")
    delta_y = float(np.mean(np.abs((y_num - y_alg) / y_num)))
    delta_q = float(abs((q_num - q_alg) / q_num))
    return delta_y, delta_q


def _guarded_diffs(y_num, y_alg, q_num, q_alg):
    try:
        return relative_diffs(y_num, y_alg, q_num, q_alg)
    except DivisionByZeroGuardError:
        return None, None


def _config_from_mask(inner: np.ndarray, n: int, beta, gamma, level, value) -> Configuration:
    idx = np.arange(inner.size)
    return Configuration(
        zero_set=(),
        outer_set=tuple(int(i) for i in idx[~inner]),
        inner_set=tuple(int(i) for i in idx[inner]),
        n=int(n),
        beta=float(beta),
        gamma=float(gamma),
        level=float(level),
        value=float(value),
    )


def enumerate_configurations(
    s: SchmidtSpectrum,
    ref: ReferenceLevel,
    keep_candidates: bool = False,
    include_zero_faces: bool = False,
) -> OracleReport:
    """Exhaustively score every candidate maximizer of the efficiency payoff.

    All 2^D - 1 nonempty interior sets (with empty zero set) are tried: each
    contributes a critical point when the curvature bound 1 - n * P_ref > 0
    holds and its crop level fits the orthotope. The identity corner competes
    as well. With ``include_zero_faces`` the full 3^D assignment space is
    scanned (cost-guarded to small D) so points with zeroed coordinates also
    compete; they never win, which is exactly what that switch verifies.
    """
    d = s.dim
    if d > MAX_ENUM_DIM:
        raise DimensionTooLargeError(f"enumeration guarded to D <= {MAX_ENUM_DIM}")
    if include_zero_faces and d > MAX_ZERO_FACE_DIM:
        raise DimensionTooLargeError(
            f"zero-face enumeration guarded to D <= {MAX_ZERO_FACE_DIM}"
        )
    sq = s.sq_coeffs
    p_ref = ref.p_ref
    scale = _scale(d)

    inner = _inner_masks(d)
    n = inner.sum(axis=1)
    outer = ~inner
    beta = outer @ sq
    gamma = outer @ (sq * sq)
    denom = 1.0 - n * p_ref
    curv_ok = denom > 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        alpha = np.where(curv_ok, p_ref * beta / denom, np.inf)
    inner_min = np.where(inner, sq, np.inf).min(axis=1)
    feasible = curv_ok & (alpha >= -FEAS_TOL) & (alpha <= inner_min + FEAS_TOL)
    alpha_safe = np.where(feasible, alpha, 0.0)  # keep inf out of the arithmetic
    q_crit = np.where(feasible, alpha_safe * beta - gamma, -np.inf)

    total = float(np.sum(sq))
    q_corner = p_ref * total * total - float(np.dot(sq, sq))

    best_i = int(np.argmax(q_crit))
    if np.any(feasible) and q_crit[best_i] > q_corner:
        level = float(alpha[best_i])
        mask = inner[best_i]
        x = np.where(mask, level, sq)
        best_q_unscaled = float(q_crit[best_i])
        best_config = _config_from_mask(
            mask, n[best_i], beta[best_i], gamma[best_i], level, scale * best_q_unscaled
        )
    else:
        x = sq.copy()
        best_q_unscaled = q_corner
        best_config = Configuration(
            zero_set=(),
            outer_set=tuple(range(d)),
            inner_set=(),
            n=0,
            beta=total,
            gamma=float(np.dot(sq, sq)),
            level=float("nan"),
            value=scale * q_corner,
        )

    if include_zero_faces:
        zbest = _best_over_zero_faces(sq, p_ref)
        if zbest is not None and zbest[0] > best_q_unscaled:
            best_q_unscaled, x, best_config = zbest

    best_y = np.divide(x, sq, out=np.ones(d), where=sq > 0.0)
    best_q = scale * best_q_unscaled

    candidates = None
    if keep_candidates:
        cands = []
        for i in np.nonzero(feasible)[0]:
            cands.append(
                _config_from_mask(
                    inner[i], n[i], beta[i], gamma[i], alpha[i], scale * q_crit[i]
                )
            )
        cands.append(
            Configuration(
                zero_set=(),
                outer_set=tuple(range(d)),
                inner_set=(),
                n=0,
                beta=total,
                gamma=float(np.dot(sq, sq)),
                level=float("nan"),
                value=scale * q_corner,
            )
        )
        candidates = tuple(cands)

    delta_y = delta_q = None
    try:
        alg = optimal_plan_efficiency(s, ref)
    except SchmidtForgeError:
        alg = None
    if alg is not None:
        delta_y, delta_q = _guarded_diffs(best_y, alg.plan.y, best_q, alg.q_value)

    return OracleReport(
        mode="efficiency",
        best_y=best_y,
        best_q=best_q,
        best_purity=None,
        configurations_tested=1 << d,
        delta_y_relative=delta_y,
        delta_q_relative=delta_q,
        converged=True,
        best_config=best_config,
        candidates=candidates,
    )


def _best_over_zero_faces(sq: np.ndarray, p_ref: float):
    """Scan all 3^D zero/outer/inner assignments; return the best scored point."""
    d = sq.size
    idx = np.arange(d)
    best = None
    for assign in itertools.product((0, 1, 2), repeat=d):
        a = np.asarray(assign)
        zero = a == 0
        outer = a == 1
        inner = a == 2
        n = int(inner.sum())
        beta = float(sq[outer].sum())
        gamma = float((sq[outer] ** 2).sum())
        if n:
            denom = 1.0 - n * p_ref
            if denom <= 0.0:
                continue
            alpha = p_ref * beta / denom
            if alpha < -FEAS_TOL or alpha > float(sq[inner].min()) + FEAS_TOL:
                continue
            q = alpha * beta - gamma
            level = alpha
            x = np.where(inner, alpha, np.where(outer, sq, 0.0))
        else:
            q = p_ref * beta * beta - gamma
            level = float("nan")
            x = np.where(outer, sq, 0.0)
        if best is None or q > best[0]:
            config = Configuration(
                zero_set=tuple(int(i) for i in idx[zero]),
                outer_set=tuple(int(i) for i in idx[outer]),
                inner_set=tuple(int(i) for i in idx[inner]),
                n=n,
                beta=beta,
                gamma=gamma,
                level=level,
                value=_scale(d) * q,
            )
            best = (q, x, config)
    return best


def enumerate_fixed_configurations(
    s: SchmidtSpectrum,
    p_fix: float,
    keep_candidates: bool = False,
) -> OracleReport:
    """Exhaustively minimize post-state purity at a fixed success probability.

    Every nonempty interior subset contributes one candidate with common crop
    level kappa = (p_fix - beta) / n when kappa fits the orthotope; purity is
    convex, so these cover every local (hence the global) minimum.
    """
    d = s.dim
    if d > MAX_ENUM_DIM:
        raise DimensionTooLargeError(f"enumeration guarded to D <= {MAX_ENUM_DIM}")
    sq = s.sq_coeffs

    inner = _inner_masks(d)
    n = inner.sum(axis=1)
    outer = ~inner
    beta = outer @ sq
    gamma = outer @ (sq * sq)
    kappa = (p_fix - beta) / n
    inner_min = np.where(inner, sq, np.inf).min(axis=1)
    feasible = (kappa >= -FEAS_TOL) & (kappa <= inner_min + FEAS_TOL)
    sum_x_sq = gamma + n * kappa**2
    purity = np.where(feasible, sum_x_sq / (p_fix * p_fix), np.inf)

    best_i = int(np.argmin(purity))
    best_purity = float(purity[best_i])
    level = float(max(kappa[best_i], 0.0))
    mask = inner[best_i]
    x = np.where(mask, level, sq)
    best_config = _config_from_mask(
        mask, n[best_i], beta[best_i], gamma[best_i], level, best_purity
    )
    best_y = np.divide(x, sq, out=np.ones(d), where=sq > 0.0)

    candidates = None
    if keep_candidates:
        candidates = tuple(
            _config_from_mask(inner[i], n[i], beta[i], gamma[i], kappa[i], purity[i])
            for i in np.nonzero(feasible)[0]
        )

    delta_y = delta_q = None
    try:
        alg = optimal_plan_fixed(s, FixedProbRequest(p_fix))
    except SchmidtForgeError:
        alg = None
    if alg is not None:
        delta_y, delta_q = _guarded_diffs(
            best_y, alg.plan.y, best_purity, alg.post_measures.purity
        )

    return OracleReport(
        mode="fixedprob",
        best_y=best_y,
        best_q=None,
        best_purity=best_purity,
        configurations_tested=1 << d,
        delta_y_relative=delta_y,
        delta_q_relative=delta_q,
        converged=True,
        best_config=best_config,
        candidates=candidates,
    )


def numeric_qp_ascent(
    s: SchmidtSpectrum,
    ref: ReferenceLevel,
    restarts: int = 32,
    tol: float = 1e-12,
    seed: int = 0,
    max_iter: int = 100_000,
) -> OracleReport:
    """Box-projected gradient ascent on the payoff, from many starts.

    Starts are ``restarts`` uniform points in the box, the all-ones corner,
    and the closed-form plan. Steps are taken in the cropped-coefficient
    coordinates x_m = a_m^2 y_m, a diagonal preconditioner that keeps the
    quadratic well conditioned whatever the coefficient spread; clipping to
    [0, a_m^2] is the exact box projection there. Each step backtracks until
    the Armijo condition holds; a start stops when the y-space
    projected-gradient norm drops below ``tol``, progress stalls at rounding
    level, or ``max_iter`` passes. The best end point is kept; a later start
    only displaces it on a relative improvement above 1e-12 so coinciding
    maxima do not churn on float noise.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    d = s.dim
    sq = s.sq_coeffs
    p_ref = ref.p_ref
    scale = _scale(d)
    rng = np.random.default_rng(seed)
    positive = sq > 0.0

    def q_of_x(x: np.ndarray) -> float:
        total = x.sum()
        return scale * (p_ref * total * total - x @ x)

    def ascend(x0: np.ndarray) -> tuple[np.ndarray, float, bool]:
        x = np.clip(np.asarray(x0, dtype=float), 0.0, sq)
        q = q_of_x(x)
        step = 1.0
        stall = 0
        for _ in range(max_iter):
            g = 2.0 * scale * (p_ref * x.sum() - x)
            # termination is measured on the gradient of the y-form payoff
            gy = sq * g
            pg = np.where((x <= 0.0) & (gy < 0.0), 0.0, gy)
            pg = np.where((x >= sq) & (pg > 0.0), 0.0, pg)
            if float(np.linalg.norm(pg)) < tol:
                return x, q, True
            while True:
                x_new = np.clip(x + step * g, 0.0, sq)
                q_new = q_of_x(x_new)
                gain = float(g @ (x_new - x))
                if q_new >= q + 1e-4 * gain:
                    break
                step *= 0.5
                if step < 1e-18:
                    return x, q, False
            if q_new - q <= 1e-15 * max(abs(q_new), 1e-300):
                stall += 1
                if stall >= 50:
                    return x_new, q_new, False
            else:
                stall = 0
            x, q = x_new, q_new
            step = min(step * 1.25, 1e9)
        return x, q, False

    try:
        alg = optimal_plan_efficiency(s, ref)
    except SchmidtForgeError:
        alg = None

    starts: list[np.ndarray] = []
    if alg is not None:
        starts.append(np.asarray(alg.plan.x, dtype=float))
    starts.append(sq.copy())
    starts.extend(rng.uniform(size=(restarts, d)) * sq)

    best_x = None
    best_q = -np.inf
    converged = False
    for x0 in starts:
        x_end, q_end, met = ascend(x0)
        converged = converged or met
        if best_x is None or q_end > best_q + 1e-12 * max(abs(best_q), abs(q_end), 1e-300):
            best_x, best_q = x_end, q_end
    best_y = np.divide(best_x, sq, out=np.ones(d), where=positive)

    delta_y = delta_q = None
    if alg is not None:
        delta_y, delta_q = _guarded_diffs(best_y, alg.plan.y, best_q, alg.q_value)

    return OracleReport(
        mode="efficiency",
        best_y=best_y,
        best_q=float(best_q),
        best_purity=None,
        configurations_tested=len(starts),
        delta_y_relative=delta_y,
        delta_q_relative=delta_q,
        converged=converged,
    )


def appendix_a_check(s: SchmidtSpectrum, trials: int = 10_000, seed: int = 0) -> bool:
    """The payoff without a reference term is maximized by the identity.

    Samples ``trials`` uniform box points and checks that
    D/(D-1) * [p_s(y)^2 - sum a^4 y^2] never exceeds its value at y = 1.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    sq = s.sq_coeffs
    scale = _scale(s.dim)
    rng = np.random.default_rng(seed)
    ys = rng.uniform(size=(trials, s.dim))
    p = ys @ sq
    vals = scale * (p * p - (ys * ys) @ (sq * sq))
    total = float(np.sum(sq))
    at_identity = scale * (total * total - float(np.dot(sq, sq)))
    return bool(np.all(vals <= at_identity + 1e-12))


def appendix_b_check(
    s: SchmidtSpectrum, pi: np.ndarray, ref: ReferenceLevel
) -> tuple[float, float]:
    """Off-diagonal filter components can only lower the payoff.

    ``pi`` is the positive operator A_dag A of a general (not necessarily
    diagonal) filter, with eigenvalues in [0, 1]. Returns the payoff with the
    off-diagonal penalty included and with off-diagonals zeroed; the first
    never exceeds the second.
    """
    pi = np.asarray(pi, dtype=complex)
    d = s.dim
    if pi.shape != (d, d):
        raise DimensionMismatchError(f"pi has shape {pi.shape}, expected ({d}, {d})")
    if not np.allclose(pi, pi.conj().T, atol=1e-10):
        raise NotPSDError("pi is not Hermitian")
    evals = np.linalg.eigvalsh((pi + pi.conj().T) / 2.0)
    if float(evals.min()) < -1e-10:
        raise NotPSDError(f"pi has negative eigenvalue {float(evals.min())!r}")
    if float(evals.max()) > 1.0 + 1e-10:
        raise SpectralBoundViolatedError(
            f"pi has eigenvalue {float(evals.max())!r} above 1"
        )
    sq = s.sq_coeffs
    scale = _scale(d)
    diag = np.real(np.diag(pi))
    p = float(sq @ diag)
    diag_term = float((sq * sq) @ (diag * diag))
    off_sq = np.abs(pi) ** 2
    np.fill_diagonal(off_sq, 0.0)  # sum over m != n only
    off_term = float(sq @ off_sq @ sq)
    q_diag = scale * (ref.p_ref * p * p - diag_term)
    q_full = q_diag - scale * off_term
    return q_full, q_diag


def sample_psd_contraction(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Random Hermitian PSD matrix with largest eigenvalue exactly one."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    pi = g.conj().T @ g
    pi /= float(np.linalg.eigvalsh(pi).max())
    return pi


# --------------------------------------------------------------------------
# validation driver behind the CLI `validate` subcommand


@dataclass(frozen=True)
class ValidationResult:
    name: str
    passed: bool
    detail: str


def run_validation(dim_max: int = 10, instances: int = 500, seed: int = 0) -> list[ValidationResult]:
    """Run the oracle suites against the planners on random instances."""
    from .sampling import SampleSpec, sample_haar_spectrum

    dim_max = min(dim_max, MAX_ENUM_DIM)
    rng = np.random.default_rng(seed)
    results: list[ValidationResult] = []

    def haar(d: int) -> SchmidtSpectrum:
        return sample_haar_spectrum(
            SampleSpec(dim=d, seed=int(rng.integers(2**63)), count=1)
        )[0]

    # closed form vs exhaustive enumeration (efficiency payoff)
    worst_dq = worst_dy = 0.0
    ok = True
    for _ in range(instances):
        d = int(rng.integers(3, dim_max + 1))
        s = haar(d)
        u = rng.uniform(0.01, 1.0)
        ref = ReferenceLevel(d, 1.0 / d + u * (1.0 - 1.0 / d))
        alg = optimal_plan_efficiency(s, ref)
        report = enumerate_configurations(s, ref)
        dq = abs(alg.q_value - report.best_q) / abs(report.best_q)
        dy = float(np.max(np.abs(alg.plan.y - report.best_y)))
        worst_dq = max(worst_dq, dq)
        worst_dy = max(worst_dy, dy)
        ok = ok and dq <= 1e-10 and dy <= 1e-9
    results.append(
        ValidationResult(
            "efficiency-vs-enumeration", ok, f"max_dq={worst_dq:.3e} max_dy={worst_dy:.3e}"
        )
    )

    # fixed probability: purity minimal, probability exact
    worst_gap = worst_p = 0.0
    ok = True
    for _ in range(instances):
        d = int(rng.integers(3, dim_max + 1))
        s = haar(d)
        p_fix = float(rng.uniform(0.05, 1.0))
        alg = optimal_plan_fixed(s, FixedProbRequest(p_fix))
        report = enumerate_fixed_configurations(s, p_fix)
        gap = alg.post_measures.purity - report.best_purity
        perr = abs(alg.p_success - p_fix)
        worst_gap = max(worst_gap, gap)
        worst_p = max(worst_p, perr)
        ok = ok and gap <= 1e-10 and perr <= 1e-12
    results.append(
        ValidationResult(
            "fixedprob-vs-enumeration", ok, f"max_purity_gap={worst_gap:.3e} max_p_err={worst_p:.3e}"
        )
    )

    # the two planners agree through the success probability
    fails = 0
    for _ in range(instances):
        d = int(rng.integers(3, dim_max + 1))
        s = haar(d)
        u = rng.uniform(0.0, 1.0)
        ref = ReferenceLevel(d, 1.0 / d + u * (1.0 - 1.0 / d))
        from .fixedprob import duality_check

        if not duality_check(s, ref):
            fails += 1
    results.append(ValidationResult("duality", fails == 0, f"failures={fails}"))

    # identity maximizes the unreferenced payoff
    n_spectra = min(instances, 50)
    ok = True
    for _ in range(n_spectra):
        d = int(rng.integers(2, max(dim_max, 3) + 1))
        if not appendix_a_check(haar(d), trials=10_000, seed=int(rng.integers(2**63))):
            ok = False
    results.append(ValidationResult("identity-dominates-unreferenced-payoff", ok, f"spectra={n_spectra}"))

    # off-diagonal components never help
    ok = True
    worst = -np.inf
    for _ in range(n_spectra):
        d = int(rng.integers(2, max(dim_max, 3) + 1))
        s = haar(d)
        ref = ReferenceLevel(d, float(rng.uniform(1.0 / d, 1.0)))
        for _ in range(200):
            pi = sample_psd_contraction(d, rng)
            q_full, q_diag = appendix_b_check(s, pi, ref)
            worst = max(worst, q_full - q_diag)
            ok = ok and q_full <= q_diag + 1e-12
    results.append(
        ValidationResult("offdiagonal-never-helps", ok, f"max_excess={worst:.3e}")
    )

    # gradient ascent agrees with enumeration
    n_ascent = min(instances, 25)
    worst_rel = 0.0
    ok = True
    for _ in range(n_ascent):
        d = int(rng.integers(3, dim_max + 1))
        s = haar(d)
        ref = ReferenceLevel(d, float(rng.uniform(1.0 / d + 0.01, 1.0)))
        enum = enumerate_configurations(s, ref)
        asc = numeric_qp_ascent(s, ref, restarts=8, tol=1e-12, seed=int(rng.integers(2**63)))
        rel = abs(asc.best_q - enum.best_q) / max(abs(enum.best_q), 1e-300)
        worst_rel = max(worst_rel, rel)
        ok = ok and rel <= 1e-8
    results.append(
        ValidationResult("ascent-vs-enumeration", ok, f"max_rel={worst_rel:.3e}")
    )

    return results
