import numpy as np
import pytest

from schmidt_forge import (
    ReferenceLevel,
    appendix_a_check,
    appendix_b_check,
    enumerate_configurations,
    enumerate_fixed_configurations,
    make_spectrum,
    measures,
    numeric_qp_ascent,
    optimal_plan_efficiency,
    optimal_plan_fixed,
    FixedProbRequest,
    relative_diffs,
    run_validation,
    sort_descending,
)
from schmidt_forge.errors import (
    DimensionMismatchError,
    DimensionTooLargeError,
    DivisionByZeroGuardError,
    NotPSDError,
    SpectralBoundViolatedError,
)
from schmidt_forge.oracle import sample_psd_contraction

from helpers import dirichlet_spectrum, random_reference


class TestEnumerate:
    def test_worked_three_level_case(self):
        s = make_spectrum([0.5, 0.3, 0.2])
        report = enumerate_configurations(s, ReferenceLevel(3, 0.4))
        assert report.best_q == pytest.approx(0.055, abs=1e-12)
        assert np.allclose(report.best_y, [2 / 3, 1.0, 1.0], atol=1e-12)
        assert report.best_config.inner_set == (0,)
        assert report.configurations_tested == 8

    def test_uniform_state_zero_payoff(self):
        s = make_spectrum([1 / 3] * 3)
        report = enumerate_configurations(s, ReferenceLevel(3, 1 / 3))
        assert report.best_q == pytest.approx(0.0, abs=1e-12)
        assert np.allclose(report.best_y, 1.0, atol=1e-12)

    def test_reference_purity_one_picks_identity(self):
        s = make_spectrum([0.5, 0.3, 0.2])
        report = enumerate_configurations(s, ReferenceLevel(3, 1.0))
        purity = measures(s).purity
        assert report.best_q == pytest.approx(1.5 * (1.0 - purity), abs=1e-12)
        assert np.allclose(report.best_y, 1.0, atol=1e-15)

    def test_dimension_guards(self):
        rng = np.random.default_rng(0)
        s = dirichlet_spectrum(rng, 15)
        with pytest.raises(DimensionTooLargeError):
            enumerate_configurations(s, ReferenceLevel(15, 0.5))
        s9 = dirichlet_spectrum(rng, 9)
        with pytest.raises(DimensionTooLargeError):
            enumerate_configurations(s9, ReferenceLevel(9, 0.5), include_zero_faces=True)

    def test_agreement_with_planner(self):
        rng = np.random.default_rng(101)
        for _ in range(60):
            d = int(rng.integers(3, 11))
            s = dirichlet_spectrum(rng, d)
            ref = random_reference(rng, d, margin=0.01)
            report = enumerate_configurations(s, ref)
            alg = optimal_plan_efficiency(s, ref)
            assert abs(alg.q_value - report.best_q) <= 1e-10 * abs(report.best_q)
            assert np.max(np.abs(alg.plan.y - report.best_y)) <= 1e-9
            assert report.delta_q_relative <= 1e-10

    def test_zero_elimination(self):
        # the argmax never needs a zeroed coordinate, even when those compete
        rng = np.random.default_rng(55)
        for _ in range(25):
            d = int(rng.integers(3, 8))
            s = dirichlet_spectrum(rng, d)
            ref = random_reference(rng, d, margin=0.02)
            report = enumerate_configurations(s, ref, include_zero_faces=True)
            assert report.best_config.zero_set == ()

    def test_sorting_preference(self):
        # among feasible same-size crops, cropping the largest coefficients wins
        rng = np.random.default_rng(56)
        for _ in range(25):
            d = int(rng.integers(3, 8))
            s = dirichlet_spectrum(rng, d)
            ref = random_reference(rng, d, margin=0.02)
            report = enumerate_configurations(s, ref, keep_candidates=True)
            _, perm = sort_descending(s)
            by_n = {}
            for cfg in report.candidates:
                if cfg.n >= 1:
                    by_n.setdefault(cfg.n, []).append(cfg)
            for n, cfgs in by_n.items():
                prefix = set(int(i) for i in perm[:n])
                prefix_cfgs = [c for c in cfgs if set(c.inner_set) == prefix]
                assert prefix_cfgs, "prefix crop missing from feasible set"
                best_other = max(c.value for c in cfgs)
                assert prefix_cfgs[0].value >= best_other - 1e-12

    def test_payoff_nondecreasing_along_prefix_chain(self):
        rng = np.random.default_rng(57)
        for _ in range(25):
            d = int(rng.integers(3, 9))
            s = dirichlet_spectrum(rng, d)
            ref = random_reference(rng, d, margin=0.02)
            report = enumerate_configurations(s, ref, keep_candidates=True)
            alg = optimal_plan_efficiency(s, ref)
            _, perm = sort_descending(s)
            chain = []
            for cfg in report.candidates:
                if cfg.n == 0:
                    chain.append((0, cfg.value))
                elif set(cfg.inner_set) == set(int(i) for i in perm[: cfg.n]):
                    chain.append((cfg.n, cfg.value))
            chain.sort()
            ns = [n for n, _ in chain]
            values = [v for _, v in chain]
            assert ns == list(range(alg.plan.n_opt + 1))
            assert np.all(np.diff(values) >= -1e-12)


class TestEnumerateFixed:
    def test_agreement_with_planner(self):
        rng = np.random.default_rng(77)
        for _ in range(60):
            d = int(rng.integers(3, 11))
            s = dirichlet_spectrum(rng, d)
            p_fix = float(rng.uniform(0.05, 1.0))
            report = enumerate_fixed_configurations(s, p_fix)
            alg = optimal_plan_fixed(s, FixedProbRequest(p_fix))
            assert alg.post_measures.purity <= report.best_purity + 1e-10
            assert report.best_purity <= alg.post_measures.purity + 1e-10

    def test_guard(self):
        rng = np.random.default_rng(0)
        with pytest.raises(DimensionTooLargeError):
            enumerate_fixed_configurations(dirichlet_spectrum(rng, 15), 0.5)


class TestNumericAscent:
    def test_agrees_with_enumeration(self):
        rng = np.random.default_rng(31)
        for k in range(25):
            d = int(rng.integers(3, 11))
            s = dirichlet_spectrum(rng, d)
            ref = random_reference(rng, d, margin=0.01)
            enum = enumerate_configurations(s, ref)
            asc = numeric_qp_ascent(s, ref, restarts=8, seed=k)
            assert asc.converged
            rel = abs(asc.best_q - enum.best_q) / abs(enum.best_q)
            assert rel <= 1e-8

    def test_analytic_start_is_stationary(self):
        s = make_spectrum([0.4, 0.3, 0.2, 0.1])
        ref = ReferenceLevel(4, 0.3)
        report = numeric_qp_ascent(s, ref, restarts=1, seed=0)
        assert report.converged
        assert report.delta_y_relative == pytest.approx(0.0, abs=1e-12)
        assert report.delta_q_relative == pytest.approx(0.0, abs=1e-12)

    def test_parameter_validation(self):
        s = make_spectrum([0.5, 0.5])
        with pytest.raises(ValueError):
            numeric_qp_ascent(s, ReferenceLevel(2, 0.7), restarts=0)
        with pytest.raises(ValueError):
            numeric_qp_ascent(s, ReferenceLevel(2, 0.7), tol=0.0)

    def test_seed_determinism(self):
        rng = np.random.default_rng(1)
        s = dirichlet_spectrum(rng, 6)
        ref = ReferenceLevel(6, 0.4)
        a = numeric_qp_ascent(s, ref, restarts=4, seed=9)
        b = numeric_qp_ascent(s, ref, restarts=4, seed=9)
        assert np.array_equal(a.best_y, b.best_y)
        assert a.best_q == b.best_q

    def test_random_starts_alone_find_the_optimum(self, monkeypatch):
        # the ascent must not lean on the closed-form start to look correct
        import schmidt_forge.oracle as oracle_mod
        from schmidt_forge.errors import SchmidtForgeError

        def unavailable(s, ref):
            raise SchmidtForgeError("closed form disabled for this check")

        rng = np.random.default_rng(19)
        for k in range(15):
            d = int(rng.integers(3, 11))
            s = dirichlet_spectrum(rng, d)
            ref = random_reference(rng, d, margin=0.02)
            enum = enumerate_configurations(s, ref)
            with monkeypatch.context() as m:
                m.setattr(oracle_mod, "optimal_plan_efficiency", unavailable)
                asc = oracle_mod.numeric_qp_ascent(s, ref, restarts=16, seed=k)
            assert asc.delta_q_relative is None  # no closed form to compare to
            rel = abs(asc.best_q - enum.best_q) / abs(enum.best_q)
            assert rel <= 1e-10


class TestRelativeDiffs:
    def test_identical(self):
        assert relative_diffs([0.5, 0.5], [0.5, 0.5], 1.0, 1.0) == (0.0, 0.0)

    def test_worked_values(self):
        dy, dq = relative_diffs([0.5, 0.5], [0.25, 0.75], 1.0, 1.0)
        assert dy == pytest.approx(0.5, abs=1e-15)
        assert dq == 0.0
        _, dq = relative_diffs([1.0], [1.0], 0.05, 0.04)
        assert dq == pytest.approx(0.2, abs=1e-12)

    def test_guards(self):
        with pytest.raises(DivisionByZeroGuardError):
            relative_diffs([0.0, 1.0], [1.0, 1.0], 1.0, 1.0)
        with pytest.raises(DivisionByZeroGuardError):
            relative_diffs([1.0], [1.0], 0.0, 1.0)
        with pytest.raises(DimensionMismatchError):
            relative_diffs([1.0, 1.0], [1.0], 1.0, 1.0)


class TestAppendixA:
    def test_direct_two_level_value(self):
        # explicit evaluation of the payoff-without-reference at one box point
        s = make_spectrum([0.5, 0.5])
        y = np.array([1.0, 0.25])
        sq = s.sq_coeffs
        p = float(sq @ y)
        val = 2.0 * (p * p - float((sq * sq) @ (y * y)))
        assert val == pytest.approx(0.25, abs=1e-12)
        at_identity = 2.0 * (1.0 - float(sq @ sq))
        assert at_identity == pytest.approx(1.0, abs=1e-15)
        assert val <= at_identity

    def test_monte_carlo(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            d = int(rng.integers(2, 17))
            s = dirichlet_spectrum(rng, d)
            assert appendix_a_check(s, trials=10_000, seed=int(rng.integers(2**63)))


class TestAppendixB:
    def test_diagonal_pi_no_penalty(self):
        s = make_spectrum([0.6, 0.4])
        pi = np.diag([0.9, 0.3])
        q_full, q_diag = appendix_b_check(s, pi, ReferenceLevel(2, 0.7))
        assert q_full == q_diag

    def test_worked_pair(self):
        s = make_spectrum([0.5, 0.5])
        pi = np.array([[0.5, 0.1], [0.1, 0.5]])
        q_full, q_diag = appendix_b_check(s, pi, ReferenceLevel(2, 0.6))
        assert q_full == pytest.approx(0.04, abs=1e-15)
        assert q_diag == pytest.approx(0.05, abs=1e-15)

    def test_validation_errors(self):
        s = make_spectrum([0.5, 0.5])
        ref = ReferenceLevel(2, 0.6)
        with pytest.raises(NotPSDError):
            appendix_b_check(s, np.array([[1.0, 0.9], [0.2, 1.0]]), ref)  # not Hermitian
        with pytest.raises(NotPSDError):
            appendix_b_check(s, np.array([[0.5, 0.8], [0.8, 0.5]]), ref)  # negative eig
        with pytest.raises(SpectralBoundViolatedError):
            appendix_b_check(s, np.diag([1.5, 0.5]), ref)
        with pytest.raises(DimensionMismatchError):
            appendix_b_check(s, np.eye(3), ref)

    def test_monte_carlo(self):
        rng = np.random.default_rng(23)
        for _ in range(10):
            d = int(rng.integers(2, 13))
            s = dirichlet_spectrum(rng, d)
            ref = random_reference(rng, d)
            for _ in range(50):
                pi = sample_psd_contraction(d, rng)
                q_full, q_diag = appendix_b_check(s, pi, ref)
                assert q_full <= q_diag + 1e-12

    def test_sampled_pi_is_a_contraction(self):
        rng = np.random.default_rng(3)
        pi = sample_psd_contraction(6, rng)
        evals = np.linalg.eigvalsh(pi)
        assert evals.min() >= -1e-12
        assert evals.max() <= 1.0 + 1e-12


class TestValidationDriver:
    def test_quick_run_passes(self):
        results = run_validation(dim_max=6, instances=12, seed=4)
        assert all(r.passed for r in results), [
            (r.name, r.detail) for r in results if not r.passed
        ]
        names = {r.name for r in results}
        assert "efficiency-vs-enumeration" in names
        assert "duality" in names
