import math
import warnings

import numpy as np
import pytest

from unitransform import (
    ContractViolationError,
    DivergenceError,
    ExcludedSampleWarning,
    Grid,
    InsufficientDataError,
    LaplaceSpectrum,
    QuadratureSpec,
    SampledFunction,
    TruncationWarning,
    bromwich_inverse,
    bromwich_inverse_from_samples,
    estimate_abscissa,
    forward_laplace,
    integrate,
    laplace_line,
    oscillation_panels,
    weighted_orthogonality_check,
)

ONE = lambda x: np.ones_like(np.asarray(x, float)) + 0j


class TestForwardLaplace:
    def test_constant(self):
        r = forward_laplace(ONE, 2.0, 40.0)
        assert r.value == pytest.approx(0.5, abs=1e-12)
        assert r.tail_estimate < 1e-12

    def test_exponential_growth_below_s(self):
        r = forward_laplace(lambda x: np.exp(3.0 * np.asarray(x, float)) + 0j, 5.0, 40.0)
        assert r.value == pytest.approx(0.5, abs=1e-10)

    def test_ramp_at_complex_s(self):
        r = forward_laplace(lambda x: np.asarray(x, float) + 0j, 1 + 1j, 60.0)
        assert r.value == pytest.approx(1.0 / (1 + 1j) ** 2, abs=1e-12)

    def test_ramp_against_quadrature_oracle(self):
        # independent fixed-rule route for the same integral
        s = 1 + 1j
        oracle = integrate(
            lambda x: np.asarray(x, float) * np.exp(-s * np.asarray(x, float)),
            (0.0, 60.0),
            QuadratureSpec(method="gauss-legendre", order=24),
            panels=30,
        )
        assert oracle == pytest.approx(-0.5j, abs=1e-12)

    def test_divergence_propagates(self):
        with pytest.raises(DivergenceError):
            forward_laplace(lambda x: np.exp(3.0 * np.asarray(x, float)) + 0j, 2.0, 40.0)

    def test_linearity(self):
        f = lambda x: np.sin(np.asarray(x, float)) + 0j
        g = lambda x: np.asarray(x, float) + 0j
        s = 2.0 + 0.5j
        combo = forward_laplace(lambda x: 3.0 * f(x) - 2.0 * g(x), s, 60.0).value
        split = 3.0 * forward_laplace(f, s, 60.0).value - 2.0 * forward_laplace(g, s, 60.0).value
        assert combo == pytest.approx(split, abs=1e-10)

    def test_lambda_form_is_same_computation(self):
        # s = sigma - i*lam written either way drives the identical kernel
        sigma, lam = 2.0, 3.0
        xs = np.linspace(0.0, 5.0, 64)
        via_s = np.exp(-(sigma - 1j * lam) * xs)
        via_lam = np.exp((-sigma + 1j * lam) * xs)
        assert np.array_equal(via_s, via_lam)
        a = forward_laplace(ONE, sigma - 1j * lam, 40.0).value
        b = forward_laplace(ONE, complex(sigma, -lam), 40.0).value
        assert a == b


class TestBromwichInverse:
    def test_ramp_recovered(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            v = bromwich_inverse(lambda s: 1.0 / s**2, 1.0, 400.0, 2.0)
        assert v.real == pytest.approx(2.0, abs=1e-3)
        assert abs(v.imag) <= 1e-6

    def test_sine_recovered(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            v = bromwich_inverse(lambda s: 1.0 / (s**2 + 1.0), 1.0, 400.0, 1.0)
        assert v.real == pytest.approx(math.sin(1.0), abs=1e-3)

    @pytest.mark.xfail(
        strict=True,
        reason="transforms decaying like 1/s leave a contour-truncation tail of "
        "order exp(sigma t)/(pi T t), between 1.1e-3 and 8.7e-3 at T=400, "
        "so the 1e-3 target is out of reach for a plain truncated contour",
    )
    def test_step_value_within_tight_tolerance(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            v = bromwich_inverse(lambda s: 1.0 / s, 1.0, 400.0, 1.0)
        assert v.real == pytest.approx(1.0, abs=1e-3)

    def test_step_value_within_achievable_tolerance(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            v = bromwich_inverse(lambda s: 1.0 / s, 1.0, 400.0, 1.0)
        assert v.real == pytest.approx(1.0, abs=3e-3)
        assert abs(v.imag) <= 1e-6

    @pytest.mark.xfail(
        strict=True,
        reason="same 1/s-type truncation tail as above, shifted to s - 2",
    )
    def test_shifted_pole_within_tight_tolerance(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            v = bromwich_inverse(lambda s: 1.0 / (s - 2.0), 3.0, 400.0, 0.5)
        assert v.real == pytest.approx(math.e, abs=1e-3)

    def test_truncation_warning_for_slow_decay(self):
        with pytest.warns(TruncationWarning):
            bromwich_inverse(lambda s: 1.0 / s, 1.0, 50.0, 1.0)

    def test_no_warning_for_fast_decay(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error", TruncationWarning)
            v = bromwich_inverse(lambda s: 1.0 / (s + 1.0) ** 4, 0.0, 400.0, 2.0)
        assert v.real == pytest.approx(8.0 * math.exp(-2.0) / 6.0, abs=1e-6)

    def test_scalar_only_transform_callable(self):
        def fhat(s):
            if isinstance(s, np.ndarray):
                raise TypeError("scalar only")
            return 1.0 / s**2

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            v = bromwich_inverse(fhat, 1.0, 100.0, 1.0)
        assert v.real == pytest.approx(1.0, abs=1e-2)

    def test_parameter_validation(self):
        with pytest.raises(ContractViolationError):
            bromwich_inverse(lambda s: 1.0 / s, 1.0, 0.0, 1.0)
        with pytest.raises(ContractViolationError):
            bromwich_inverse(lambda s: 1.0 / s, 1.0, 10.0, 0.0)


class TestBromwichFromSamples:
    def test_matches_callable_route(self):
        sigma, T = 0.0, 200.0
        n = int(math.ceil(T / 0.05))
        tau_grid = Grid.uniform(-T, T, 2 * n + 1)
        fhat = lambda s: 1.0 / (s + 1.0) ** 4
        spectrum = LaplaceSpectrum(sigma, tau_grid, fhat(sigma + 1j * tau_grid.points))
        for t in (0.5, 1.5):
            direct = bromwich_inverse(fhat, sigma, T, t)
            sampled = bromwich_inverse_from_samples(spectrum, t)
            assert sampled == pytest.approx(direct, abs=1e-12)

    def test_coarse_contour_rejected(self):
        tau_grid = Grid.uniform(-10.0, 10.0, 21)  # step 1.0 > 0.05
        spectrum = LaplaceSpectrum(0.0, tau_grid, np.ones(21, dtype=complex))
        with pytest.raises(ContractViolationError):
            bromwich_inverse_from_samples(spectrum, 1.0)


class TestWeightedOrthogonality:
    def test_diagonal_is_exact_truncation_length(self):
        for sigma in (-1.0, 0.0, 2.0, 10.0):
            assert weighted_orthogonality_check(1.0, 1.0, sigma, 50.0) == 50.0 + 0j

    def test_whole_period_cancellation(self):
        A = 10.0
        v = weighted_orthogonality_check(1.0 + 2.0 * math.pi / A, 1.0, 2.0, A)
        assert abs(v) <= 1e-10

    def test_closed_form_value(self):
        v = weighted_orthogonality_check(1.0, 0.0, 2.0, 10.0)
        expected = (1.0 - np.exp(-10j)) / 1j
        assert v == pytest.approx(expected, abs=1e-14)

    @pytest.mark.parametrize("lam,mu", [(1.0, 0.0), (2.5, -0.5), (0.3, 0.2999)])
    def test_against_weighted_quadrature_oracle(self, lam, mu):
        # dual route: integrate the full weighted product of eigenfunctions
        sigma, A = 1.5, 10.0

        def integrand(x):
            x = np.asarray(x, float)
            return (
                np.exp(-2.0 * sigma * x)
                * np.exp((sigma - 1j * lam) * x)
                * np.exp((sigma + 1j * mu) * x)
            )

        oracle = integrate(
            integrand, (0.0, A), panels=oscillation_panels(lam - mu, 0.0, A)
        )
        assert weighted_orthogonality_check(lam, mu, sigma, A) == pytest.approx(
            oracle, abs=1e-9
        )

    def test_small_phase_stability(self):
        v = weighted_orthogonality_check(1.0 + 1e-9, 1.0, 0.0, 10.0)
        assert v == pytest.approx(10.0, abs=1e-6)


class TestLaplaceLine:
    def test_line_matches_pointwise_calls(self):
        tau_grid = Grid.uniform(-2.0, 2.0, 5)
        spectrum = laplace_line(ONE, 1.0, tau_grid, 40.0)
        for tau, value in zip(tau_grid.points, spectrum.values):
            assert value == pytest.approx(1.0 / (1.0 + 1j * tau), abs=1e-10)


class TestDefaultInversionSigma:
    def test_one_above_fitted_rate(self):
        from unitransform import default_inversion_sigma

        grid = Grid.uniform(0.0001, 10.0, 101)
        samples = SampledFunction(grid, np.exp(2.0 * grid.points) + 0j)
        assert default_inversion_sigma(samples) == pytest.approx(3.0, abs=0.01)


class TestEstimateAbscissa:
    def test_pure_exponential(self):
        grid = Grid.uniform(0.0001, 10.0, 101)
        samples = SampledFunction(grid, np.exp(2.0 * grid.points) + 0j)
        est = estimate_abscissa(samples)
        assert est.sigma_hat == pytest.approx(2.0, abs=0.01)
        assert est.M_hat == pytest.approx(1.0, rel=1e-6)

    def test_constant_function(self):
        grid = Grid.uniform(0.0001, 10.0, 101)
        est = estimate_abscissa(SampledFunction(grid, 5.0 * np.ones(101) + 0j))
        assert abs(est.sigma_hat) <= 1e-10
        assert est.M_hat == pytest.approx(5.0, rel=1e-9)

    def test_subexponential_factor_inflates_slope(self):
        grid = Grid.uniform(0.0001, 10.0, 101)
        samples = SampledFunction(grid, grid.points * np.exp(grid.points) + 0j)
        est = estimate_abscissa(samples)
        assert 1.0 <= est.sigma_hat <= 1.3
        assert est.fit_residual > 0

    def test_insufficient_samples(self):
        grid = Grid.uniform(0.5, 3.0, 6)
        with pytest.raises(InsufficientDataError):
            estimate_abscissa(SampledFunction(grid, np.ones(6) + 0j))

    def test_zero_samples_excluded_with_warning(self):
        grid = Grid.uniform(0.5, 10.0, 20)
        values = np.exp(grid.points).astype(complex)
        values[3] = 0.0
        with pytest.warns(ExcludedSampleWarning):
            est = estimate_abscissa(SampledFunction(grid, values))
        assert est.sigma_hat == pytest.approx(1.0, abs=0.01)

    def test_nonpositive_x_ignored(self):
        grid = Grid.uniform(-5.0, 10.0, 31)
        values = np.exp(grid.points).astype(complex)
        est = estimate_abscissa(SampledFunction(grid, values))
        assert est.sigma_hat == pytest.approx(1.0, abs=0.01)
