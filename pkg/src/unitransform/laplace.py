"""Laplace transform, truncated contour inversion, and growth-rate tools.

The forward transform is the half-line integral of f(x) exp(-s*x) with a
truncation point and a tail estimate.  Inversion integrates along the
vertical line Re(s) = sigma, truncated at height T, with uniform
quadrature in the imaginary coordinate; there is no contour deformation
or series acceleration, so convergence in T is slow (O(1/T)) whenever
the transform decays like 1/s.  A :class:`TruncationWarning` is emitted
when the contour integrand has not decayed to 1e-6 of its peak at the
endpoints.

The evaluation line matters: the inversion is only valid for sigma above
the abscissa of convergence of the original function, which
:func:`estimate_abscissa` recovers from samples by a log-linear fit.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    ContractViolationError,
    DivergenceError,
    InsufficientDataError,
    ExcludedSampleWarning,
    TruncationWarning,
)
from .numerics import (
    Grid,
    HalfLineResult,
    QuadratureSpec,
    SampledFunction,
    _eval_integrand,
    composite_gauss_nodes,
    integrate_halfline,
    oscillation_panels,
)

# Contour step bound: at most 0.05, and at most pi/(8 t) for the target time.
CONTOUR_STEP = 0.05
CONTOUR_ENDPOINT_RATIO = 1e-6


@dataclass(frozen=True)
class LaplaceSpectrum:
    """Samples of a transform along the vertical line sigma + i*tau."""

    sigma: float
    tau_grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.ndim != 1 or vals.size != len(self.tau_grid):
            raise ContractViolationError(
                f"value count {vals.size} does not match tau grid size {len(self.tau_grid)}"
            )
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class ExponentialTypeEstimate:
    """Fitted growth bound |f(x)| ~ M_hat * exp(sigma_hat * x)."""

    sigma_hat: float
    M_hat: float
    fit_residual: float

    def __post_init__(self):
        if not math.isfinite(self.fit_residual):
            raise ContractViolationError("fit residual must be finite")


def forward_laplace(
    f,
    s: complex,
    truncation: float,
    spec: QuadratureSpec | None = None,
) -> HalfLineResult:
    """Integral of f(x) exp(-s*x) over [0, X] with tail estimate.

    Re(s) must exceed the growth rate of f; a growing integrand at the
    truncation point raises :class:`DivergenceError`.
    """
    s = complex(s)
    X = float(truncation)
    panels = oscillation_panels(s.imag, 0.0, X)

    def integrand(x):
        return f(x) * np.exp(-s * np.asarray(x))

    return integrate_halfline(integrand, X, spec, panels=panels)


def laplace_line(
    f,
    sigma: float,
    tau_grid: Grid,
    truncation: float,
    spec: QuadratureSpec | None = None,
) -> LaplaceSpectrum:
    """Sample the transform along sigma + i*tau for every tau in the grid.

    All line points share one composite rule fine enough for the fastest
    oscillation on the grid, so the whole line costs a single sweep of
    function evaluations.
    """
    X = float(truncation)
    if not X > 0:
        raise ContractViolationError("truncation point must be > 0")
    taus = tau_grid.points
    order = spec.order if spec is not None else 10
    panels = oscillation_panels(float(np.max(np.abs(taus))) if taus.size else 0.0, 0.0, X)
    nodes, weights = composite_gauss_nodes(0.0, X, order, panels)
    fx = _eval_integrand(f, nodes)
    f_end = abs(complex(_eval_integrand(f, np.array([X]))[0]))
    f_mid = abs(complex(_eval_integrand(f, np.array([X / 2.0]))[0]))
    if f_end > f_mid:
        raise DivergenceError(
            f"integrand grows toward the truncation point: |f({X})|={f_end:.3e} "
            f"> |f({X / 2.0})|={f_mid:.3e}"
        )
    damped = fx * weights * np.exp(-sigma * nodes)
    values = np.empty(taus.size, dtype=complex)
    chunk = max(1, int(4e6 // max(1, nodes.size)))
    for start in range(0, taus.size, chunk):
        stop = min(start + chunk, taus.size)
        values[start:stop] = damped @ np.exp(-1j * np.outer(nodes, taus[start:stop]))
    return LaplaceSpectrum(sigma=sigma, tau_grid=tau_grid, values=values)


def _contour_sum(s: np.ndarray, fhat_values: np.ndarray, weights: np.ndarray, t: float) -> complex:
    g = fhat_values * np.exp(s * t)
    peak = float(np.max(np.abs(g)))
    ends = max(abs(g[0]), abs(g[-1]))
    if peak > 0 and ends > CONTOUR_ENDPOINT_RATIO * peak:
        warnings.warn(
            TruncationWarning(
                f"contour integrand at the endpoints is {ends / peak:.2e} of its peak; "
                "raise the contour half-height T for full accuracy"
            ),
            stacklevel=3,
        )
    return complex(np.dot(weights, g) / (2.0 * math.pi))


def bromwich_inverse(
    fhat,
    sigma: float,
    T: float,
    t: float,
    spec: QuadratureSpec | None = None,
) -> complex:
    """Truncated contour inversion (1/2pi) int_{-T}^{T} fhat(sigma+i*tau) e^{(sigma+i*tau) t} d tau.

    ``sigma`` must exceed the abscissa of convergence of the original
    function and ``t`` must be positive.  The parametrized contour
    absorbs the 1/i of the line integral.  The imaginary part of the
    result should be near zero for real originals and serves as a
    consistency diagnostic.
    """
    if not T > 0:
        raise ContractViolationError("contour half-height T must be > 0")
    if not t > 0:
        raise ContractViolationError("evaluation time t must be > 0")
    step_bound = min(CONTOUR_STEP, math.pi / (8.0 * t))
    n = int(math.ceil(T / step_bound))
    tau = np.linspace(-T, T, 2 * n + 1)
    s = sigma + 1j * tau
    try:
        vals = np.asarray(fhat(s), dtype=complex)
        if vals.shape != s.shape:
            raise TypeError
    except (TypeError, ValueError):
        vals = np.array([complex(fhat(complex(sv))) for sv in s])
    h = T / n
    weights = np.full(tau.size, h)
    weights[0] = weights[-1] = h / 2.0
    return _contour_sum(s, vals, weights, t)


def bromwich_inverse_from_samples(spectrum: LaplaceSpectrum, t: float) -> complex:
    """Contour inversion from transform samples stored on a vertical line.

    The stored tau grid plays the role of the truncated contour; its
    spacing must satisfy the same step bound as :func:`bromwich_inverse`.
    """
    if not t > 0:
        raise ContractViolationError("evaluation time t must be > 0")
    grid = spectrum.tau_grid
    if len(grid) < 3:
        raise ContractViolationError("contour needs at least three samples")
    step_bound = min(CONTOUR_STEP, math.pi / (8.0 * t))
    if grid.kind == "uniform" and grid.spacing > step_bound * (1 + 1e-9):
        raise ContractViolationError(
            f"stored contour step {grid.spacing:.6g} exceeds the bound {step_bound:.6g} for t={t:g}"
        )
    s = spectrum.sigma + 1j * grid.points
    return _contour_sum(s, spectrum.values, grid.trapezoid_weights(), t)


def weighted_orthogonality_check(lam: float, mu: float, sigma: float, A: float) -> complex:
    """Truncated weighted inner product of two half-line eigenfunctions.

    The weight exp(-2*sigma*x) cancels the growth of the eigenfunctions
    exp((sigma - i*lam) x), leaving int_0^A exp(-i*(lam-mu)*x) dx.  On
    the diagonal (lam == mu) the value is exactly A, diverging as the
    truncation grows; off the diagonal it stays bounded, the half-line
    analogue of the truncated delta kernel.
    """
    if not A > 0:
        raise ContractViolationError("truncation A must be > 0")
    d = lam - mu
    if d == 0.0:
        return complex(A)
    # (1 - exp(-i*A*d)) / (i*d), written with expm1 for small phases
    return complex(-np.expm1(-1j * A * d) / (1j * d))


def default_inversion_sigma(samples: SampledFunction) -> float:
    """Contour abscissa for inversion when samples of the original exist.

    One unit above the fitted growth rate, which keeps the damped
    original square integrable on the half line.
    """
    return estimate_abscissa(samples).sigma_hat + 1.0


def estimate_abscissa(samples: SampledFunction) -> ExponentialTypeEstimate:
    """Least-squares growth rate from log-magnitude samples.

    Fits log |f(x)| against x over the upper half of the usable samples
    (x > 0 and |f(x)| > 0), biasing the estimate toward asymptotic
    behavior.  Needs at least 8 usable samples; zero magnitudes are
    excluded with a warning.
    """
    x = samples.grid.points
    mag = np.abs(samples.values)
    positive_x = x > 0
    usable = positive_x & (mag > 0)
    n_zero = int(np.count_nonzero(positive_x & (mag == 0)))
    if n_zero:
        warnings.warn(
            ExcludedSampleWarning(f"excluded {n_zero} zero-magnitude samples from the fit"),
            stacklevel=2,
        )
    xu = x[usable]
    yu = np.log(mag[usable])
    if xu.size < 8:
        raise InsufficientDataError(
            f"abscissa estimation needs at least 8 usable samples, got {xu.size}"
        )
    upper = slice(xu.size // 2, None)
    xf, yf = xu[upper], yu[upper]
    slope, intercept = np.polyfit(xf, yf, 1)
    resid = float(np.sqrt(np.mean((yf - (slope * xf + intercept)) ** 2)))
    return ExponentialTypeEstimate(
        sigma_hat=float(slope), M_hat=float(np.exp(intercept)), fit_residual=resid
    )
