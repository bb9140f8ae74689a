"""Fourier transform pair and the truncated-kernel delta regularization.

Normalization: the forward transform carries the 1/(2*pi) factor and the
analysis kernel exp(+i*lam*x); the inverse uses exp(-i*lam*x) with no
prefactor.  This mirrors the common symmetric convention: multiply a
forward spectrum by sqrt(2*pi) and flip the kernel signs to convert.

The Dirac delta is never represented as a value.  Identities that would
use it are realized through :func:`dirichlet_delta`, the truncated
integral (1/2pi) * int_{-A}^{A} exp(-i*a*x) dx = sin(a*A) / (pi*a),
whose sifting behavior improves as A grows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AliasingError, ContractViolationError
from .numerics import Grid, QuadratureSpec, SampledFunction, integrate, oscillation_panels

# Largest tolerable phase advance per grid step in the inverse transform.
ALIASING_PHASE_BOUND = math.pi / 4


@dataclass(frozen=True)
class ContinuousSpectrum:
    """Samples F(lam) on a real frequency grid."""

    lambda_grid: Grid
    values: np.ndarray
    convention: str = "paper-fourier"

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.ndim != 1 or vals.size != len(self.lambda_grid):
            raise ContractViolationError(
                f"value count {vals.size} does not match frequency grid size "
                f"{len(self.lambda_grid)}"
            )
        object.__setattr__(self, "values", vals)


def forward_ft(
    f,
    lambda_grid: Grid,
    truncation: float,
    spec: QuadratureSpec | None = None,
) -> ContinuousSpectrum:
    """F(lam) = (1/2pi) * integral of f(x) exp(i*lam*x) over [-A, A].

    The caller asserts that |f| is integrable with negligible tail
    beyond the truncation A.  Quadrature panels scale with the kernel
    oscillation at each frequency.
    """
    A = float(truncation)
    if not A > 0:
        raise ContractViolationError("truncation A must be > 0")
    lams = lambda_grid.points
    values = np.empty(lams.size, dtype=complex)
    for i, lam in enumerate(lams):
        panels = oscillation_panels(lam, -A, A)
        values[i] = integrate(
            lambda x, lam=lam: f(x) * np.exp(1j * lam * np.asarray(x)),
            (-A, A),
            spec,
            panels=panels,
        ) / (2.0 * math.pi)
    return ContinuousSpectrum(lambda_grid=lambda_grid, values=values)


def inverse_ft(
    spectrum: ContinuousSpectrum,
    x_grid: Grid,
    spec: QuadratureSpec | None = None,
) -> SampledFunction:
    """f(x) = integral of F(lam) exp(-i*lam*x) d lam over the spectrum grid.

    No 1/(2*pi) factor appears here; it lives in the forward direction.
    The spectrum is known only at its grid points, so the integral is a
    trapezoid sum over that grid.  Requests with |x| * grid-step above
    pi/4 are rejected as aliased.
    """
    lams = spectrum.lambda_grid.points
    if lams.size < 2:
        raise ContractViolationError("spectrum grid needs at least two points")
    if spectrum.lambda_grid.kind != "uniform":
        raise ContractViolationError("inverse transform requires a uniform frequency grid")
    step = spectrum.lambda_grid.spacing
    x_max = float(np.max(np.abs(x_grid.points)))
    if x_max * step > ALIASING_PHASE_BOUND:
        raise AliasingError(
            f"frequency step {step:.6g} too coarse for |x| up to {x_max:.6g}: "
            f"step * |x| = {x_max * step:.6g} exceeds pi/4"
        )
    w = spectrum.lambda_grid.trapezoid_weights()
    phases = np.exp(-1j * np.outer(x_grid.points, lams))
    values = phases @ (w * spectrum.values)
    return SampledFunction(grid=x_grid, values=values)


def dirichlet_delta(a: float, A: float) -> float:
    """Truncated delta kernel sin(a*A) / (pi*a), with the a -> 0 limit A/pi."""
    if not A > 0:
        raise ContractViolationError("truncation A must be > 0")
    if abs(a) < 1e-12:
        return A / math.pi
    return math.sin(a * A) / (math.pi * a)
