"""First-order differential eigenvalue problems behind the four transforms.

Four problem kinds are supported:

* ``periodic-interval``: i y' = lam y on (-L, L) with y(-L) = y(L);
  discrete spectrum lam_k = k*pi/L, eigenfunctions exp(-i*k*pi*x/L).
* ``whole-line``: i y' = lam y on R; continuum spectrum R with
  non-normalizable eigenfunctions exp(-i*lam*x).
* ``weighted-halfline``: i (y' - sigma y) = lam y on [0, inf);
  continuum spectrum R, eigenfunctions exp((sigma - i*lam) x),
  orthogonal under the weight exp(-2*sigma*x).
* ``product-2d``: the separable pair of the above on R x [0, inf),
  eigenfunctions exp(-i*lam*x + (sigma - i*mu) t).

The continuum kinds come with a residual-ratio test: a sequence of
square-integrable windowed functions y_n whose normalized operator
residual decays like 1/n certifies that lam belongs to the continuous
spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolationError
from .numerics import Grid, QuadratureSpec, integrate

KINDS = ("periodic-interval", "whole-line", "weighted-halfline", "product-2d")

# The gaussian window drops below 1e-14 of its peak at |u| = 8.
_WINDOW_SUPPORT = 8.0


@dataclass(frozen=True)
class EigenProblemSpec:
    """One of the four first-order operator problems."""

    kind: str
    L: float | None = None
    sigma: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ContractViolationError(f"unknown problem kind {self.kind!r}")
        if self.kind == "periodic-interval":
            if self.L is None or not self.L > 0:
                raise ContractViolationError("periodic-interval problems need L > 0")
        if self.kind in ("weighted-halfline", "product-2d"):
            if self.sigma is None or not math.isfinite(self.sigma):
                raise ContractViolationError(f"{self.kind} problems need a finite sigma")

    @classmethod
    def periodic(cls, L: float) -> "EigenProblemSpec":
        return cls(kind="periodic-interval", L=L)

    @classmethod
    def whole_line(cls) -> "EigenProblemSpec":
        return cls(kind="whole-line")

    @classmethod
    def weighted_halfline(cls, sigma: float) -> "EigenProblemSpec":
        return cls(kind="weighted-halfline", sigma=sigma)

    @classmethod
    def product_2d(cls, sigma: float) -> "EigenProblemSpec":
        return cls(kind="product-2d", sigma=sigma)


@dataclass(frozen=True)
class Eigenvalue:
    """A spectral point: a real scalar, or a (lam, mu) pair for product-2d."""

    value: float | tuple[float, float]
    spectrum_kind: str = "discrete"

    def __post_init__(self):
        if self.spectrum_kind not in ("discrete", "continuum"):
            raise ContractViolationError(
                f"spectrum kind must be 'discrete' or 'continuum', got {self.spectrum_kind!r}"
            )


@dataclass(frozen=True)
class WindowedTestSequence:
    """Gaussian-windowed trial sequence y_n(x) = e(x) * w(x/n).

    ``lam`` is the modulation of the underlying continuum eigenfunction
    ``e``; ``n`` indexes the window width.  Every member is square
    integrable for finite n.
    """

    lam: float
    n: int
    shape: str = "gaussian"

    def __post_init__(self):
        if self.n < 1:
            raise ContractViolationError("window-width index n must be >= 1")
        if self.shape != "gaussian":
            raise ContractViolationError("only the gaussian window shape is supported")


def discrete_eigenvalues(L: float, k_max: int) -> list[Eigenvalue]:
    """Eigenvalues k*pi/L of the periodic problem for k = -k_max .. k_max."""
    if not L > 0:
        raise ContractViolationError("L must be > 0")
    if k_max < 0:
        raise ContractViolationError("k_max must be >= 0")
    return [
        Eigenvalue(value=k * math.pi / L, spectrum_kind="discrete")
        for k in range(-k_max, k_max + 1)
    ]


def eigenfunction_eval(problem: EigenProblemSpec, eigenvalue: Eigenvalue, x):
    """Evaluate the eigenfunction of ``problem`` at ``x``.

    For ``product-2d`` both the eigenvalue and ``x`` must be pairs.
    Accepts numpy arrays in place of scalars.
    """
    val = eigenvalue.value
    if problem.kind == "product-2d":
        if not (isinstance(val, tuple) and len(val) == 2):
            raise ContractViolationError("product-2d problems need a (lam, mu) eigenvalue pair")
        if not (isinstance(x, tuple) and len(x) == 2):
            raise ContractViolationError("product-2d eigenfunctions take an (x, t) pair")
        lam, mu = val
        xx, tt = x
        return np.exp(-1j * lam * np.asarray(xx) + (problem.sigma - 1j * mu) * np.asarray(tt))
    if isinstance(val, tuple):
        raise ContractViolationError(f"{problem.kind} problems need a scalar eigenvalue")
    if isinstance(x, tuple):
        raise ContractViolationError(f"{problem.kind} eigenfunctions take a scalar argument")
    if problem.kind in ("periodic-interval", "whole-line"):
        return np.exp(-1j * val * np.asarray(x)) if np.ndim(x) else complex(
            np.exp(-1j * val * x)
        )
    # weighted-halfline
    z = (problem.sigma - 1j * val) * np.asarray(x)
    return np.exp(z) if np.ndim(x) else complex(np.exp(z))


def residual_ratio(
    problem: EigenProblemSpec,
    lam: float,
    seq: WindowedTestSequence,
    spec: QuadratureSpec | None = None,
) -> float:
    """Normalized operator residual ||(M - lam) y_n|| / ||y_n||.

    ``y_n`` is the gaussian-windowed sequence described by ``seq``; the
    operator ``M`` is i d/dx on the whole line or i (d/dx - sigma) on the
    weighted half-line, where the norm carries the weight
    exp(-2*sigma*x).  The derivative of y_n is evaluated analytically
    via the product rule; norms are computed by quadrature over the
    window's effective support.
    """
    if problem.kind not in ("whole-line", "weighted-halfline"):
        raise ContractViolationError(
            "residual_ratio is defined for whole-line and weighted-halfline problems"
        )
    n = seq.n
    lam0 = seq.lam
    half_width = _WINDOW_SUPPORT * n

    def window(u):
        return np.exp(-np.asarray(u) ** 2 / 2.0)

    def window_deriv(u):
        u = np.asarray(u)
        return -u * np.exp(-(u**2) / 2.0)

    if problem.kind == "whole-line":
        interval = (-half_width, half_width)

        def weight(x):
            return 1.0

        def base(x):
            return np.exp(-1j * lam0 * np.asarray(x))

        def base_rate(x):
            return -1j * lam0

        sigma = 0.0
    else:
        interval = (0.0, half_width)
        sigma = problem.sigma

        def weight(x):
            return np.exp(-2.0 * sigma * np.asarray(x))

        def base(x):
            return np.exp((sigma - 1j * lam0) * np.asarray(x))

        def base_rate(x):
            return sigma - 1j * lam0

    def residual_sq(x):
        x = np.asarray(x)
        w = window(x / n)
        dw = window_deriv(x / n) / n
        y = base(x) * w
        dy = base(x) * (base_rate(x) * w + dw)
        applied = 1j * (dy - sigma * y) - lam * y
        return weight(x) * np.abs(applied) ** 2

    def norm_sq(x):
        x = np.asarray(x)
        y = base(x) * window(x / n)
        return weight(x) * np.abs(y) ** 2

    # Seed enough panels that the window bump cannot slip between nodes.
    num = integrate(residual_sq, interval, spec, panels=8).real
    den = integrate(norm_sq, interval, spec, panels=8).real
    return math.sqrt(num / den)


def periodic_boundary_values(L: float, k: int) -> tuple[complex, complex]:
    """Endpoint values (y_k(-L), y_k(L)) of the periodic eigenfunction.

    At x = +-L the phase is an exact multiple of pi, so the values
    reduce by parity to (-1)**k with no rounding.
    """
    if not L > 0:
        raise ContractViolationError("L must be > 0")
    v = complex(-1.0 if k % 2 else 1.0)
    return v, v


def sl_residual(L: float, k: int, x_grid: Grid) -> float:
    """Defect of the second-order reformulation on a grid.

    Applies the first-order operator twice: with y_k = exp(-i*k*pi*x/L)
    and lam = k*pi/L, checks max |{-y_k''} - lam^2 y_k| over the grid
    using the analytic second derivative, and verifies the periodic
    boundary conditions y(-L) = y(L) and y'(-L) = y'(L) exactly via the
    parity reduction at the endpoints.
    """
    if not L > 0:
        raise ContractViolationError("L must be > 0")
    lam = k * math.pi / L
    x = x_grid.points
    y = np.exp(-1j * lam * x)
    y_second = (-1j * lam) ** 2 * y
    defect = np.max(np.abs(-y_second - lam**2 * y))

    left, right = periodic_boundary_values(L, k)
    if left != right:
        raise ContractViolationError("periodic boundary condition y(-L) = y(L) failed")
    dleft = -1j * lam * left
    dright = -1j * lam * right
    if dleft != dright:
        raise ContractViolationError("periodic boundary condition y'(-L) = y'(L) failed")
    return float(defect)
