"""Grids, complex-valued sampled functions, and quadrature engines.

All integrals in the toolkit go through :func:`integrate` (finite
intervals) or :func:`integrate_halfline` (truncated ``[0, X]`` integrals
with a tail estimate).  Oscillatory integrands are handled by panel
subdivision, see :func:`oscillation_panels`; there is no Filon-type
machinery here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import (
    ContractViolationError,
    DivergenceError,
    EvaluationError,
    QuadratureError,
)

DEFAULT_TOLERANCE = 1e-10

_METHODS = ("trapezoid", "gauss-legendre", "adaptive")
_MAX_BISECTIONS = 48


@dataclass(frozen=True)
class QuadratureSpec:
    """Quadrature method selection.

    ``order`` is the node count per panel for Gauss-Legendre and the
    panel count for the trapezoid rule; the adaptive engine uses it as
    the base rule refined by bisection.  ``tolerance`` is the absolute
    error target of the adaptive engine.
    """

    method: str = "adaptive"
    order: int = 10
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        if self.method not in _METHODS:
            raise ContractViolationError(
                f"unknown quadrature method {self.method!r}; expected one of {_METHODS}"
            )
        if self.order < 2:
            raise ContractViolationError("quadrature order must be >= 2")
        if not self.tolerance > 0:
            raise ContractViolationError("quadrature tolerance must be > 0")


DEFAULT_SPEC = QuadratureSpec()


class Grid:
    """Ordered real abscissae.

    ``kind`` is either ``"uniform"`` (constant spacing, checked to a
    relative tolerance of 1e-12) or ``"gauss-nodes"``.
    """

    __slots__ = ("points", "kind")

    def __init__(self, points: Sequence[float] | np.ndarray, kind: str = "uniform"):
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 1 or pts.size == 0:
            raise ContractViolationError("grid points must form a non-empty 1-D sequence")
        if not np.all(np.isfinite(pts)):
            raise ContractViolationError("grid points must be finite")
        if pts.size > 1 and not np.all(np.diff(pts) > 0):
            raise ContractViolationError("grid points must be strictly increasing")
        if kind not in ("uniform", "gauss-nodes"):
            raise ContractViolationError(f"unknown grid kind {kind!r}")
        if kind == "uniform" and pts.size > 2:
            d = np.diff(pts)
            mean = d.mean()
            if np.max(np.abs(d - mean)) > 1e-12 * max(abs(mean), np.max(np.abs(pts))):
                raise ContractViolationError("uniform grid has non-constant spacing")
        pts.flags.writeable = False
        self.points = pts
        self.kind = kind

    @classmethod
    def uniform(cls, a: float, b: float, num: int) -> "Grid":
        if num < 1:
            raise ContractViolationError("grid needs at least one point")
        if num == 1:
            return cls(np.array([a]), kind="uniform")
        if not a < b:
            raise ContractViolationError("grid requires a < b")
        return cls(np.linspace(a, b, num), kind="uniform")

    @property
    def spacing(self) -> float:
        if self.kind != "uniform":
            raise ContractViolationError("spacing is defined for uniform grids only")
        if self.points.size < 2:
            raise ContractViolationError("spacing needs at least two points")
        return float((self.points[-1] - self.points[0]) / (self.points.size - 1))

    def trapezoid_weights(self) -> np.ndarray:
        """Weights w with sum(w * f(points)) the trapezoid integral."""
        x = self.points
        if x.size == 1:
            return np.zeros(1)
        w = np.empty_like(x)
        w[0] = (x[1] - x[0]) / 2
        w[-1] = (x[-1] - x[-2]) / 2
        w[1:-1] = (x[2:] - x[:-2]) / 2
        return w

    def __len__(self) -> int:
        return self.points.size

    def __repr__(self) -> str:
        return f"Grid({self.points.size} points on [{self.points[0]:g}, {self.points[-1]:g}], {self.kind})"


class SampledFunction:
    """Complex values attached to a one-dimensional grid."""

    __slots__ = ("grid", "values")

    def __init__(self, grid: Grid, values: Sequence[complex] | np.ndarray):
        vals = np.asarray(values, dtype=complex)
        if vals.ndim != 1 or vals.size != len(grid):
            raise ContractViolationError(
                f"value count {vals.size} does not match grid size {len(grid)}"
            )
        vals.flags.writeable = False
        self.grid = grid
        self.values = vals

    def __len__(self) -> int:
        return self.values.size


class SampledFunction2D:
    """Complex values on the product of an x grid and a t grid.

    ``values[i, j]`` corresponds to ``(x_grid.points[i], t_grid.points[j])``.
    """

    __slots__ = ("x_grid", "t_grid", "values")

    def __init__(self, x_grid: Grid, t_grid: Grid, values: np.ndarray):
        vals = np.asarray(values, dtype=complex)
        if vals.shape != (len(x_grid), len(t_grid)):
            raise ContractViolationError(
                f"value shape {vals.shape} does not match grids "
                f"({len(x_grid)}, {len(t_grid)})"
            )
        vals.flags.writeable = False
        self.x_grid = x_grid
        self.t_grid = t_grid
        self.values = vals


@dataclass(frozen=True)
class HalfLineResult:
    """Truncated half-line integral plus an estimated tail bound."""

    value: complex
    tail_estimate: float

    def __complex__(self) -> complex:
        return self.value


@lru_cache(maxsize=64)
def _leggauss(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def _eval_integrand(f: Callable, xs: np.ndarray) -> np.ndarray:
    """Evaluate f on an array, vectorized when possible, and check finiteness."""
    try:
        out = np.asarray(f(xs), dtype=complex)
        if out.shape != xs.shape:
            raise TypeError
    except (TypeError, ValueError):
        out = np.array([complex(f(float(v))) for v in xs])
    bad = ~np.isfinite(out)
    if bad.any():
        x_bad = float(xs[np.argmax(bad)])
        raise EvaluationError(f"integrand returned a non-finite value at x={x_bad!r}")
    return out


def _gauss_panel(f, lo: float, hi: float, xg: np.ndarray, wg: np.ndarray) -> complex:
    half = (hi - lo) / 2.0
    mid = (lo + hi) / 2.0
    vals = _eval_integrand(f, mid + half * xg)
    return complex(half * np.dot(wg, vals))


def _gauss_composite(f, a: float, b: float, order: int, panels: int) -> complex:
    nodes, weights = composite_gauss_nodes(a, b, order, panels)
    vals = _eval_integrand(f, nodes)
    return complex(np.dot(weights, vals))


def _trapezoid_composite(f, a: float, b: float, panels: int) -> complex:
    xs = np.linspace(a, b, panels + 1)
    vals = _eval_integrand(f, xs)
    h = (b - a) / panels
    return complex(h * (vals.sum() - (vals[0] + vals[-1]) / 2.0))


def _adaptive(f, a: float, b: float, order: int, tol: float, panels: int) -> complex:
    xg, wg = _leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    span = b - a
    stack = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        stack.append((float(lo), float(hi), _gauss_panel(f, lo, hi, xg, wg), 0))
    total = 0j
    defect = 0.0
    while stack:
        lo, hi, coarse, depth = stack.pop()
        mid = (lo + hi) / 2.0
        left = _gauss_panel(f, lo, mid, xg, wg)
        right = _gauss_panel(f, mid, hi, xg, wg)
        fine = left + right
        if abs(fine - coarse) <= tol * (hi - lo) / span:
            total += fine
        elif depth >= _MAX_BISECTIONS or mid <= lo or mid >= hi:
            # Cannot subdivide further (jump or machine resolution); keep
            # the refined value and account for its unresolved defect.
            total += fine
            defect += abs(fine - coarse)
        else:
            stack.append((mid, hi, right, depth + 1))
            stack.append((lo, mid, left, depth + 1))
    if defect > tol:
        raise QuadratureError(
            f"adaptive quadrature error estimate {defect:.3e} exceeds tolerance {tol:.3e}"
        )
    return total


def composite_gauss_nodes(a: float, b: float, order: int, panels: int):
    """Flattened nodes and weights of a composite Gauss-Legendre rule."""
    xg, wg = _leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    mid = (edges[:-1] + edges[1:]) / 2.0
    half = (edges[1:] - edges[:-1]) / 2.0
    nodes = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    weights = (half[:, None] * wg[None, :]).ravel()
    return nodes, weights


def oscillation_panels(frequency: float, a: float, b: float, per_period: float = 1.5) -> int:
    """Panel count resolving a kernel exp(i*frequency*x) on [a, b].

    Subdivision is proportional to the number of oscillation periods on
    the interval; smooth non-oscillatory integrands get a single panel.
    """
    periods = abs(frequency) * (b - a) / (2.0 * math.pi)
    return max(1, math.ceil(periods * per_period))


def integrate(
    f: Callable,
    interval: tuple[float, float],
    spec: QuadratureSpec | None = None,
    panels: int = 1,
) -> complex:
    """Integrate a complex-valued function of one real variable over [a, b].

    Parameters
    ----------
    f : callable
        Integrand; may accept numpy arrays for speed, scalars otherwise.
    interval : (a, b)
        Finite bounds with a < b.
    spec : QuadratureSpec, optional
        Method, order and tolerance.  Defaults to adaptive Gauss-Legendre
        with absolute tolerance 1e-10.
    panels : int
        Extra initial subdivision, used by callers that know the
        oscillation scale of their kernel.

    Returns
    -------
    complex
        The integral approximation.  Deterministic for fixed inputs.
    """
    spec = spec or DEFAULT_SPEC
    a, b = float(interval[0]), float(interval[1])
    if not (math.isfinite(a) and math.isfinite(b) and a < b):
        raise ContractViolationError(f"integration interval must satisfy a < b, got ({a}, {b})")
    if panels < 1:
        raise ContractViolationError("panel count must be >= 1")
    if spec.method == "trapezoid":
        return _trapezoid_composite(f, a, b, spec.order * panels)
    if spec.method == "gauss-legendre":
        return _gauss_composite(f, a, b, spec.order, panels)
    return _adaptive(f, a, b, spec.order, spec.tolerance, panels)


def integrate_halfline(
    f: Callable,
    truncation: float,
    spec: QuadratureSpec | None = None,
    damping: float | None = None,
    panels: int = 1,
) -> HalfLineResult:
    """Integrate f over [0, X] and attach a tail bound for [X, infinity).

    The integrand must decay beyond the truncation point; growth
    (``|f(X)| > |f(X/2)|``) raises :class:`DivergenceError`.  The tail
    bound uses the supplied exponential ``damping`` rate when given,
    otherwise a rate estimated from the last two magnitude samples.
    """
    X = float(truncation)
    if not X > 0:
        raise ContractViolationError("truncation point must be > 0")
    f_end = abs(complex(_eval_integrand(f, np.array([X]))[0]))
    f_mid = abs(complex(_eval_integrand(f, np.array([X / 2.0]))[0]))
    if f_end > f_mid:
        raise DivergenceError(
            f"integrand grows toward the truncation point: |f({X})|={f_end:.3e} "
            f"> |f({X / 2.0})|={f_mid:.3e}"
        )
    value = integrate(f, (0.0, X), spec, panels=panels)
    if f_end == 0.0:
        tail = 0.0
    else:
        if damping is not None and damping > 0:
            rate = damping
        elif f_mid > f_end:
            rate = math.log(f_mid / f_end) / (X / 2.0)
        else:
            rate = 0.0
        tail = f_end / rate if rate > 0 else math.inf
    return HalfLineResult(value=value, tail_estimate=tail)
