"""Complex and real Fourier series on (-L, L).

Sign convention: synthesis uses the kernel exp(-i*k*pi*x/L) and analysis
uses exp(+i*k*pi*x/L).  This is the mirror of the most common textbook
convention; all round trips in this package are consistent with it.  To
convert a coefficient set to the opposite convention swap c_k and c_{-k}.

Coefficients are computed by quadrature (never FFT); the truncation at
|k| <= K is hard, so Gibbs behavior near jumps is observable by design.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolationError, EvaluationError, QuadratureError
from .numerics import QuadratureSpec, integrate, oscillation_panels

CONJUGATE_SYMMETRY_TOL = 1e-8


@dataclass(frozen=True)
class FourierCoefficientSet:
    """Complex coefficients c_k for k in [-K, K] on the interval (-L, L)."""

    L: float
    c: dict[int, complex]

    def __post_init__(self):
        if not self.L > 0:
            raise ContractViolationError("L must be > 0")
        ks = sorted(self.c)
        if not ks:
            raise ContractViolationError("coefficient set may not be empty")
        K = ks[-1]
        if ks != list(range(-K, K + 1)):
            raise ContractViolationError(
                "coefficient indices must form a symmetric range -K..K"
            )

    @property
    def K(self) -> int:
        return max(self.c)

    def conjugate_symmetry_defect(self) -> tuple[float, int]:
        """Largest |c_{-k} - conj(c_k)| and the k attaining it."""
        worst, worst_k = 0.0, 0
        for k in range(1, self.K + 1):
            d = abs(self.c[-k] - self.c[k].conjugate())
            if d > worst:
                worst, worst_k = d, k
        return worst, worst_k


@dataclass(frozen=True)
class RealFourierCoefficientSet:
    """Real cosine/sine coefficients: a_k for k in [0, K], b_k for k in [1, K]."""

    L: float
    a: dict[int, float]
    b: dict[int, float]

    def __post_init__(self):
        if not self.L > 0:
            raise ContractViolationError("L must be > 0")
        K = max(self.a) if self.a else -1
        if sorted(self.a) != list(range(0, K + 1)):
            raise ContractViolationError("a-coefficients must cover k = 0..K")
        if sorted(self.b) != list(range(1, K + 1)):
            raise ContractViolationError("b-coefficients must cover k = 1..K")
        for d in (self.a, self.b):
            for k, v in d.items():
                if not math.isfinite(v):
                    raise ContractViolationError(f"coefficient with k={k} is not finite")

    @property
    def K(self) -> int:
        return max(self.a)


def _coefficient_integral(f, kernel_freq: float, L: float, spec: QuadratureSpec | None, k: int) -> complex:
    kernel = lambda x: f(x) * np.exp(1j * kernel_freq * np.asarray(x))
    panels = oscillation_panels(kernel_freq, -L, L)
    try:
        return integrate(kernel, (-L, L), spec, panels=panels)
    except (QuadratureError, EvaluationError) as exc:
        raise QuadratureError(f"coefficient k={k}: {exc}") from exc


def complex_coefficients(
    f, L: float, K: int, spec: QuadratureSpec | None = None
) -> FourierCoefficientSet:
    """Compute c_k = (1/2L) * integral of f(x) exp(i*k*pi*x/L) over (-L, L).

    The integrand for index k oscillates with |k| periods over the
    interval, so the quadrature is subdivided proportionally.
    """
    if not L > 0:
        raise ContractViolationError("L must be > 0")
    if K < 0:
        raise ContractViolationError("K must be >= 0")
    c = {}
    for k in range(-K, K + 1):
        c[k] = _coefficient_integral(f, k * math.pi / L, L, spec, k) / (2.0 * L)
    return FourierCoefficientSet(L=L, c=c)


def synthesize(coeffs: FourierCoefficientSet, x):
    """Partial sum of c_k exp(-i*k*pi*x/L) over all stored k.

    ``x`` may be a scalar in [-L, L] or a numpy array.
    """
    xs = np.asarray(x, dtype=float)
    total = np.zeros(xs.shape, dtype=complex)
    for k, ck in coeffs.c.items():
        total += ck * np.exp(-1j * k * math.pi * xs / coeffs.L)
    return total if np.ndim(x) else complex(total)


def real_coefficients(
    f, L: float, K: int, spec: QuadratureSpec | None = None
) -> RealFourierCoefficientSet:
    """Cosine/sine coefficients a_k = (1/L) int f cos(k pi x / L), b_k likewise with sin."""
    if not L > 0:
        raise ContractViolationError("L must be > 0")
    if K < 0:
        raise ContractViolationError("K must be >= 0")

    def checked(x):
        out = np.asarray(f(x))
        if np.iscomplexobj(out) and np.max(np.abs(out.imag)) > 0:
            raise ContractViolationError("real_coefficients requires a real-valued function")
        return out.real if np.iscomplexobj(out) else out

    a, b = {}, {}
    for k in range(0, K + 1):
        freq = k * math.pi / L
        panels = oscillation_panels(freq, -L, L)
        a[k] = integrate(lambda x: checked(x) * np.cos(freq * np.asarray(x)),
                         (-L, L), spec, panels=panels).real / L
        if k >= 1:
            b[k] = integrate(lambda x: checked(x) * np.sin(freq * np.asarray(x)),
                             (-L, L), spec, panels=panels).real / L
    return RealFourierCoefficientSet(L=L, a=a, b=b)


def complex_to_real(coeffs: FourierCoefficientSet) -> RealFourierCoefficientSet:
    """Bridge a conjugate-symmetric complex set to cosine/sine form.

    Uses a_k = c_k + c_{-k} and b_k = -i (c_k - c_{-k}); a_0 = 2 c_0, so
    the constant term of the cosine/sine series is a_0 / 2.  Requires
    c_{-k} = conj(c_k) within 1e-8 and names the worst index otherwise.
    """
    defect, worst_k = coeffs.conjugate_symmetry_defect()
    if defect > CONJUGATE_SYMMETRY_TOL:
        raise ContractViolationError(
            f"coefficients are not conjugate-symmetric: |c_-k - conj(c_k)| = {defect:.3e} at k={worst_k}"
        )
    a = {0: (2.0 * coeffs.c[0]).real}
    b = {}
    for k in range(1, coeffs.K + 1):
        a[k] = (coeffs.c[k] + coeffs.c[-k]).real
        b[k] = (-1j * (coeffs.c[k] - coeffs.c[-k])).real
    return RealFourierCoefficientSet(L=coeffs.L, a=a, b=b)


def gram_matrix(L: float, K: int, spec: QuadratureSpec | None = None) -> np.ndarray:
    """Pairwise inner products of the eigenfunctions exp(-i*k*pi*x/L).

    Entry (i, j) corresponds to indices k = i - K and l = j - K and is
    computed by quadrature of exp(-i*(k-l)*pi*x/L) over (-L, L).  The
    exact value is 2L on the diagonal and 0 elsewhere.
    """
    if not L > 0:
        raise ContractViolationError("L must be > 0")
    if K < 0:
        raise ContractViolationError("K must be >= 0")
    size = 2 * K + 1
    out = np.empty((size, size), dtype=complex)
    for i in range(size):
        for j in range(size):
            diff = (i - j) * math.pi / L
            panels = oscillation_panels(diff, -L, L)
            out[i, j] = integrate(
                lambda x, d=diff: np.exp(-1j * d * np.asarray(x)),
                (-L, L),
                spec,
                panels=panels,
            )
    return out
