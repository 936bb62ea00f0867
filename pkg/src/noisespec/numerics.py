"""1-d quadrature and maximization helpers used by the bound calculators.

Everything here is deterministic: repeated calls with the same inputs
return bit-identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple

import numpy as np
from scipy import integrate as _sciint

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0  # 1/phi, golden-section shrink factor


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance.

    Carries the best available estimate and its error bound so callers
    can decide whether to proceed anyway.
    """

    def __init__(self, message: str, estimate: float, error_bound: float):
        super().__init__(
            f"{message} (best estimate {estimate:.17g}, error bound {error_bound:.3g})"
        )
        self.estimate = estimate
        self.error_bound = error_bound


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances for adaptive quadrature.

    rel_tol is the target relative accuracy.  abs_tol is an absolute
    floor on the accepted error bound; it keeps integrals whose true
    value is zero (odd integrands over symmetric ranges) well posed
    under a relative stopping rule.  max_subdivisions caps the number
    of adaptive subintervals.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_subdivisions: int = 200

    def __post_init__(self):
        if not (self.rel_tol > 0.0 and math.isfinite(self.rel_tol)):
            raise ValueError("rel_tol must be positive and finite")
        if not (self.abs_tol >= 0.0 and math.isfinite(self.abs_tol)):
            raise ValueError("abs_tol must be nonnegative and finite")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be at least 1")


DEFAULT_QUADRATURE = QuadratureSpec()


class IntegralResult(NamedTuple):
    value: float
    error_bound: float
    neval: int


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadratureSpec | None = None,
    breakpoints: Iterable[float] | None = None,
) -> IntegralResult:
    """Integrate f over [a, b] with adaptive Gauss-Kronrod subdivision.

    Infinite endpoints are allowed.  breakpoints marks known kinks of f
    (only used on finite ranges); points outside (a, b) are ignored.
    Raises QuadratureError, carrying the best estimate and its error
    bound, if the tolerance in spec cannot be met.
    """
    spec = spec if spec is not None else DEFAULT_QUADRATURE
    a = float(a)
    b = float(b)
    if math.isnan(a) or math.isnan(b):
        raise ValueError("integration limits must not be NaN")
    if a > b:
        raise ValueError(f"need a <= b, got a={a}, b={b}")
    if a == b:
        return IntegralResult(0.0, 0.0, 0)

    pts = None
    if breakpoints is not None and math.isfinite(a) and math.isfinite(b):
        pts = sorted({float(p) for p in breakpoints if a < p < b})
        if not pts:
            pts = None
    limit = spec.max_subdivisions
    if pts is not None:
        # QUADPACK needs room for the forced initial partition
        limit = max(limit, 2 * len(pts) + 10)

    out = _sciint.quad(
        f, a, b, epsabs=0.0, epsrel=spec.rel_tol, limit=limit, points=pts, full_output=1
    )
    value = float(out[0])
    error_bound = float(out[1])
    info = out[2] if len(out) > 2 else {}
    neval = int(info["neval"]) if isinstance(info, dict) and "neval" in info else -1

    if not math.isfinite(value):
        raise QuadratureError("integrand produced a non-finite integral", value, error_bound)
    if error_bound > max(spec.rel_tol * abs(value), spec.abs_tol):
        raise QuadratureError("quadrature did not converge", value, error_bound)
    return IntegralResult(value, error_bound, neval)


@dataclass(frozen=True)
class MaximizeResult:
    x: float
    value: float
    used_grid_fallback: bool


def _rise_after_fall(fs: np.ndarray) -> bool:
    """True when the sampled values fall and later rise again (two humps)."""
    d = np.diff(fs)
    d = np.where(np.isnan(d), 0.0, d)  # adjacent -inf samples: flat
    finite = fs[np.isfinite(fs)]
    span = float(np.max(finite) - np.min(finite)) if finite.size else 0.0
    d = np.where(np.abs(d) <= 1e-12 * span, 0.0, d)
    signs = np.sign(d)
    signs = signs[signs != 0.0]
    fell = False
    for s in signs:
        if s < 0.0:
            fell = True
        elif fell:
            return True
    return False


def _golden_max(f, a: float, b: float, tol: float) -> tuple[float, float]:
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = float(f(c))
    fd = float(f(d))
    while (b - a) > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = float(f(c))
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = float(f(d))
    return (c, fc) if fc >= fd else (d, fd)


def maximize_1d(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-10,
    coarse_points: int = 33,
    fallback_points: int = 4097,
) -> MaximizeResult:
    """Maximize f on [lo, hi] by golden-section search.

    A coarse scan first brackets the maximum.  If the scan shows a rise
    after a fall (the objective is not unimodal) the search restarts
    from a dense grid and the result is flagged via used_grid_fallback.
    Maxima at the range ends are returned as lo or hi exactly.
    """
    lo = float(lo)
    hi = float(hi)
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError("maximize_1d needs a finite range")
    if lo > hi:
        raise ValueError(f"need lo <= hi, got lo={lo}, hi={hi}")
    if not (tol > 0.0):
        raise ValueError("tol must be positive")
    if lo == hi:
        return MaximizeResult(lo, float(f(lo)), False)

    def scan(n: int) -> tuple[np.ndarray, np.ndarray]:
        x = np.linspace(lo, hi, n)
        y = np.array([float(f(xi)) for xi in x])
        # -inf is a legitimate "reject this point"; NaN and +inf are not
        if np.any(np.isnan(y)) or np.any(y == math.inf):
            raise ValueError("objective returned NaN or +inf")
        if not np.any(np.isfinite(y)):
            raise ValueError("objective is -inf everywhere on the range")
        return x, y

    xs, fs = scan(coarse_points)
    used_fallback = False
    if _rise_after_fall(fs):
        used_fallback = True
        xs, fs = scan(fallback_points)

    i = int(np.argmax(fs))
    a = float(xs[max(i - 1, 0)])
    b = float(xs[min(i + 1, len(xs) - 1)])
    best_x, best_f = _golden_max(f, a, b, tol)

    # ends win ties so callers see exact endpoint coordinates
    f_lo = float(fs[0])
    f_hi = float(fs[-1])
    if f_hi >= best_f:
        best_x, best_f = hi, f_hi
    if f_lo >= best_f:
        best_x, best_f = lo, f_lo
    return MaximizeResult(best_x, best_f, used_fallback)


def central_difference(f: Callable[[float], float], x: float, step: float | None = None) -> float:
    """Two-sided difference quotient with the default step 1e-6 * max(1, |x|)."""
    h = step if step is not None else 1e-6 * max(1.0, abs(x))
    if not (h > 0.0):
        raise ValueError("step must be positive")
    return (float(f(x + h)) - float(f(x - h))) / (2.0 * h)
