"""Adaptive quadrature with divergence detection.

Thin layer over :func:`scipy.integrate.quad`. Integrals with a singular or
infinite endpoint are split into geometric panels running toward that
endpoint; the panel sums either settle (geometric decay of the panel
contributions) or the routine reports divergence.
"""
from __future__ import annotations

import math
from typing import Callable, Sequence

from scipy import integrate

DEFAULT_TOL = 1e-9
MAGNITUDE_CAP = 1e12
PANEL_CAP = 1_000_000
# geometric panels halve toward the endpoint; below ~1e-300 floats run out
MAX_HALVINGS = 1000


class DivergenceError(ArithmeticError):
    """Raised when an integral is judged infinite (or numerically unusable)."""

    def __init__(self, message: str, partial: float = math.nan):
        super().__init__(message)
        self.partial = partial


def _quad(f: Callable[[float], float], a: float, b: float, tol: float,
          points: Sequence[float] | None = None) -> float:
    if a == b:
        return 0.0
    pts = None
    if points:
        lo, hi = min(a, b), max(a, b)
        pts = sorted({p for p in points if lo < p < hi})
        pts = pts or None
    val = err = math.nan
    for limit in (500, 5000):
        out = integrate.quad(f, a, b, epsabs=tol, epsrel=1e-12, limit=limit,
                             points=pts, full_output=1)
        val, err = out[0], out[1]
        if len(out) == 3:
            break
        # roundoff trouble is harmless when the achieved error is still small
        if "roundoff" in out[3] and err <= max(10 * tol, 1e-10 * abs(val)):
            break
    else:
        raise DivergenceError(f"quadrature failed on [{a}, {b}] (error estimate {err:.3g})", val)
    if not math.isfinite(val) or abs(val) > MAGNITUDE_CAP:
        raise DivergenceError(f"integral on [{a}, {b}] exceeds magnitude cap", val)
    return float(val)


def _tail_small(panel: float, prev: float | None, tol: float) -> bool:
    if prev is None:
        return False
    if panel == 0.0:
        return prev == 0.0
    ratio = abs(panel) / abs(prev) if prev != 0 else math.inf
    return ratio < 0.98 and abs(panel) * ratio / (1 - ratio) < tol / 2


def integrate_interval(f: Callable[[float], float], a: float, b: float,
                       tol: float = DEFAULT_TOL,
                       points: Sequence[float] | None = None) -> float:
    """Integrate a regular integrand over a finite interval."""
    return _quad(f, a, b, tol, points)


def integrate_to_singularity(f: Callable[[float], float], a: float, b: float,
                             singular_at: str = "a",
                             tol: float = DEFAULT_TOL,
                             points: Sequence[float] | None = None) -> float:
    """Integrate over ``[a, b]`` where one endpoint may carry a power singularity.

    The interval is cut into panels whose width halves toward the singular
    endpoint. Summation stops once the geometric tail estimate drops below
    ``tol``. A non-decaying panel sequence, a sum above ``MAGNITUDE_CAP`` or
    exhaustion of the panel budget raises :class:`DivergenceError`.
    """
    if a == b:
        return 0.0
    if singular_at not in ("a", "b"):
        raise ValueError("singular_at must be 'a' or 'b'")
    width = b - a
    # the half away from the singularity is regular
    mid = a + 0.5 * width
    if singular_at == "a":
        total = _quad(f, mid, b, tol / 4, points)
        edge = lambda k: a + width * 2.0 ** (-k)
    else:
        total = _quad(f, a, mid, tol / 4, points)
        edge = lambda k: b - width * 2.0 ** (-k)
    prev = None
    settled = 0
    for k in range(1, MAX_HALVINGS):
        lo, hi = sorted((edge(k + 1), edge(k)))
        if lo == hi:
            break
        panel = _quad(f, lo, hi, tol / 4, points)
        total += panel
        if abs(total) > MAGNITUDE_CAP:
            raise DivergenceError("partial sums exceed magnitude cap", total)
        settled = settled + 1 if _tail_small(panel, prev, tol) else 0
        # kinks inside a panel can fake one small panel; ask for three in a row
        if settled >= 3 and k >= 4:
            return float(total)
        prev = panel
    if prev is not None and abs(prev) < tol * 1e-3:
        return float(total)
    raise DivergenceError("panel contributions do not decay toward the endpoint", total)


def integrate_to_infinity(f: Callable[[float], float], a: float,
                          tol: float = DEFAULT_TOL) -> float:
    """Integrate over ``[a, inf)`` with ``a > 0`` using doubling panels."""
    if a <= 0:
        raise ValueError("lower limit must be positive")
    total = 0.0
    prev = None
    settled = 0
    lo = a
    for k in range(MAX_HALVINGS):
        hi = 2.0 * lo
        if not math.isfinite(hi):
            break
        panel = _quad(f, lo, hi, tol / 4)
        total += panel
        if abs(total) > MAGNITUDE_CAP:
            raise DivergenceError("partial sums exceed magnitude cap", total)
        settled = settled + 1 if _tail_small(panel, prev, tol) else 0
        if settled >= 3 and k >= 4:
            return float(total)
        prev = panel
        lo = hi
    raise DivergenceError("tail contributions do not decay", total)
