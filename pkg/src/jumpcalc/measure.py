"""Deterministic jump measures nu(dt, dx) on time x nonzero jump sizes.

Every measure in the catalog has product form ``nu(dt, dx) = h(t) dt rho(dx)``
with an affine time intensity ``h`` and a size law ``rho`` taken from a closed
list (point masses, uniform, normal, tabulated density, symmetric power law).
The closed list is deliberate: each family supports exact sampling and
quadrature that knows where its singularities are.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy import special, stats

from ._quadrature import (DEFAULT_TOL, DivergenceError, integrate_interval,
                          integrate_to_infinity, integrate_to_singularity)


__all__ = [
    "DivergenceError", "InfiniteMassError", "Region", "TimeRate", "SizeLaw",
    "PointMasses", "UniformSizes", "NormalSizes", "TabulatedSizes",
    "StableSizes", "JumpMeasure", "standard_poisson", "compound_poisson",
    "alpha_stable", "product_measure", "measure_from_spec",
    "mass", "sample_point", "integrate", "compensator",
]

INF = math.inf


@functools.lru_cache(maxsize=64)
def _leggauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


@functools.lru_cache(maxsize=64)
def _leggauss_list(n: int) -> tuple[list[float], list[float]]:
    u, w = _leggauss(n)
    return u.tolist(), w.tolist()


class InfiniteMassError(ValueError):
    """The requested region carries infinite nu-mass."""


@dataclass(frozen=True)
class Region:
    """Rectangle ``[t_min, t_max] x {x_inner < |x| <= x_outer}``."""

    t_min: float = 0.0
    t_max: float = 1.0
    x_inner: float = 0.0
    x_outer: float = INF

    def __post_init__(self):
        if not (0.0 <= self.t_min <= self.t_max):
            raise ValueError(f"need 0 <= t_min <= t_max, got {self.t_min}, {self.t_max}")
        if not (0.0 <= self.x_inner <= self.x_outer):
            raise ValueError(f"need 0 <= x_inner <= x_outer, got {self.x_inner}, {self.x_outer}")

    @classmethod
    def theta(cls, T: float, eps: float) -> "Region":
        """The truncation window ``[0, T] x {|x| > eps}``."""
        return cls(0.0, T, eps, INF)

    @property
    def is_empty(self) -> bool:
        return self.t_min == self.t_max or self.x_inner == self.x_outer

    def contains(self, t: float, x: float) -> bool:
        ax = abs(x)
        return (self.t_min <= t <= self.t_max and self.x_inner < ax <= self.x_outer
                and not self.is_empty)

    def intersect(self, other: "Region") -> "Region":
        t0, t1 = max(self.t_min, other.t_min), min(self.t_max, other.t_max)
        x0, x1 = max(self.x_inner, other.x_inner), min(self.x_outer, other.x_outer)
        if t0 > t1 or x0 > x1:
            return Region(t0, t0, x0, x0)
        return Region(t0, t1, x0, x1)

    def disjoint(self, other: "Region") -> bool:
        """True when the overlap has empty interior (nu-null)."""
        return self.intersect(other).is_empty


# --------------------------------------------------------------------------
# time intensity


@dataclass(frozen=True)
class TimeRate:
    """Affine intensity ``h(t) = a + b t`` with ``a, b >= 0``."""

    a: float = 1.0
    b: float = 0.0

    def __post_init__(self):
        if self.a < 0 or self.b < 0 or (self.a == 0 and self.b == 0):
            raise ValueError("time intensity needs a, b >= 0 and not both zero")

    def __call__(self, t):
        return self.a + self.b * np.asarray(t, dtype=float) if np.ndim(t) else self.a + self.b * t

    def cumulative(self, t: float) -> float:
        return self.a * t + 0.5 * self.b * t * t

    def inverse_cumulative(self, y):
        y = np.asarray(y, dtype=float)
        if self.b == 0:
            return y / self.a
        # positive root of b/2 t^2 + a t - y = 0, written to avoid cancellation
        return 2.0 * y / (self.a + np.sqrt(self.a * self.a + 2.0 * self.b * y))

    def to_spec(self) -> dict:
        return {"a": self.a, "b": self.b}


# --------------------------------------------------------------------------
# size laws


class SizeLaw:
    """Measure rho on the nonzero reals, restricted to annuli ``lo < |x| <= hi``."""

    symmetric: bool = False
    infinite_activity: bool = False

    def mass(self, lo: float, hi: float) -> float:
        raise NotImplementedError

    def sample(self, lo: float, hi: float, rng: np.random.Generator, n: int) -> np.ndarray:
        raise NotImplementedError

    def integrate(self, g: Callable[[float], float], lo: float, hi: float,
                  tol: float = DEFAULT_TOL) -> float:
        raise NotImplementedError

    def nodes(self, lo: float, hi: float, n: int) -> tuple[np.ndarray, np.ndarray]:
        """Fixed quadrature rule (nodes, weights) for ``int g d rho`` on the annulus."""
        raise NotImplementedError

    def first_moment(self, lo: float, hi: float, tol: float = DEFAULT_TOL) -> float:
        return self.integrate(lambda x: x, lo, hi, tol)

    def abs_moment(self, p: float, lo: float, hi: float, tol: float = DEFAULT_TOL) -> float:
        return self.integrate(lambda x: abs(x) ** p, lo, hi, tol)

    def to_spec(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class PointMasses(SizeLaw):
    """Finite sum of weighted atoms ``sum_k w_k delta_{v_k}``."""

    values: tuple[float, ...] = (1.0,)
    weights: tuple[float, ...] = (1.0,)

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if len(self.values) != len(self.weights) or not self.values:
            raise ValueError("values and weights must be nonempty and of equal length")
        if any(v == 0 for v in self.values):
            raise ValueError("a jump measure puts no mass on size 0")
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be nonnegative")

    @property
    def symmetric(self) -> bool:
        atoms = dict(zip(self.values, self.weights))
        return all(atoms.get(-v) == w for v, w in atoms.items())

    def _inside(self, lo, hi):
        cache = self.__dict__.setdefault("_cache", {})
        hit = cache.get((lo, hi))
        if hit is None:
            v = np.array(self.values, float)
            w = np.array(self.weights, float)
            keep = (np.abs(v) > lo) & (np.abs(v) <= hi)
            hit = cache[(lo, hi)] = (v[keep], w[keep], np.cumsum(w[keep]))
        return hit[0], hit[1]

    def mass(self, lo, hi):
        return float(self._inside(lo, hi)[1].sum())

    def sample(self, lo, hi, rng, n):
        v, _ = self._inside(lo, hi)
        if not n:
            return np.empty(0)
        if len(v) == 1:
            return np.full(n, v[0])
        cum = self._cache[(lo, hi)][2]
        return v[np.searchsorted(cum, rng.random(n) * cum[-1], side="right")]

    def integrate(self, g, lo, hi, tol=DEFAULT_TOL):
        v, w = self._inside(lo, hi)
        return float(sum(wk * g(float(vk)) for vk, wk in zip(v, w)))

    def nodes(self, lo, hi, n):
        return self._inside(lo, hi)

    def to_spec(self):
        return {"law": "point", "values": list(self.values), "weights": list(self.weights)}


class _ContinuousLaw(SizeLaw):
    """Total mass times a continuous probability law, via its cdf/ppf."""

    total: float = 1.0
    _dist = None

    def _pieces(self, lo, hi):
        # (-hi, -lo] and (lo, hi]; for continuous laws the boundary is null
        return ((-hi, -lo), (lo, hi))

    def _bounds(self, lo, hi) -> np.ndarray:
        # cdf values at the piece ends; frozen scipy calls dominate sampling cost
        cache = self.__dict__.setdefault("_bounds_cache", {})
        key = (lo, hi)
        if key not in cache:
            d = self._dist
            cache[key] = np.array([(float(d.cdf(a)), float(d.cdf(b)))
                                   for a, b in self._pieces(lo, hi)])
        return cache[key]

    def mass(self, lo, hi):
        b = self._bounds(lo, hi)
        return self.total * float(np.maximum(b[:, 1] - b[:, 0], 0.0).sum())

    def sample(self, lo, hi, rng, n):
        bounds = self._bounds(lo, hi)
        probs = np.maximum(bounds[:, 1] - bounds[:, 0], 0.0)
        if probs.sum() <= 0:
            raise InfiniteMassError("annulus carries no mass")
        which = rng.choice(2, size=n, p=probs / probs.sum())
        u = rng.random(n)
        lo_u, hi_u = bounds[which, 0], bounds[which, 1]
        x = self._dist.ppf(lo_u + u * (hi_u - lo_u))
        # guard against ppf rounding onto the excluded inner boundary
        return np.where(np.abs(x) <= lo, np.sign(x) * np.nextafter(lo, INF), x)

    def integrate(self, g, lo, hi, tol=DEFAULT_TOL):
        d = self._dist
        s_lo, s_hi = d.support()
        total = 0.0
        for a, b in self._pieces(lo, hi):
            a, b = max(a, s_lo), min(b, s_hi)
            if a >= b:
                continue
            f = lambda x: g(x) * d.pdf(x)
            if math.isinf(a) or math.isinf(b):
                from scipy import integrate as _si
                val, _ = _si.quad(f, a, b, epsabs=tol, epsrel=1e-12, limit=500)
                if not math.isfinite(val):
                    raise DivergenceError("size integral diverges")
                total += val
            else:
                total += integrate_interval(f, a, b, tol / 2, points=self._kinks(a, b))
        return self.total * float(total)

    def _kinks(self, a, b):
        return None

    def nodes(self, lo, hi, n):
        d = self._dist
        u, w = _leggauss(n)
        xs, ws = [], []
        for a, b in self._pieces(lo, hi):
            fa, fb = d.cdf(a), d.cdf(b)
            if fb <= fa:
                continue
            q = fa + (fb - fa) * (u + 1) / 2
            xs.append(d.ppf(q))
            ws.append(w * (fb - fa) / 2)
        if not xs:
            return np.empty(0), np.empty(0)
        return np.concatenate(xs), self.total * np.concatenate(ws)


@dataclass(frozen=True)
class UniformSizes(_ContinuousLaw):
    low: float = 0.0
    high: float = 1.0
    total: float = 1.0

    def __post_init__(self):
        if not self.low < self.high:
            raise ValueError("need low < high")

    @functools.cached_property
    def _dist(self):
        return stats.uniform(loc=self.low, scale=self.high - self.low)

    @property
    def symmetric(self):
        return self.low == -self.high

    def first_moment(self, lo, hi, tol=DEFAULT_TOL):
        dens = self.total / (self.high - self.low)
        out = 0.0
        for a, b in self._pieces(lo, hi):
            a, b = max(a, self.low), min(b, self.high)
            if a < b:
                out += 0.5 * (b * b - a * a)
        return dens * out

    def to_spec(self):
        return {"law": "uniform", "low": self.low, "high": self.high, "total": self.total}


@dataclass(frozen=True)
class NormalSizes(_ContinuousLaw):
    mu: float = 0.0
    sd: float = 1.0
    total: float = 1.0

    def __post_init__(self):
        if self.sd <= 0:
            raise ValueError("sd must be positive")

    @functools.cached_property
    def _dist(self):
        return stats.norm(loc=self.mu, scale=self.sd)

    @property
    def symmetric(self):
        return self.mu == 0.0

    def to_spec(self):
        return {"law": "normal", "mu": self.mu, "sd": self.sd, "total": self.total}


class _Tabulated(stats.rv_continuous):
    def __init__(self, edges, probs):
        super().__init__(a=edges[0], b=edges[-1])
        self._edges = np.asarray(edges, float)
        self._cum = np.concatenate([[0.0], np.cumsum(probs)])
        self._dens = np.asarray(probs) / np.diff(self._edges)

    def _pdf(self, x):
        k = np.clip(np.searchsorted(self._edges, x, side="right") - 1, 0, len(self._dens) - 1)
        return self._dens[k]

    def _cdf(self, x):
        return np.interp(x, self._edges, self._cum)

    def _ppf(self, q):
        return np.interp(q, self._cum, self._edges)


@dataclass(frozen=True)
class TabulatedSizes(_ContinuousLaw):
    """Piecewise-constant density given by bin ``edges`` and bin ``density`` values."""

    edges: tuple[float, ...] = (0.0, 1.0)
    density: tuple[float, ...] = (1.0,)

    def __post_init__(self):
        e = np.asarray(self.edges, float)
        d = np.asarray(self.density, float)
        if len(e) != len(d) + 1 or np.any(np.diff(e) <= 0) or np.any(d < 0) or d.sum() == 0:
            raise ValueError("tabulated density needs increasing edges and nonnegative bins")
        object.__setattr__(self, "edges", tuple(e))
        object.__setattr__(self, "density", tuple(d))

    @property
    def total(self):
        return float(np.sum(np.diff(self.edges) * np.asarray(self.density)))

    @functools.cached_property
    def _dist(self):
        probs = np.diff(self.edges) * np.asarray(self.density) / self.total
        return _Tabulated(self.edges, probs)

    @property
    def symmetric(self):
        e, d = np.asarray(self.edges), np.asarray(self.density)
        return bool(np.allclose(e, -e[::-1], rtol=0, atol=0) and np.all(d == d[::-1]))

    def _kinks(self, a, b):
        return [e for e in self.edges if a < e < b]

    def to_spec(self):
        return {"law": "tabulated", "edges": list(self.edges), "density": list(self.density)}


@dataclass(frozen=True)
class StableSizes(SizeLaw):
    """Symmetric power law ``c |x|^(-1-alpha) dx``, ``0 < alpha < 2``.

    ``c`` is the literal density coefficient, not a normalised stable scale.
    Sampling and quadrature work in the coordinate ``y = |x|^(-alpha)`` in
    which each half-line carries the flat density ``c / alpha``.
    """

    c: float = 1.0
    alpha: float = 0.5
    symmetric = True
    infinite_activity = True

    def __post_init__(self):
        if not (0 < self.alpha < 2) or self.c <= 0:
            raise ValueError("need c > 0 and 0 < alpha < 2")

    def _y(self, x):
        return 0.0 if math.isinf(x) else (INF if x == 0 else x ** -self.alpha)

    def mass(self, lo, hi):
        if lo == 0 and hi > 0:
            raise InfiniteMassError("power-law measure has infinite mass near 0; use x_inner > 0")
        return 2.0 * self.c / self.alpha * (self._y(lo) - self._y(hi))

    def sample(self, lo, hi, rng, n):
        if lo == 0:
            raise InfiniteMassError("cannot sample an infinite-mass annulus")
        y = self._y(hi) + rng.random(n) * (self._y(lo) - self._y(hi))
        x = y ** (-1.0 / self.alpha)
        return np.where(rng.random(n) < 0.5, -x, x)

    def integrate(self, g, lo, hi, tol=DEFAULT_TOL):
        a, b = self._y(hi), self._y(lo)
        if a == b:
            return 0.0
        inv = -1.0 / self.alpha
        f = lambda y: g(y ** inv) + g(-(y ** inv))
        k = self.c / self.alpha
        if math.isinf(b):
            split = max(a, 1.0)
            head = 0.0
            if a < split:
                head = (integrate_to_singularity(f, a, split, "a", tol / 2 / k)
                        if a == 0 else integrate_interval(f, a, split, tol / 2 / k))
            return k * (head + integrate_to_infinity(f, split, tol / 2 / k))
        if a == 0:
            return k * integrate_to_singularity(f, a, b, "a", tol / k)
        return k * integrate_interval(f, a, b, tol / k)

    def nodes(self, lo, hi, n):
        if lo == 0:
            raise InfiniteMassError("no finite rule on an infinite-mass annulus")
        a, b = self._y(hi), self._y(lo)
        u, w = _leggauss(n)
        y = a + (b - a) * (u + 1) / 2
        x = y ** (-1.0 / self.alpha)
        ww = w * (b - a) / 2 * self.c / self.alpha
        return np.concatenate([-x[::-1], x]), np.concatenate([ww[::-1], ww])

    def first_moment(self, lo, hi, tol=DEFAULT_TOL):
        if lo == 0:
            raise InfiniteMassError("compensator needs a positive truncation for infinite activity")
        return 0.0

    def abs_moment(self, p, lo, hi, tol=DEFAULT_TOL):
        """``int |x|^p`` over the annulus, by exponent analysis."""
        q = p - self.alpha
        if lo == 0 and q <= 0:
            raise DivergenceError(f"|x|^{p} is not integrable at 0 (alpha={self.alpha})")
        if math.isinf(hi) and q >= 0:
            raise DivergenceError(f"|x|^{p} is not integrable at infinity (alpha={self.alpha})")
        if q == 0:
            return 2 * self.c * math.log(hi / lo)
        top = 0.0 if math.isinf(hi) else hi ** q
        bot = 0.0 if lo == 0 else lo ** q
        return 2 * self.c * (top - bot) / q

    def to_spec(self):
        return {"law": "stable", "c": self.c, "alpha": self.alpha}


# --------------------------------------------------------------------------
# the measure


@dataclass(frozen=True)
class JumpMeasure:
    """``nu(dt, dx) = h(t) dt rho(dx)`` with a catalog kind tag."""

    kind: str
    rate: TimeRate = field(default_factory=TimeRate)
    sizes: SizeLaw = field(default_factory=PointMasses)

    KINDS = ("standard-poisson", "compound-poisson", "alpha-stable", "product")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown measure kind {self.kind!r}")
        if self.kind == "alpha-stable" and not isinstance(self.sizes, StableSizes):
            raise ValueError("alpha-stable measures need StableSizes")
        if self.kind != "alpha-stable" and isinstance(self.sizes, StableSizes):
            raise ValueError("power-law sizes only under kind 'alpha-stable'")

    @property
    def infinite_activity(self) -> bool:
        return self.sizes.infinite_activity

    @property
    def symmetric(self) -> bool:
        return self.sizes.symmetric

    def _time_mass(self, r: Region) -> float:
        return self.rate.cumulative(r.t_max) - self.rate.cumulative(r.t_min)

    def mass(self, r: Region) -> float:
        if r.is_empty:
            return 0.0
        if self.infinite_activity and r.x_inner == 0:
            raise InfiniteMassError(f"{self.kind} measure has infinite mass on {r}")
        return self._time_mass(r) * self.sizes.mass(r.x_inner, r.x_outer)

    def sample_times(self, r: Region, rng: np.random.Generator, n: int) -> np.ndarray:
        h0 = self.rate.cumulative(r.t_min)
        y = h0 + rng.random(n) * self._time_mass(r)
        return np.clip(self.rate.inverse_cumulative(y), r.t_min, r.t_max)

    def sample_points(self, r: Region, rng: np.random.Generator, n: int):
        """``n`` i.i.d. draws from ``nu`` restricted to ``r`` and normalised."""
        m = self.mass(r)
        if not (0 < m < INF):
            raise InfiniteMassError(f"cannot sample: mass {m} on {r}")
        t = self.sample_times(r, rng, n)
        x = self.sizes.sample(r.x_inner, r.x_outer, rng, n)
        return t, x

    def sample_point(self, r: Region, rng: np.random.Generator) -> tuple[float, float]:
        t, x = self.sample_points(r, rng, 1)
        return float(t[0]), float(x[0])

    def integrate(self, f: Callable[[float, float], float], r: Region,
                  tol: float = DEFAULT_TOL,
                  time_points: Sequence[float] | None = None,
                  rule: str = "adaptive") -> float:
        """``int_r f(t, x) nu(dt, dx)`` by adaptive quadrature.

        ``time_points`` are known discontinuities of ``f`` in time (typically
        the jump times of a configuration). Raises :class:`DivergenceError`
        when the integral does not settle.

        ``rule="gauss"`` uses the fixed tensor rule of :meth:`quadrature_grid`
        instead: 4 Gauss nodes per time panel, exact for integrands that are
        polynomial of degree <= 7 in time between ``time_points`` when the
        size law is atomic.
        """
        if r.is_empty:
            return 0.0
        if rule == "gauss":
            return self._gauss(f, r, time_points or ())
        if rule != "adaptive":
            raise ValueError(f"unknown rule {rule!r}")
        lo, hi = r.x_inner, r.x_outer
        span = r.t_max - r.t_min
        if isinstance(self.sizes, PointMasses):
            v, w = self.sizes.nodes(lo, hi, 0)
            total = 0.0
            for vk, wk in zip(v, w):
                g = lambda t, vk=float(vk): self.rate(t) * f(t, vk)
                total += wk * integrate_interval(g, r.t_min, r.t_max, tol / max(len(v), 1),
                                                 points=time_points)
            return total
        inner_tol = tol / (4 * max(span * self.rate(r.t_max), 1.0))
        outer = lambda t: self.rate(t) * self.sizes.integrate(lambda x: f(t, x), lo, hi, inner_tol)
        return integrate_interval(outer, r.t_min, r.t_max, tol / 2, points=time_points)

    def _gauss(self, f, r: Region, time_points: Sequence[float], n_time: int = 4) -> float:
        # plain floats: these grids are tiny and numpy call overhead dominates
        xs, xw = self.sizes.nodes(r.x_inner, r.x_outer, 16)
        xs, xw = xs.tolist(), xw.tolist()
        u, uw = _leggauss_list(n_time)
        cuts = sorted({r.t_min, r.t_max, *(p for p in time_points if r.t_min < p < r.t_max)})
        h = self.rate
        total = []
        for a, b in zip(cuts[:-1], cuts[1:]):
            half = (b - a) / 2
            for uk, wk in zip(u, uw):
                t = a + half * (uk + 1)
                wt = half * wk * (h.a + h.b * t)
                total.extend(wt * wx * f(t, x) for x, wx in zip(xs, xw))
        return math.fsum(total)

    def quadrature_grid(self, r: Region, n_time: int = 8, n_size: int = 16,
                        time_points: Sequence[float] = ()):
        """Tensor Gauss rule on ``r`` as ``(t, x, W)`` with ``W[i, j]`` the weight of ``(t[i], x[j])``.

        Time panels are split at ``time_points`` so that integrands which are
        smooth between jump times are integrated to high order.
        """
        if r.is_empty:
            return np.empty(0), np.empty(0), np.empty((0, 0))
        xs, xw = self.sizes.nodes(r.x_inner, r.x_outer, n_size)
        u, uw = _leggauss(n_time)
        inner = [p for p in time_points if r.t_min < p < r.t_max]
        cuts = np.unique(np.array([r.t_min, r.t_max, *inner], float))
        a, half = cuts[:-1, None], np.diff(cuts)[:, None] / 2
        t = (a + half * (u + 1)).ravel()
        tw = (half * uw).ravel() * self.rate(t)
        return t, np.asarray(xs, float), tw[:, None] * np.asarray(xw, float)[None, :]

    def quadrature(self, r: Region, n_time: int = 8, n_size: int = 16,
                   time_points: Sequence[float] = ()):
        """Flattened tensor rule: arrays ``(t, x, w)``."""
        t, x, W = self.quadrature_grid(r, n_time, n_size, time_points)
        T, X = np.meshgrid(t, x, indexing="ij")
        return T.ravel(), X.ravel(), W.ravel()

    def compensator(self, t: float, eps: float, tol: float = DEFAULT_TOL) -> float:
        """``c_eps(t) = int_0^t int_{eps < |x| <= 1} x nu(ds, dx)``."""
        if eps < 0:
            raise ValueError("eps must be nonnegative")
        if self.infinite_activity and eps == 0:
            raise InfiniteMassError("compensator needs eps > 0 under infinite activity")
        if eps >= 1 or t <= 0:
            return 0.0
        value = self.rate.cumulative(t) * self.sizes.first_moment(eps, 1.0, tol)
        assert abs(value) <= self.mass(Region(0.0, t, eps, 1.0)) + 10 * tol
        return float(value)

    def to_spec(self) -> dict:
        return {"kind": self.kind, "rate": self.rate.to_spec(), "sizes": self.sizes.to_spec()}


def standard_poisson(rate: float = 1.0) -> JumpMeasure:
    """``nu(dt, dx) = rate dt delta_1(dx)``."""
    return JumpMeasure("standard-poisson", TimeRate(rate), PointMasses((1.0,), (1.0,)))


def compound_poisson(sizes: SizeLaw, rate: float | TimeRate = 1.0) -> JumpMeasure:
    r = rate if isinstance(rate, TimeRate) else TimeRate(rate)
    return JumpMeasure("compound-poisson", r, sizes)


def alpha_stable(c: float, alpha: float, rate: TimeRate | None = None) -> JumpMeasure:
    return JumpMeasure("alpha-stable", rate or TimeRate(), StableSizes(c, alpha))


def product_measure(rate: TimeRate, edges: Sequence[float], density: Sequence[float]) -> JumpMeasure:
    return JumpMeasure("product", rate, TabulatedSizes(tuple(edges), tuple(density)))


def _sizes_from_spec(spec: Mapping) -> SizeLaw:
    spec = dict(spec)
    law = spec.pop("law")
    if law == "point":
        return PointMasses(tuple(spec["values"]), tuple(spec.get("weights", [1.0] * len(spec["values"]))))
    if law == "uniform":
        return UniformSizes(**spec)
    if law == "normal":
        return NormalSizes(**spec)
    if law == "tabulated":
        return TabulatedSizes(tuple(spec["edges"]), tuple(spec["density"]))
    raise ValueError(f"unknown size law {law!r}")


def _rate_from_spec(value) -> TimeRate:
    if value is None:
        return TimeRate()
    if isinstance(value, Mapping):
        return TimeRate(float(value.get("a", 1.0)), float(value.get("b", 0.0)))
    return TimeRate(float(value))


def measure_from_spec(spec: Mapping) -> JumpMeasure:
    """Build a measure from a tagged record such as ``{kind: alpha-stable, c: 1, alpha: 0.5}``."""
    kind = spec.get("kind")
    rate = _rate_from_spec(spec.get("rate"))
    if kind == "standard-poisson":
        return JumpMeasure(kind, rate, PointMasses((1.0,), (1.0,)))
    if kind == "compound-poisson":
        return JumpMeasure(kind, rate, _sizes_from_spec(spec.get("sizes", {"law": "point", "values": [1.0]})))
    if kind == "alpha-stable":
        return JumpMeasure(kind, rate, StableSizes(float(spec.get("c", 1.0)), float(spec["alpha"])))
    if kind == "product":
        return JumpMeasure(kind, rate, TabulatedSizes(tuple(spec["edges"]), tuple(spec["density"])))
    raise ValueError(f"unknown measure kind {kind!r}")


# functional spellings


def mass(m: JumpMeasure, r: Region) -> float:
    return m.mass(r)


def sample_point(m: JumpMeasure, r: Region, rng: np.random.Generator) -> tuple[float, float]:
    return m.sample_point(r, rng)


def integrate(m: JumpMeasure, f: Callable[[float, float], float], r: Region,
              tol: float = DEFAULT_TOL, time_points: Sequence[float] | None = None,
              rule: str = "adaptive") -> float:
    return m.integrate(f, r, tol, time_points, rule)


def compensator(m: JumpMeasure, t: float, eps: float, tol: float = DEFAULT_TOL) -> float:
    return m.compensator(t, eps, tol)
