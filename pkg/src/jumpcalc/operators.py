"""Pathwise operators on functionals and random fields of configurations.

``transfer`` (add a jump), ``s_integral`` (sum over jumps with the jump
removed), ``psi`` (transfer minus identity), ``ecal`` (integrate against the
jump measure) and ``phi`` (``s_integral - ecal``), plus the x-weighted
variants ``bar_*`` built on ``x**2 nu``.
"""
from __future__ import annotations

import math
import numbers
from typing import Callable, Iterable, Sequence

import numpy as np

from ._quadrature import DEFAULT_TOL
from .canonical import JumpConfiguration, add_point, remove_point, restrict_before
from .measure import JumpMeasure, Region

Point = tuple[float, float]

__all__ = [
    "Functional", "RandomField", "constant", "count", "path_functional", "linear",
    "exp_price", "constant_field", "deterministic_field", "count_before_field",
    "transfer", "psi", "transfer_field", "psi_field", "s_integral", "ecal", "phi",
    "bar_psi", "bar_s", "bar_ecal", "bar_phi", "is_predictable_at",
]


class Functional:
    """Real-valued map of a configuration.

    ``mean`` is an optional closed form ``E[F]`` used when one is known.
    ``times`` lists the time parameters at which ``Psi F`` can jump in ``s``.
    """

    def __init__(self, fn: Callable[[JumpConfiguration], float], name: str = "F",
                 mean: float | None = None, times: Iterable[float] = ()):
        self.fn = fn
        self.name = name
        self.mean = mean
        self.times = tuple(times)

    def __call__(self, w: JumpConfiguration) -> float:
        return self.fn(w)

    def __repr__(self):
        return f"Functional({self.name})"

    def _lift(self, other):
        if isinstance(other, Functional):
            return other
        if isinstance(other, numbers.Real):
            return constant(float(other))
        return NotImplemented

    def __add__(self, other):
        g = self._lift(other)
        if g is NotImplemented:
            return g
        mean = self.mean + g.mean if self.mean is not None and g.mean is not None else None
        return Functional(lambda w: self.fn(w) + g.fn(w), f"({self.name}+{g.name})", mean,
                          self.times + g.times)

    __radd__ = __add__

    def __neg__(self):
        return Functional(lambda w: -self.fn(w), f"-{self.name}",
                          None if self.mean is None else -self.mean, self.times)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, RandomField):
            return other * self
        g = self._lift(other)
        if g is NotImplemented:
            return g
        if isinstance(other, numbers.Real):
            c = float(other)
            return Functional(lambda w: c * self.fn(w), f"{c}*{self.name}",
                              None if self.mean is None else c * self.mean, self.times)
        return Functional(lambda w: self.fn(w) * g.fn(w), f"{self.name}*{g.name}", None,
                          self.times + g.times)

    __rmul__ = __mul__


class RandomField:
    """Map ``(theta, w) -> float`` with ``theta = (s, x)``.

    ``predictable`` marks fields whose value at ``(s, x)`` only sees jumps
    strictly before ``s``. ``extra_times`` lists time discontinuities that
    do not come from the configuration itself; quadrature splits there.
    """

    def __init__(self, fn: Callable[[Point, JumpConfiguration], float],
                 predictable: bool = False, name: str = "u",
                 extra_times: Iterable[float] = ()):
        self.fn = fn
        self.predictable = predictable
        self.name = name
        self.extra_times = tuple(extra_times)

    def __call__(self, theta: Point, w: JumpConfiguration) -> float:
        return self.fn(theta, w)

    def __repr__(self):
        return f"RandomField({self.name}, predictable={self.predictable})"

    def _combine(self, other, op, sym):
        if isinstance(other, numbers.Real):
            c = float(other)
            return RandomField(lambda th, w: op(self.fn(th, w), c), self.predictable,
                               f"({self.name}{sym}{c})", self.extra_times)
        if isinstance(other, Functional):
            g = other.fn
            return RandomField(lambda th, w: op(self.fn(th, w), g(w)), False,
                               f"({self.name}{sym}{other.name})",
                               self.extra_times + other.times)
        if isinstance(other, RandomField):
            g = other.fn
            return RandomField(lambda th, w: op(self.fn(th, w), g(th, w)),
                               self.predictable and other.predictable,
                               f"({self.name}{sym}{other.name})",
                               self.extra_times + other.extra_times)
        return NotImplemented

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b, "+")

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b, "-")

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return RandomField(lambda th, w: -self.fn(th, w), self.predictable,
                           f"-{self.name}", self.extra_times)

    def __mul__(self, other):
        return self._combine(other, lambda a, b: a * b, "*")

    __rmul__ = __mul__

    def restrict(self, r: Region) -> "RandomField":
        """``u * 1_r``."""
        return RandomField(lambda th, w: self.fn(th, w) if r.contains(*th) else 0.0,
                           self.predictable, f"{self.name}|{r}",
                           self.extra_times + (r.t_min, r.t_max))


# --------------------------------------------------------------------------
# catalog


def constant(c: float) -> Functional:
    return Functional(lambda w: c, f"{c}", c)


def count(region: Region | None = None, m: JumpMeasure | None = None) -> Functional:
    """Number of jumps (in ``region`` when given)."""
    mean = m.mass(region) if (m is not None and region is not None) else None
    if region is None:
        return Functional(len, "n", mean)
    return Functional(lambda w: float(sum(1 for p in w.points if region.contains(*p))),
                      f"N[{region}]", mean, (region.t_min, region.t_max))


def path_functional(t: float, m: JumpMeasure, eps: float) -> Functional:
    """The path value ``J_t`` as a functional; its mean integrates the big jumps."""
    comp = m.compensator(t, eps)
    try:
        mean = m.integrate(lambda s, x: x, Region(0.0, t, max(eps, 1.0), math.inf))
    except ArithmeticError:
        mean = None
    return Functional(lambda w: sum(x for s, x in w.points if s <= t) - comp, f"J_{t}", mean,
                      (t,))


def linear(f: Callable[[float, float], float], name: str = "f") -> Functional:
    """``int f dN = sum_i f(s_i, x_i)``."""
    return Functional(lambda w: sum(f(s, x) for s, x in w.points), f"int {name} dN")


def exp_price(s0: float, r: float, m: JumpMeasure, T: float, eps: float = 0.0,
              at: float | None = None) -> Functional:
    """Risk-neutral exponential price ``S_t = s0 exp(r t - H(t) kappa + sum_{s_i <= t} x_i)``.

    ``kappa = int (e^x - 1) rho(dx)`` over ``|x| > eps`` and ``H`` is the
    cumulative time intensity, so ``e^{-rt} S_t`` is a martingale and
    ``E[S_T] = s0 e^{rT}``.
    """
    t = T if at is None else at
    kappa = m.sizes.integrate(math.expm1, eps, math.inf)
    drift = r * t - m.rate.cumulative(t) * kappa
    log_s0 = math.log(s0)

    def fn(w):
        return math.exp(log_s0 + drift + sum(x for s, x in w.points if s <= t))

    F = Functional(fn, f"S_{t}", s0 * math.exp(r * t), (t,))
    F.kappa = kappa
    return F


def constant_field(c: float) -> RandomField:
    return RandomField(lambda th, w: c, True, f"{c}")


def deterministic_field(f: Callable[[float, float], float], name: str = "f") -> RandomField:
    return RandomField(lambda th, w: f(th[0], th[1]), True, name)


def count_before_field() -> RandomField:
    """``(s, x), w -> #{jumps of w strictly before s}`` (predictable)."""
    return RandomField(lambda th, w: float(np.searchsorted(w.times, th[0], side="left")),
                       True, "N[0,s)")


def is_predictable_at(u: RandomField, theta: Point, w: JumpConfiguration) -> bool:
    return u(theta, w) == u(theta, restrict_before(w, theta[0]))


# --------------------------------------------------------------------------
# operators


def transfer(F: Functional) -> RandomField:
    """``(T_theta F)(w) = F(w + theta)``."""
    return RandomField(lambda th, w: F(add_point(w, th)), False, f"T{F.name}", F.times)


def psi(F: Functional) -> RandomField:
    """``Psi_theta F = F(w + theta) - F(w)``."""
    return RandomField(lambda th, w: F(add_point(w, th)) - F(w), False, f"Psi{F.name}",
                       F.times)


def transfer_field(u: RandomField, theta: Point) -> RandomField:
    """The field ``theta', w -> u(theta', w + theta)``."""
    return RandomField(lambda th, w: u(th, add_point(w, theta)), False,
                       f"T_{theta}{u.name}", u.extra_times + (theta[0],))


def psi_field(u: RandomField, theta: Point) -> RandomField:
    """The field ``theta', w -> u(theta', w + theta) - u(theta', w)``."""
    return RandomField(lambda th, w: u(th, add_point(w, theta)) - u(th, w), False,
                       f"Psi_{theta}{u.name}", u.extra_times + (theta[0],))


def s_integral(u: RandomField, w: JumpConfiguration, region: Region | None = None) -> float:
    """``sum_i u(theta_i, w - theta_i)``; zero on the empty configuration."""
    total = 0.0
    for p in w.points:
        if region is None or region.contains(*p):
            total += u(p, remove_point(w, p))
    return total


def _breaks(u: RandomField, w: JumpConfiguration, extra: Sequence[float]) -> list[float]:
    return sorted({*w.times.tolist(), *u.extra_times, *extra})


def ecal(u: RandomField, w: JumpConfiguration, m: JumpMeasure, r: Region,
         tol: float = DEFAULT_TOL, breakpoints: Sequence[float] = (),
         rule: str = "adaptive") -> float:
    """``int_r u(theta, w) nu(d theta)``; raises DivergenceError if it does not settle."""
    return m.integrate(lambda s, x: u((s, x), w), r, tol, _breaks(u, w, breakpoints), rule)


def phi(u: RandomField, w: JumpConfiguration, m: JumpMeasure, r: Region,
        tol: float = DEFAULT_TOL, breakpoints: Sequence[float] = (),
        rule: str = "adaptive") -> float:
    """``s_integral - ecal`` over ``r``."""
    return s_integral(u, w, r) - ecal(u, w, m, r, tol, breakpoints, rule)


def bar_psi(F: Functional) -> RandomField:
    """``(F(w + (s, x)) - F(w)) / x``."""
    return RandomField(lambda th, w: (F(add_point(w, th)) - F(w)) / th[1], False,
                       f"barPsi{F.name}", F.times)


def bar_s(u: RandomField, w: JumpConfiguration, region: Region | None = None) -> float:
    """``sum_i u(theta_i, w - theta_i) x_i``."""
    total = 0.0
    for p in w.points:
        if region is None or region.contains(*p):
            total += u(p, remove_point(w, p)) * p[1]
    return total


def bar_ecal(u: RandomField, w: JumpConfiguration, m: JumpMeasure, r: Region,
             tol: float = DEFAULT_TOL, breakpoints: Sequence[float] = (),
             rule: str = "adaptive") -> float:
    """``int_r u(theta, w) x**2 nu(d theta)``."""
    return m.integrate(lambda s, x: u((s, x), w) * x * x, r, tol, _breaks(u, w, breakpoints),
                       rule)


def bar_phi(u: RandomField, w: JumpConfiguration, m: JumpMeasure, r: Region,
            tol: float = DEFAULT_TOL, breakpoints: Sequence[float] = (),
            rule: str = "adaptive") -> float:
    return bar_s(u, w, r) - bar_ecal(u, w, m, r, tol, breakpoints, rule)
