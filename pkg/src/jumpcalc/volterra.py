"""Anticipative integration against jump-driven Volterra processes.

``X(t) = int_0^t g(t, s) sigma(s) dJ(s)`` with a gamma kernel
``g(t, s) = (t - s)^(beta - 1) exp(-lam (t - s))``. The integral of ``Y``
against the small-jump part of ``X`` is assembled from the kernel transform

    K_g(Y)(t, s) = Y(s) g(t, s) + int_s^t (Y(u) - Y(s)) g(du, s)

and the pathwise operators: ``Phi(x K sigma) + Phi(x Psi K sigma) + E(x Psi K sigma)``
over ``[0, t] x {eps < |x| <= 1}``.

Kernel endpoint singularities are removed by substituting ``v = (u - s)^beta``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import special

from ._quadrature import (DEFAULT_TOL, DivergenceError, integrate_interval,
                          integrate_to_singularity)
from .canonical import JumpConfiguration, add_point, remove_point, restrict_before
from .measure import JumpMeasure, Region, StableSizes, alpha_stable
from .operators import Functional, RandomField, deterministic_field, phi

__all__ = [
    "VolterraKernel", "gamma_kernel", "power_kernel", "VmavSpec", "PathProcess",
    "ConstantProcess", "TimeProcess", "StepProcess", "NestedVmav",
    "kg_operator", "kg_functional", "kg_nested_expansion", "psi_kg_closed_form",
    "VmavIntegral", "vmav_integral", "vmav_process", "big_jump_component",
    "HypothesisStatus", "hypotheses_check", "case_classify", "case_number", "BetaBoundReport",
    "beta_bound_check", "integral_toward", "field_norm", "domain_l1_check",
    "l2_check", "integrability_witness", "default_truncation",
]


# --------------------------------------------------------------------------
# kernels


@dataclass(frozen=True)
class VolterraKernel:
    """``g(t, s) = scale (t - s)^(beta - 1) e^(-lam (t - s))`` for ``s < t``, else 0."""

    beta: float
    lam: float = 0.0
    scale: float = 1.0
    family: str = "gamma"

    def __post_init__(self):
        if not 0 < self.beta <= 1:
            raise ValueError("beta must lie in (0, 1]")
        if self.lam < 0:
            raise ValueError("lam must be nonnegative")
        if self.family not in ("gamma", "power"):
            raise ValueError(f"unknown kernel family {self.family!r}")
        if self.family == "power" and self.lam != 0:
            raise ValueError("power kernels have lam = 0")

    def __call__(self, t: float, s: float) -> float:
        return self.at(t - s)

    def at(self, d: float) -> float:
        """Kernel as a function of the lag ``d = t - s``."""
        if d <= 0 or self.scale == 0:
            return 0.0
        return self.scale * d ** (self.beta - 1) * math.exp(-self.lam * d)

    def density(self, u: float, s: float) -> float:
        """Lebesgue density of the measure ``g(du, s)`` at ``u > s``."""
        return self.density_at(u - s)

    def density_at(self, d: float) -> float:
        if d <= 0:
            return 0.0
        return -self.at(d) * ((1 - self.beta) / d + self.lam)

    def integral(self, t: float) -> float:
        """``int_0^t g(t, s) ds`` in closed form."""
        if t <= 0 or self.scale == 0:
            return 0.0
        b = self.beta
        if self.lam == 0:
            return self.scale * t ** b / b
        return self.scale * special.gamma(b) * special.gammainc(b, self.lam * t) / self.lam ** b


def gamma_kernel(beta: float, lam: float = 0.0) -> VolterraKernel:
    return VolterraKernel(beta, lam)


def power_kernel(beta: float) -> VolterraKernel:
    return VolterraKernel(beta, 0.0, family="power")


def integral_toward(f: Callable[[float], float], a: float, b: float, beta: float,
                    tol: float = DEFAULT_TOL, breakpoints: Sequence[float] = (),
                    end: str = "b", lag: bool = False) -> float:
    """``int_a^b f`` for ``f`` with a ``|end - .|^(beta - 1)``-type singularity at ``end``.

    Uses ``v = |end - .|^beta`` and geometric panels toward ``v = 0``, so a
    genuinely non-integrable endpoint raises :class:`DivergenceError`. With
    ``lag=True`` the integrand is called as ``f(x, d)`` where ``d = |end - x|``
    is exact; near the endpoint ``x`` itself rounds onto ``end``.
    """
    if b <= a:
        return 0.0
    inv = 1.0 / beta
    if end == "b":
        to_x = lambda v: b - v ** inv
        vmax = (b - a) ** beta
        vb = [(b - p) ** beta for p in breakpoints if a < p < b]
    else:
        to_x = lambda v: a + v ** inv
        vmax = (b - a) ** beta
        vb = [(p - a) ** beta for p in breakpoints if a < p < b]
    jac = lambda v: inv * v ** (inv - 1) if v > 0 else (0.0 if inv > 1 else inv)

    def g(v):
        if lag:
            return f(to_x(v), v ** inv) * jac(v)
        return f(to_x(v)) * jac(v)

    return integrate_to_singularity(g, 0.0, vmax, "a", tol, points=vb)


# --------------------------------------------------------------------------
# integrands Y


class PathProcess:
    """A process ``Y(u)`` evaluated along a configuration.

    Subclasses whose response to an added small jump ``(s, x)`` is
    ``Y(s + d) -> Y(s + d) + x r(d)``, whatever the path, may define
    ``jump_response(d) = r(d)``; the compensator term then reduces to a
    single time integral.
    """

    predictable = True
    jump_response = None

    def __call__(self, u: float, w: JumpConfiguration) -> float:
        raise NotImplementedError

    def increment(self, s: float, d: float, w: JumpConfiguration) -> float:
        """``Y(s + d) - Y(s)``; override when plain subtraction cancels badly."""
        return self(s + d, w) - self(s, w)

    def breakpoints(self, w: JumpConfiguration) -> list[float]:
        return w.times.tolist()


@dataclass
class ConstantProcess(PathProcess):
    c: float = 1.0

    def __call__(self, u, w):
        return self.c

    def increment(self, s, d, w):
        return 0.0

    def jump_response(self, d):
        return 0.0

    def breakpoints(self, w):
        return []


class TimeProcess(PathProcess):
    """``Y(u) = u``."""

    def __call__(self, u, w):
        return u

    def increment(self, s, d, w):
        return d

    def jump_response(self, d):
        return 0.0

    def breakpoints(self, w):
        return []


@dataclass
class StepProcess(PathProcess):
    """``Y(u) = Z_k(w before a_k)`` on ``(a_k, a_{k+1}]``; zero outside ``(a_0, a_K]``.

    Each ``Z_k`` sees only jumps strictly before its knot, so ``Y`` is predictable.
    """

    knots: Sequence[float]
    values: Sequence[Functional]

    def __post_init__(self):
        if len(self.values) != len(self.knots) - 1:
            raise ValueError("need one value per step")
        if any(b <= a for a, b in zip(self.knots[:-1], self.knots[1:])):
            raise ValueError("knots must increase")

    def __call__(self, u, w):
        k = int(np.searchsorted(self.knots, u, side="left")) - 1
        if k < 0 or k >= len(self.values):
            return 0.0
        return self.values[k](restrict_before(w, self.knots[k]))

    def breakpoints(self, w):
        return list(self.knots)


@dataclass
class NestedVmav(PathProcess):
    """``Y(s) = sum_{s_i < s, |x_i| <= 1} (s - s_i)^gamma x_i - compensator``.

    The compensator integrates ``(s - v)^gamma x`` against ``nu`` over
    ``[0, s) x {eps < |x| <= 1}``; it vanishes for symmetric drivers.
    """

    driver: JumpMeasure
    gamma: float
    eps: float

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        self._m1 = 0.0 if self.driver.symmetric else self.driver.sizes.first_moment(self.eps, 1.0)

    def phi(self, y: float) -> float:
        return y ** self.gamma if y > 0 else 0.0

    def jump_response(self, d: float) -> float:
        return self.phi(d)

    def phi_step(self, y: float, d: float) -> float:
        """``phi(y + d) - phi(y)`` without cancellation."""
        if y <= 0:
            return self.phi(y + d)
        return y ** self.gamma * math.expm1(self.gamma * math.log1p(d / y))

    def _comp_terms(self):
        # int_0^s (s - v)^gamma (a + b v) dv = sum_k c_k s^{p_k}
        g, h = self.gamma, self.driver.rate
        return ((h.a / (g + 1), g + 1), (h.b / ((g + 1) * (g + 2)), g + 2))

    def compensator(self, s: float) -> float:
        if self._m1 == 0.0 or s <= 0:
            return 0.0
        return self._m1 * sum(c * s ** p for c, p in self._comp_terms())

    def _compensator_step(self, s: float, d: float) -> float:
        if s <= 0:
            return self.compensator(d)
        r = math.log1p(d / s)
        return self._m1 * sum(c * s ** p * math.expm1(p * r) for c, p in self._comp_terms())

    def _small(self, w):
        t, x = w.times, w.sizes
        keep = np.abs(x) <= 1.0
        return t[keep], x[keep]

    def __call__(self, s, w):
        t, x = self._small(w)
        before = t < s
        jumps = float(np.dot((s - t[before]) ** self.gamma, x[before]))
        return jumps - self.compensator(s)

    def increment(self, s, d, w):
        t, x = self._small(w)
        before = t < s
        y = s - t[before]
        jumps = float(np.dot(y ** self.gamma * np.expm1(self.gamma * np.log1p(d / y)), x[before]))
        # lags are exact; s + d - t would lose d to rounding when t == s
        lag = t[~before] - s
        inside = lag < d
        jumps += float(np.dot((d - lag[inside]) ** self.gamma, x[~before][inside]))
        if self._m1 == 0.0:
            return jumps
        return jumps - self._compensator_step(s, d)


# --------------------------------------------------------------------------
# the kernel transform


def kg_operator(kernel: VolterraKernel, Y: PathProcess, t: float, s: float,
                w: JumpConfiguration, tol: float = 1e-10, lag: float | None = None) -> float:
    """``K_g(Y)(t, s)`` along the path ``w``.

    The Stieltjes part is integrated against the closed-form density of
    ``g(du, s)`` in the variable ``v = (u - s)^beta``. ``lag`` overrides
    ``t - s`` when ``s`` is too close to ``t`` to resolve in floating point.
    """
    d = t - s if lag is None else lag
    if not d > 0:
        raise ValueError("K_g(Y)(t, s) needs s < t")
    if kernel.scale == 0:
        return 0.0
    boundary = Y(s, w) * kernel.at(d)
    f = lambda u, e: Y.increment(s, e, w) * kernel.density_at(e)
    try:
        stieltjes = integral_toward(f, s, s + d, kernel.beta, tol, Y.breakpoints(w),
                                    end="a", lag=True)
    except DivergenceError as exc:
        raise DivergenceError(
            f"Y(u) - Y(s) is not integrable against g(du, s) on ({s}, {t}] "
            f"(pathwise Stieltjes hypothesis fails): {exc}") from None
    return boundary + stieltjes


def kg_functional(kernel: VolterraKernel, Y: PathProcess, t: float, s: float,
                  tol: float = 1e-10) -> Functional:
    """``w -> K_g(Y)(t, s)(w)`` as a functional, ready for ``operators.psi``."""
    return Functional(lambda w: kg_operator(kernel, Y, t, s, w, tol), f"K_g(Y)({t},{s})")


def kg_nested_expansion(kernel: VolterraKernel, Y: NestedVmav, t: float, s: float,
                        w: JumpConfiguration, tol: float = 1e-10) -> float:
    """``K_g(Y)(t, s)`` for the nested process, rewritten through ``Phi`` of deterministic fields.

    Independent route to :func:`kg_operator`: three ``Phi`` terms of
    deterministic integrands over ``{eps < |x| <= 1}``.
    """
    m, eps, ph = Y.driver, Y.eps, Y.phi
    sub = lambda a, b: Region(a, b, eps, 1.0)

    def phi_det(f, r):
        u = deterministic_field(f)
        return phi(u, w, m, r, tol) if not r.is_empty else 0.0

    first = kernel.at(t - s) * phi_det(lambda v, x: ph(s - v) * x, sub(0.0, s))

    def middle(u, d):
        return -kernel.density_at(d) * phi_det(lambda v, x: ph(u - v) * x, sub(s, u))

    def last(u, d):
        return -kernel.density_at(d) * phi_det(lambda v, x: (ph(u - v) - ph(s - v)) * x, sub(0.0, s))

    pts = w.times.tolist()
    second = integral_toward(middle, s, t, kernel.beta, tol * 10, pts, end="a", lag=True)
    third = integral_toward(last, s, t, kernel.beta, tol * 10, pts, end="a", lag=True)
    return first - second - third


def psi_kg_closed_form(kernel: VolterraKernel, gamma: float, t: float, s: float, x: float,
                       tol: float = 1e-10) -> float:
    """``Psi_{s,x} K_g(Y)(t, s)`` for the nested process with ``phi(y) = y^gamma``.

    Equals ``-x 1_{|x| <= 1} int_s^t g(u, s) (u - s)^gamma ((1 - beta)/(u - s) + lam) du``;
    the integral converges only when ``beta + gamma > 1``.
    """
    if abs(x) > 1.0 or not s < t:
        return 0.0
    f = lambda u, d: -kernel.density_at(d) * d ** gamma
    return -x * integral_toward(f, s, t, kernel.beta, tol, end="a", lag=True)


# --------------------------------------------------------------------------
# the integral


@dataclass
class VmavSpec:
    """Driver, kernel and deterministic volatility ``sigma(s)``; ``drift`` is ``dGamma/ds``."""

    driver: JumpMeasure
    kernel: VolterraKernel
    sigma: Callable[[float], float] = field(default=lambda s: 1.0)
    drift: float = 0.0


@dataclass
class VmavIntegral:
    phi_main: float
    phi_correction: float
    ecal_correction: float

    @property
    def total(self) -> float:
        return self.phi_main + self.phi_correction + self.ecal_correction


def _small_region(t: float, eps: float) -> Region:
    return Region(0.0, t, eps, 1.0)


def vmav_integral(spec: VmavSpec, Y: PathProcess, t: float, w: JumpConfiguration,
                  eps: float, tol: float = 1e-9) -> VmavIntegral:
    """Integral of ``Y`` against the small-jump part of ``X`` on ``[0, t]``.

    Sum of ``Phi(x K sigma)``, ``Phi(x Psi K sigma)`` and ``E(x Psi K sigma)``
    over ``[0, t] x {eps < |x| <= 1}``, with ``K = K_g(Y)(t, .)``.
    """
    m, kern, sig = spec.driver, spec.kernel, spec.sigma
    R = _small_region(t, eps)
    ktol = tol / 10
    K = lambda s, om, d=None: kg_operator(kern, Y, t, s, om, ktol, d) * sig(s)
    pts = sorted({*w.times.tolist(), *Y.breakpoints(w)})

    inside = [p for p in w.points if R.contains(*p) and p[0] < t]
    s_main = sum(x * K(s, remove_point(w, (s, x))) for s, x in inside)
    s_corr = sum(x * (K(s, w) - K(s, remove_point(w, (s, x)))) for s, x in inside)

    m1 = m.sizes.first_moment(eps, 1.0) if not m.symmetric else 0.0
    e_main = 0.0
    if m1 != 0.0:
        e_main = m1 * integral_toward(lambda s, d: m.rate(s) * K(s, w, d), 0.0, t, kern.beta,
                                    tol, pts, lag=True)

    if Y.jump_response is not None:
        # Psi_{s,x} K(t, s) = x kappa(s): a time integral times the second size moment
        m2 = m.sizes.abs_moment(2.0, eps, 1.0, tol)

        def kappa(s, d):
            f = lambda u, e: Y.jump_response(e) * kern.density_at(e)
            return integral_toward(f, s, s + d, kern.beta, ktol, end="a", lag=True)

        e_corr = m2 * integral_toward(lambda s, d: m.rate(s) * sig(s) * kappa(s, d),
                                      0.0, t, kern.beta, tol, lag=True)
    else:
        def dK(s, x):
            if s >= t:
                return 0.0
            return x * (K(s, add_point(w, (s, x))) - K(s, w))

        e_corr = m.integrate(dK, R, tol, time_points=pts)
    return VmavIntegral(s_main - e_main, s_corr - e_corr, e_corr)


def vmav_process(spec: VmavSpec, t: float, w: JumpConfiguration, eps: float,
                 tol: float = 1e-10) -> float:
    """Small-jump part of ``X(t)``: compensated sum of ``g(t, s) sigma(s) x``."""
    m, kern, sig = spec.driver, spec.kernel, spec.sigma
    R = _small_region(t, eps)
    jumps = sum(kern(t, s) * sig(s) * x for s, x in w.points if R.contains(s, x))
    m1 = m.sizes.first_moment(eps, 1.0) if not m.symmetric else 0.0
    if m1 == 0.0:
        return jumps
    comp = integral_toward(lambda s, d: m.rate(s) * kern.at(d) * sig(s), 0.0, t, kern.beta,
                           tol, lag=True)
    return jumps - m1 * comp


def big_jump_component(spec: VmavSpec, t: float, w: JumpConfiguration) -> float:
    """``sum_i g(t, s_i) sigma(s_i) x_i`` over jumps with ``|x_i| > 1``."""
    return sum(spec.kernel(t, s) * spec.sigma(s) * x for s, x in w.points
               if abs(x) > 1.0 and s < t)


# --------------------------------------------------------------------------
# hypotheses and the case table


@dataclass(frozen=True)
class HypothesisStatus:
    status: str  # finite | divergent | inconclusive
    value: float = math.nan

    @property
    def finite(self) -> bool:
        return self.status == "finite"


def _status(thunk) -> HypothesisStatus:
    try:
        return HypothesisStatus("finite", float(thunk()))
    except DivergenceError:
        return HypothesisStatus("divergent")


def hypotheses_check(spec: VmavSpec, t: float, tol: float = 1e-9) -> dict[str, HypothesisStatus]:
    """Evaluate the three well-posedness integrals of ``X(t)`` (deterministic sigma).

    Power-law drivers are decided by exponent analysis first; the value is
    then computed by singular quadrature. Other drivers go straight to
    quadrature.
    """
    m, kern, sig = spec.driver, spec.kernel, spec.sigma
    if kern.scale == 0:
        zero = HypothesisStatus("finite", 0.0)
        return {"H1": zero, "H2": zero, "H3": zero}
    a = lambda s, d: abs(kern.at(d) * sig(s))
    beta = kern.beta
    toward = lambda f: integral_toward(f, 0.0, t, beta, tol, lag=True)
    out = {"H1": _status(lambda: abs(spec.drift) * toward(a))}
    if isinstance(m.sizes, StableSizes):
        al, c = m.sizes.alpha, m.sizes.c
        blowup = al * (1 - beta) >= 1  # a(s)^alpha ~ (t-s)^(alpha (beta-1))
        if blowup:
            out["H2"] = HypothesisStatus("divergent")
            out["H3"] = HypothesisStatus("divergent")
            return out
        k2 = 2 * c * (1 / (2 - al) + 1 / al)
        out["H2"] = _status(lambda: k2 * toward(lambda s, d: m.rate(s) * a(s, d) ** al))

        def h3(s, d):
            v = a(s, d)
            if v == 0:
                return 0.0
            core = abs(math.log(v)) if al == 1 else abs((v ** (al - 1) - 1) / (1 - al))
            return m.rate(s) * 2 * c * v * core

        out["H3"] = _status(lambda: toward(h3))
        return out

    def h2(s, d):
        v = a(s, d)
        return m.rate(s) * m.sizes.integrate(lambda x: min(1.0, (v * x) ** 2), 0.0, math.inf, tol)

    def h3(s, d):
        v = a(s, d)
        f = lambda x: abs(v * x) * abs(float(abs(v * x) <= 1) - float(abs(x) <= 1))
        return m.rate(s) * m.sizes.integrate(f, 0.0, math.inf, tol)

    out["H2"] = _status(lambda: toward(h2))
    out["H3"] = _status(lambda: toward(h3))
    return out


def case_classify(alpha: float, beta: float) -> dict[str, bool]:
    """Integrability of ``g(t, s) x 1_{|x| <= 1}`` under a symmetric ``alpha``-stable driver.

    L1 needs ``int_{|x|<=1} |x| nu(dx) < inf`` (alpha < 1); L2 needs
    ``int g^2 ds < inf`` (beta > 1/2).
    """
    if not 0 < alpha < 2:
        raise ValueError("alpha must lie in (0, 2)")
    if not 0 < beta < 1:
        raise ValueError("beta must lie in (0, 1)")
    return {"in_L1": alpha < 1, "in_L2": beta > 0.5}


def case_number(alpha: float, beta: float) -> int:
    """1: L1 and L2, 2: L2 only, 3: L1 only, 4: neither."""
    c = case_classify(alpha, beta)
    return {(True, True): 1, (False, True): 2, (True, False): 3, (False, False): 4}[
        (c["in_L1"], c["in_L2"])]


def field_norm(kernel: VolterraKernel, driver: JumpMeasure, t: float, eps: float,
               p: int, tol: float = 1e-9) -> float:
    """``int_0^t int_{eps < |x| <= 1} |g(t, s) x|^p nu(ds, dx)``; DivergenceError if infinite."""
    size = driver.sizes.abs_moment(float(p), eps, 1.0, tol)
    time = integral_toward(lambda s, d: driver.rate(s) * kernel.at(d) ** p, 0.0, t,
                           kernel.beta, tol, lag=True)
    return size * time


def domain_l1_check(spec: VmavSpec, Y: PathProcess, t: float, eps_pair: tuple[float, float],
                    n_paths: int = 1, seed: int = 0, rel_tol: float = 0.05,
                    tol: float = 1e-8) -> dict:
    """Empirical L1 check for the field ``x K_g(Y)(t, s) sigma(s)`` on small jumps.

    Estimates ``E int |x K sigma| nu`` at two truncations by Monte Carlo over
    paths (sampled on the coarser window) and singular quadrature in ``s``;
    passes when the two estimates agree within ``rel_tol``. A divergent
    quadrature counts as failure.
    """
    from .sampler import sample_config, substream

    m, kern = spec.driver, spec.kernel
    values = []
    for eps in eps_pair:
        try:
            size = m.sizes.abs_moment(1.0, eps, 1.0, tol)
        except DivergenceError:
            values.append(math.inf)
            continue
        acc = []
        for i in range(n_paths):
            w = sample_config(m, t, max(eps_pair), substream(seed, i)) if n_paths > 1 else JumpConfiguration()
            f = lambda s, d: m.rate(s) * abs(kg_operator(kern, Y, t, s, w, tol / 10, d)
                                             * spec.sigma(s))
            try:
                acc.append(integral_toward(f, 0.0, t, kern.beta, tol, Y.breakpoints(w), lag=True))
            except DivergenceError:
                acc.append(math.inf)
        values.append(size * float(np.mean(acc)))
    a, b = values
    ok = math.isfinite(a) and math.isfinite(b) and abs(a - b) <= rel_tol * max(abs(a), abs(b))
    return {"passed": bool(ok), "values": values}


# --------------------------------------------------------------------------
# the Beta-function bound


@dataclass
class BetaBoundReport:
    quadrature: float
    closed_form: float
    damped: float
    abs_error: float

    @property
    def damped_below(self) -> bool:
        return self.damped <= self.quadrature


def beta_bound_check(beta: float, gamma: float, t: float, tol: float = 1e-11,
                     lam: float = 2.0) -> BetaBoundReport:
    """Check ``int_0^t (t - s)^(beta-1) s^gamma ds = B(beta, gamma + 1) t^(beta + gamma)``.

    Also integrates the damped kernel (``lam > 0``), which must not exceed it.
    """
    if beta <= 0 or gamma < 0:
        raise ValueError("need beta > 0 and gamma >= 0")
    undamped = lambda s, d: d ** (beta - 1) * s ** gamma
    damped = lambda s, d: d ** (beta - 1) * math.exp(-lam * d) * s ** gamma
    b = min(beta, 1.0)
    q = integral_toward(undamped, 0.0, t, b, tol, lag=True)
    qd = integral_toward(damped, 0.0, t, b, tol, lag=True)
    exact = special.beta(beta, gamma + 1) * t ** (beta + gamma)
    return BetaBoundReport(q, float(exact), qd, abs(q - exact))


# --------------------------------------------------------------------------
# integrability witness and working truncation


def l2_check(kernel: VolterraKernel, driver: JumpMeasure, t: float, eps: float,
             tol: float = 1e-9) -> bool:
    """Whether ``x g(t, s) 1_{eps < |x| <= 1}`` has a finite second moment under ``nu``."""
    try:
        return math.isfinite(field_norm(kernel, driver, t, eps, 2, tol))
    except DivergenceError:
        return False


def integrability_witness(alpha: float, beta: float, t: float = 1.0, c: float = 1.0,
                          lam: float = 0.0, eps_pair: tuple[float, float] = (1e-3, 1e-4),
                          rel_tol: float = 0.05) -> dict[str, bool]:
    """Empirical L1 (stabilization across truncations) and L2 status of the small-jump field."""
    spec = VmavSpec(alpha_stable(c, alpha), gamma_kernel(beta, lam))
    l1 = domain_l1_check(spec, ConstantProcess(1.0), t, eps_pair, rel_tol=rel_tol)
    return {"l1_ok": l1["passed"], "l2_ok": l2_check(spec.kernel, spec.driver, t, min(eps_pair)),
            "l1_values": l1["values"]}


def default_truncation(driver: JumpMeasure, T: float, target: float = 1e-3) -> float:
    """Largest ``eps`` (to 1%) whose dropped small-jump mass has L1 norm below ``target``.

    Raises :class:`DivergenceError` when no positive ``eps`` works, i.e. the
    small jumps are not absolutely summable.
    """
    from .sampler import truncation_error_l1

    err = lambda e: truncation_error_l1(driver, T, e).value
    if truncation_error_l1(driver, T, 1e-12).l1_divergent:
        raise DivergenceError("small jumps are not absolutely summable; no L1 truncation exists")
    hi = 1.0
    if err(hi) < target:
        return hi
    lo = hi
    while err(lo) >= target:
        lo /= 10
        if lo < 1e-300:
            raise DivergenceError("no truncation reaches the target")
    while hi / lo > 1.01:
        mid = math.sqrt(lo * hi)
        lo, hi = (mid, hi) if err(mid) < target else (lo, mid)
    return lo
