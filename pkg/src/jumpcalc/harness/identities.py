"""The registered identity suite.

Each identity has a printable formula and one of two kinds:

* ``expectation``: both sides are averaged over independent replica streams
  and compared at ``sigma * sqrt(se_lhs**2 + se_rhs**2)``;
* ``pathwise``: both sides are evaluated on the same draw and compared at a
  relative tolerance ``|lhs - rhs| / max(1, |lhs|, |rhs|)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .._quadrature import DivergenceError
from ..canonical import JumpConfiguration, add_point
from ..chaos import ProductKernel, _gradient_formula, chaos_field, chaos_functional, multiple_integral
from ..cho import cond_expect_psi
from ..measure import JumpMeasure, PointMasses, Region, measure_from_spec
from ..operators import (Functional, RandomField, bar_phi, bar_psi, ecal, phi, psi,
                         psi_field, s_integral, transfer, transfer_field)
from ..sampler import sample_config, substream
from .catalog import build_field, build_functional, random_field_spec, random_functional_spec

# stream tags inside a replica's substream family
LHS, RHS, DRAW = 0, 1, 2
CHUNKED = 1


@dataclass
class Setup:
    """Everything a replica needs, rebuilt from the plain config dict in each worker."""

    m: JumpMeasure
    T: float
    eps: float
    region: Region
    rule: str
    F: Functional | None
    u: RandomField | None
    functional_spec: dict | None
    field_spec: dict | None
    chaos_order: int
    cho_inner: int

    def functional(self, rng: np.random.Generator) -> Functional:
        if self.F is not None:
            return self.F
        return build_functional(random_functional_spec(rng, self.T), self.m, self.T, self.eps)

    def field(self, rng: np.random.Generator) -> RandomField:
        if self.u is not None:
            return self.u
        return build_field(random_field_spec(rng, self.T), self.m, self.T, self.eps)

    def theta(self, rng: np.random.Generator) -> tuple[float, float]:
        return self.m.sample_point(self.region, rng)

    def sample(self, rng: np.random.Generator) -> JumpConfiguration:
        return sample_config(self.m, self.T, self.eps, rng)


def make_setup(cfg: dict, pathwise: bool) -> Setup:
    T, eps = float(cfg.get("T", 1.0)), float(cfg.get("eps", 0.0))
    m = measure_from_spec(cfg.get("measure", {"kind": "standard-poisson"}))
    fspec, uspec = cfg.get("functional"), cfg.get("field")
    if not pathwise:
        fspec = fspec or {"name": "count"}
        uspec = uspec or {"name": "constant", "c": 1.0}
    F = build_functional(fspec, m, T, eps) if fspec else None
    u = build_field(uspec, m, T, eps) if uspec else None
    rule = "gauss" if isinstance(m.sizes, PointMasses) else "adaptive"
    chaos = cfg.get("chaos") or {}
    cho = cfg.get("cho") or {}
    return Setup(m, T, eps, Region.theta(T, eps), rule, F, u, fspec, uspec,
                 int(chaos.get("order", 2)), int(cho.get("M_inner", 16)))


@dataclass(frozen=True)
class Identity:
    name: str
    formula: str
    kind: str  # "expectation" or "pathwise"
    # expectation: (setup, w) -> value, one per side
    lhs: Callable | None = None
    rhs: Callable | None = None
    # pathwise: (setup, rng) -> (lhs, rhs)
    draw: Callable | None = None


def _E(s: Setup, u: RandomField, w: JumpConfiguration) -> float:
    return ecal(u, w, s.m, s.region, rule=s.rule)


def _Phi(s: Setup, u: RandomField, w: JumpConfiguration) -> float:
    return phi(u, w, s.m, s.region, rule=s.rule)


# -- expectation identities ------------------------------------------------


def _elau_lhs(s, w):
    return s_integral(s.u, w, s.region)


def _elau_rhs(s, w):
    return _E(s, s.u, w)


def _duality_lhs(s, w):
    return s.F(w) * s_integral(s.u, w, s.region)


def _duality_rhs(s, w):
    return _E(s, transfer(s.F) * s.u, w)


def _dual1_lhs(s, w):
    return s.F(w) * _Phi(s, s.u, w)


def _dual1_rhs(s, w):
    return _E(s, psi(s.F) * s.u, w)


def _bar_lhs(s, w):
    return s.F(w) * bar_phi(s.u, w, s.m, s.region, rule=s.rule)


def _bar_rhs(s, w):
    v = bar_psi(s.F) * s.u
    return s.m.integrate(lambda t, x: v((t, x), w) * x * x, s.region,
                         time_points=sorted({*w.times.tolist(), *v.extra_times}), rule=s.rule)


def _mean_zero_lhs(s, w):
    return _Phi(s, s.u, w)


def _zero(s, w):
    return 0.0


# -- pathwise identities ---------------------------------------------------


def _draw_product_rule(s: Setup, rng):
    F, G = s.functional(rng), s.functional(rng)
    w, th = s.sample(rng), s.theta(rng)
    lhs = psi(F * G)(th, w)
    pf, pg = psi(F)(th, w), psi(G)(th, w)
    return lhs, G(w) * pf + F(w) * pg + pf * pg


def _draw_s_product(s: Setup, rng):
    F, u = s.functional(rng), s.field(rng)
    w = s.sample(rng)
    return F(w) * s_integral(u, w), s_integral(transfer(F) * u, w)


def _draw_t_commutation(s: Setup, rng):
    u = s.field(rng)
    w, th = s.sample(rng), s.theta(rng)
    return s_integral(u, add_point(w, th)), u(th, w) + s_integral(transfer_field(u, th), w)


def _draw_phi_product(s: Setup, rng):
    F, u = s.functional(rng), s.field(rng)
    w = s.sample(rng)
    pu = psi(F) * u
    rhs = _Phi(s, F * u, w) + _Phi(s, pu, w) + _E(s, pu, w)
    return F(w) * _Phi(s, u, w), rhs


def _draw_psi_phi(s: Setup, rng):
    u = s.field(rng)
    w, th = s.sample(rng), s.theta(rng)
    lhs = _Phi(s, u, add_point(w, th)) - _Phi(s, u, w)
    return lhs, u(th, w) + _Phi(s, psi_field(u, th), w)


def _slabs(T: float, n: int, eps: float) -> tuple[Region, ...]:
    cuts = np.linspace(0.0, T, n + 1)
    return tuple(Region(float(a), float(b), eps, math.inf) for a, b in zip(cuts[:-1], cuts[1:]))


@lru_cache(maxsize=8)
def _kernel(T: float, eps: float, order: int, with_extra: bool) -> ProductKernel:
    slabs = _slabs(T, order, eps)
    if with_extra:
        return ProductKernel(slabs[:-1], slabs[-1])
    return ProductKernel(slabs)


def _draw_chaos_gradient(s: Setup, rng):
    g = _kernel(s.T, s.eps, s.chaos_order, False)
    w, th = s.sample(rng), s.theta(rng)
    return psi(chaos_functional(g, s.m))(th, w), _gradient_formula(g, th, w, s.m)


def _draw_chaos_divergence(s: Setup, rng):
    g = _kernel(s.T, s.eps, s.chaos_order, True)
    w = s.sample(rng)
    lhs = phi(chaos_field(g, s.m), w, s.m, g.extra, rule=s.rule)
    return lhs, multiple_integral(g.full(), w, s.m)


def _draw_predictability(s: Setup, rng):
    F = s.functional(rng)
    w = s.sample(rng)
    t, x = s.theta(rng)
    # extra jumps at or after t must not move the estimate
    later = sample_config(s.m, s.T, s.eps, rng).filter(lambda p: p[0] >= t)
    key = int(rng.integers(2 ** 63))
    a = cond_expect_psi(F, t, x, w, s.m, s.region, s.cho_inner, np.random.default_rng(key))
    b = cond_expect_psi(F, t, x, w.union(later), s.m, s.region, s.cho_inner,
                        np.random.default_rng(key))
    return a.estimate, b.estimate


REGISTRY: dict[str, Identity] = {i.name: i for i in [
    Identity("prop-elau", "E[S u] = E int u_theta nu(dtheta)", "expectation", _elau_lhs, _elau_rhs),
    Identity("thm-duality", "E[F S u] = E int T_theta F u_theta nu(dtheta)", "expectation",
             _duality_lhs, _duality_rhs),
    Identity("prop-dual1", "E[F Phi u] = E int Psi_theta F u_theta nu(dtheta)", "expectation",
             _dual1_lhs, _dual1_rhs),
    Identity("bar-duality", "E[F barPhi u] = E int barPsi_theta F u_theta x^2 nu(dtheta)",
             "expectation", _bar_lhs, _bar_rhs),
    Identity("phi-mean-zero", "E[Phi u] = 0", "expectation", _mean_zero_lhs, _zero),
    Identity("psi-product-rule", "Psi_theta(FG) = G Psi_theta F + F Psi_theta G + Psi_theta F Psi_theta G",
             "pathwise", draw=_draw_product_rule),
    Identity("s-product-rule", "F S u = S(T F u)", "pathwise", draw=_draw_s_product),
    Identity("t-commutation", "T_theta(S u) = u_theta + S(T_theta u)", "pathwise",
             draw=_draw_t_commutation),
    Identity("phi-product-rule", "F Phi u = Phi(F u) + Phi(Psi F u) + E(Psi F u)", "pathwise",
             draw=_draw_phi_product),
    Identity("psi-phi-commutation", "Psi_theta(Phi u) = u_theta + Phi(Psi_theta u)", "pathwise",
             draw=_draw_psi_phi),
    Identity("chaos-gradient", "Psi_theta I_k(g) = k I_{k-1}(g(theta, .))", "pathwise",
             draw=_draw_chaos_gradient),
    Identity("chaos-divergence", "Phi(1_A I_k(g)) = I_{k+1}(g 1_A)", "pathwise",
             draw=_draw_chaos_divergence),
    Identity("cho-predictability", "E[Psi_{s,x} F | F_{s-}] ignores jumps at or after s", "pathwise",
             draw=_draw_predictability),
]}


def evaluate_chunk(cfg: dict, name: str, start: int, stop: int) -> tuple[np.ndarray, np.ndarray]:
    """Replica values ``(lhs, rhs)`` for replicas ``start..stop-1``.

    Streams are keyed by replica index (pathwise draws) or by the chunk start
    (expectation sides, one stream per side per chunk). Chunk boundaries are
    fixed by the caller, so results do not depend on the worker count.
    """
    ident = REGISTRY[name]
    setup = make_setup(cfg, ident.kind == "pathwise")
    seed = int(cfg["seed"])
    n = stop - start
    lhs, rhs = np.empty(n), np.empty(n)
    if ident.kind == "expectation":
        rl, rr = substream(seed, start, LHS, CHUNKED), substream(seed, start, RHS, CHUNKED)
        for k in range(n):
            lhs[k] = ident.lhs(setup, setup.sample(rl))
            rhs[k] = ident.rhs(setup, setup.sample(rr))
    else:
        for k, i in enumerate(range(start, stop)):
            lhs[k], rhs[k] = ident.draw(setup, substream(seed, i, DRAW))
    return lhs, rhs


__all__ = ["Identity", "REGISTRY", "Setup", "make_setup", "evaluate_chunk", "DivergenceError"]
