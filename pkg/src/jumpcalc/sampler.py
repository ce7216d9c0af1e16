"""Draws from the truncated canonical law and refinement of truncations."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .canonical import JumpConfiguration
from .measure import DivergenceError, InfiniteMassError, JumpMeasure, Region

__all__ = ["substream", "sample_config", "sample_region", "refine",
           "truncation_error_l1", "TruncationError"]


def substream(master_seed: int, index: int, *extra: int) -> np.random.Generator:
    """Generator for replica ``index``; independent of scheduling order."""
    return np.random.default_rng(np.random.SeedSequence([int(master_seed), int(index), *extra]))


def sample_region(m: JumpMeasure, r: Region, rng: np.random.Generator) -> JumpConfiguration:
    """Poisson configuration with intensity ``nu`` restricted to ``r``."""
    mu = m.mass(r)
    if mu == 0.0:
        return JumpConfiguration()
    if not math.isfinite(mu):
        raise InfiniteMassError("region has infinite mass")
    n = int(rng.poisson(mu))
    if n == 0:
        return JumpConfiguration()
    t, x = m.sample_points(r, rng, n)
    return JumpConfiguration.from_arrays(t, x)


def sample_config(m: JumpMeasure, T: float, eps: float, rng: np.random.Generator) -> JumpConfiguration:
    """Configuration on ``[0, T] x {|x| > eps}``.

    The count is Poisson with mean ``nu(Theta_{T,eps})``; given the count the
    points are i.i.d. from the normalised restriction.
    """
    r = Region.theta(T, eps)
    try:
        mu = m.mass(r)
    except InfiniteMassError as exc:
        raise InfiniteMassError(f"{exc}; choose a positive eps") from None
    if mu <= 0:
        raise ValueError("truncation window carries no mass")
    return sample_region(m, r, rng)


def refine(w: JumpConfiguration, m: JumpMeasure, eps_old: float, eps_new: float,
           rng: np.random.Generator, T: float) -> JumpConfiguration:
    """Superimpose an independent sample on ``eps_new < |x| <= eps_old``.

    If ``w`` has the law at truncation ``eps_old``, the result has the law at
    ``eps_new`` (Poisson measures are independent over disjoint regions).
    """
    if not (0 < eps_new < eps_old):
        raise ValueError(f"need 0 < eps_new < eps_old, got {eps_new}, {eps_old}")
    extra = sample_region(m, Region(0.0, T, eps_new, eps_old), rng)
    return w.union(extra)


@dataclass(frozen=True)
class TruncationError:
    """Size of the discarded small jumps.

    ``moment`` is 1 when ``value`` is the |x|-integral and 2 when that
    integral diverges and the x**2 integral is reported instead.
    """

    value: float
    moment: int

    @property
    def l1_divergent(self) -> bool:
        return self.moment == 2


def truncation_error_l1(m: JumpMeasure, T: float, eps: float) -> TruncationError:
    """``int_{[0,T] x {0 < |x| <= eps}} |x| nu``, or the x**2 integral if that diverges."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    tm = m.rate.cumulative(T)
    try:
        return TruncationError(tm * m.sizes.abs_moment(1.0, 0.0, eps), 1)
    except DivergenceError:
        return TruncationError(tm * m.sizes.abs_moment(2.0, 0.0, eps), 2)
