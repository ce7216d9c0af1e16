"""Multiple compensated integrals of product-indicator kernels (order <= 3).

For pairwise disjoint regions ``A_1..A_k`` the kernel ``1_{A_1 x ... x A_k}``
vanishes on diagonals and its multiple integral against the compensated
measure factorises into ``prod_j (N(A_j) - nu(A_j))``. These give exact
test cases for the gradient/divergence operators.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .canonical import JumpConfiguration
from .measure import JumpMeasure, Region
from .operators import Functional, RandomField, phi, psi

__all__ = ["ProductKernel", "compensated_count", "multiple_integral", "chaos_functional",
           "chaos_field", "BridgeReport", "verify_gradient_bridge",
           "verify_divergence_bridge", "isometry_inner"]

MAX_ORDER = 3


@dataclass(frozen=True)
class ProductKernel:
    """``1_{A_1} x ... x 1_{A_k}``, optionally times ``1_A(theta)`` for the field case."""

    factors: tuple[Region, ...]
    extra: Region | None = None

    def __post_init__(self):
        k = len(self.factors)
        if not 1 <= k <= MAX_ORDER and not (k == 0 and self.extra is not None):
            raise ValueError(f"order must be between 1 and {MAX_ORDER}")
        regions = list(self.factors) + ([self.extra] if self.extra is not None else [])
        for a, b in itertools.combinations(regions, 2):
            if not a.disjoint(b):
                raise ValueError(f"kernel factors must be pairwise disjoint: {a}, {b}")

    @property
    def order(self) -> int:
        return len(self.factors)

    def full(self) -> "ProductKernel":
        """The order-(k+1) kernel obtained by appending the extra region."""
        if self.extra is None:
            raise ValueError("kernel has no extra region")
        return ProductKernel(self.factors + (self.extra,))


def compensated_count(w: JumpConfiguration, r: Region, m: JumpMeasure) -> float:
    n = sum(1 for p in w.points if r.contains(*p))
    return n - m.mass(r)


def multiple_integral(g: ProductKernel, w: JumpConfiguration, m: JumpMeasure) -> float:
    """``I_k(g)(w) = prod_j (N(A_j)(w) - nu(A_j))``."""
    if m.infinite_activity and any(r.x_inner == 0 for r in g.factors):
        raise ValueError("factors need finite mass")
    return math.prod(compensated_count(w, r, m) for r in g.factors)


def chaos_functional(g: ProductKernel, m: JumpMeasure) -> Functional:
    return Functional(lambda w: multiple_integral(g, w, m), f"I_{g.order}", 0.0)


def chaos_field(g: ProductKernel, m: JumpMeasure) -> RandomField:
    """``u_theta = 1_A(theta) I_k(1_{A_1 x ... x A_k})``."""
    if g.extra is None:
        raise ValueError("field kernels need an extra region")
    A = g.extra
    inner = ProductKernel(g.factors) if g.factors else None

    def fn(th, w):
        if not A.contains(*th):
            return 0.0
        return multiple_integral(inner, w, m) if inner is not None else 1.0

    times = [t for r in (*g.factors, A) for t in (r.t_min, r.t_max)]
    return RandomField(fn, False, f"u_{g.order}", times)


def _gradient_formula(g: ProductKernel, theta, w, m) -> float:
    # k I_{k-1}(sym g(theta, .)) for a product kernel
    comp = [compensated_count(w, r, m) for r in g.factors]
    total = 0.0
    for j, r in enumerate(g.factors):
        if r.contains(*theta):
            total += math.prod(c for i, c in enumerate(comp) if i != j)
    return total


@dataclass
class BridgeReport:
    name: str
    samples: int
    max_abs_discrepancy: float

    def passed(self, tol: float = 1e-10) -> bool:
        return self.max_abs_discrepancy < tol


def verify_gradient_bridge(g: ProductKernel, m: JumpMeasure,
                           samples: Iterable[tuple[tuple[float, float], JumpConfiguration]]) -> BridgeReport:
    """Compare ``Psi_theta I_k`` (add-a-jump difference) with the chaos derivative."""
    F = chaos_functional(g, m)
    grad = psi(F)
    worst, n = 0.0, 0
    for theta, w in samples:
        d = abs(grad(theta, w) - _gradient_formula(g, theta, w, m))
        worst = max(worst, d)
        n += 1
    return BridgeReport(f"gradient-k{g.order}", n, worst)


def verify_divergence_bridge(g: ProductKernel, m: JumpMeasure,
                             samples: Iterable[JumpConfiguration], tol: float = 1e-12) -> BridgeReport:
    """Compare ``Phi(u)`` for ``u_theta = 1_A(theta) I_k(...)`` with ``I_{k+1}`` of the full kernel."""
    u = chaos_field(g, m)
    full = g.full()
    worst, n = 0.0, 0
    for w in samples:
        lhs = phi(u, w, m, g.extra, tol)
        rhs = multiple_integral(full, w, m)
        worst = max(worst, abs(lhs - rhs))
        n += 1
    return BridgeReport(f"divergence-k{g.order}", n, worst)


def isometry_inner(f: ProductKernel, g: ProductKernel, m: JumpMeasure) -> float:
    """``E[I_k(f) I_k(g)] = k! <sym f, sym g> = sum_pi prod_i nu(A_i & B_pi(i))``."""
    if f.order != g.order:
        return 0.0
    total = 0.0
    for perm in itertools.permutations(range(g.order)):
        total += math.prod(m.mass(a.intersect(g.factors[p])) for a, p in zip(f.factors, perm))
    return total
