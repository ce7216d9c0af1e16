import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jumpcalc.canonical import EMPTY, JumpConfiguration
from jumpcalc.chaos import (ProductKernel, chaos_field, chaos_functional, compensated_count,
                            isometry_inner, multiple_integral, verify_divergence_bridge,
                            verify_gradient_bridge)
from jumpcalc.measure import PointMasses, Region, alpha_stable, compound_poisson
from jumpcalc.operators import phi, psi
from jumpcalc.sampler import sample_config, substream

M = compound_poisson(PointMasses((-0.7, 0.5, 1.2), (0.5, 1.0, 0.5)), 2.0)
A = Region(0.0, 0.3, 0.0, math.inf)
B = Region(0.3, 0.7, 0.0, math.inf)
C = Region(0.7, 1.0, 0.0, 0.6)
W = JumpConfiguration([(0.1, 0.5), (0.2, -0.7), (0.5, 1.2), (0.9, 0.5), (0.95, 1.2)])


def _samples(n, seed=0):
    rng = np.random.default_rng(seed)
    for i in range(n):
        w = sample_config(M, 1.0, 0.0, substream(seed, i))
        yield M.sample_point(Region.theta(1.0, 0.0), rng), w


def test_first_order_is_compensated_count():
    assert multiple_integral(ProductKernel((A,)), W, M) == pytest.approx(2 - M.mass(A))


def test_second_order_factorises():
    got = multiple_integral(ProductKernel((A, B)), W, M)
    assert got == pytest.approx((2 - M.mass(A)) * (1 - M.mass(B)))


def test_empty_configuration():
    g = ProductKernel((A, B, C))
    assert multiple_integral(g, EMPTY, M) == pytest.approx(-M.mass(A) * M.mass(B) * M.mass(C))


def test_overlapping_factors_rejected():
    with pytest.raises(ValueError):
        ProductKernel((A, Region(0.2, 0.5, 0.0, math.inf)))
    with pytest.raises(ValueError):
        ProductKernel((A, B, C, Region(1.0, 2.0)))


def test_infinite_activity_factor_rejected():
    with pytest.raises(ValueError):
        multiple_integral(ProductKernel((A,)), W, alpha_stable(1.0, 0.5))


def test_gradient_first_order():
    F = chaos_functional(ProductKernel((A,)), M)
    assert psi(F)((0.1, 1.2), W) == pytest.approx(1.0)
    assert psi(F)((0.5, 1.2), W) == pytest.approx(0.0)


def test_gradient_second_order_expansion():
    F = chaos_functional(ProductKernel((A, B)), M)
    th = (0.2, 1.2)
    assert psi(F)(th, W) == pytest.approx(compensated_count(W, B, M))
    th = (0.4, 1.2)
    assert psi(F)(th, W) == pytest.approx(compensated_count(W, A, M))


def test_gradient_outside_factors_is_zero():
    F = chaos_functional(ProductKernel((A, C)), M)
    assert psi(F)((0.5, 0.5), W) == 0.0
    assert psi(F)((0.8, 1.2), W) == 0.0  # |x| above C's outer radius


def test_divergence_order_zero():
    u = chaos_field(ProductKernel((), extra=A), M)
    assert phi(u, W, M, A) == pytest.approx(compensated_count(W, A, M), abs=1e-10)


def test_divergence_first_order():
    g = ProductKernel((B,), extra=A)
    lhs = phi(chaos_field(g, M), W, M, A)
    assert lhs == pytest.approx(compensated_count(W, A, M) * compensated_count(W, B, M), abs=1e-10)


def test_divergence_on_empty_configuration():
    g = ProductKernel((B, C), extra=A)
    lhs = phi(chaos_field(g, M), EMPTY, M, A)
    assert lhs == pytest.approx(multiple_integral(g.full(), EMPTY, M), abs=1e-10)


@pytest.mark.parametrize("factors", [(A,), (A, B), (A, B, C)])
def test_gradient_bridge(factors):
    rep = verify_gradient_bridge(ProductKernel(factors), M, _samples(300, len(factors)))
    assert rep.samples == 300 and rep.passed(1e-10)


@pytest.mark.parametrize("factors", [(), (B,), (B, C)])
def test_divergence_bridge(factors):
    g = ProductKernel(factors, extra=A)
    rep = verify_divergence_bridge(g, M, (w for _, w in _samples(200, 10 + len(factors))))
    assert rep.passed(1e-10)


def test_mean_zero_and_isometry():
    n = 20_000
    f = ProductKernel((A, B))
    g = ProductKernel((B, Region(0.0, 0.3, 0.6, math.inf)))
    vf, vg = np.empty(n), np.empty(n)
    for i in range(n):
        w = sample_config(M, 1.0, 0.0, substream(21, i))
        vf[i], vg[i] = multiple_integral(f, w, M), multiple_integral(g, w, M)
    se = vf.std(ddof=1) / math.sqrt(n)
    assert abs(vf.mean()) < 3 * se
    prod = vf * vg
    assert abs(prod.mean() - isometry_inner(f, g, M)) < 3 * prod.std(ddof=1) / math.sqrt(n)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(0.05, 0.95))
def test_isometry_is_symmetric(a, b):
    f = ProductKernel((Region(0, a), Region(a, 1.0)))
    g = ProductKernel((Region(0, b), Region(b, 1.0)))
    assert isometry_inner(f, g, M) == pytest.approx(isometry_inner(g, f, M))
    assert isometry_inner(f, f, M) == pytest.approx(M.mass(Region(0, a)) * M.mass(Region(a, 1)))
