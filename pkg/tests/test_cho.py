import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jumpcalc.canonical import JumpConfiguration, restrict_before
from jumpcalc.cho import (ReconstructionError, cho_reconstruct, cond_expect_psi, psi_l1_check,
                          psi_l1_norm)
from jumpcalc.measure import PointMasses, Region, compound_poisson
from jumpcalc.operators import Functional, count, exp_price, path_functional
from jumpcalc.sampler import sample_config, substream

T = 1.0
M = compound_poisson(PointMasses((-0.1, 0.15), (0.6, 0.4)), 2.0)
R = Region.theta(T, 0.0)
PAST = JumpConfiguration([(0.1, 0.15), (0.3, -0.1)])


def test_path_value_integrand_is_exact():
    J = path_functional(T, M, 0.0)
    est = cond_expect_psi(J, 0.5, 0.15, PAST, M, R, 50, np.random.default_rng(0))
    assert est.estimate == pytest.approx(0.15, abs=1e-15)
    assert est.stderr < 1e-15  # rounding in the path sums only


def test_count_integrand_is_one():
    est = cond_expect_psi(count(), 0.5, -0.1, PAST, M, R, 50, np.random.default_rng(1))
    assert est == (1.0, 0.0, 0)


def test_price_integrand():
    r, s, x = 0.05, 0.4, 0.15
    S = exp_price(1.0, r, M, T)
    est = cond_expect_psi(S, s, x, PAST, M, R, 4000, np.random.default_rng(2))
    S_past = exp_price(1.0, r, M, T, at=s)(PAST)
    expected = math.exp(r * (T - s)) * math.expm1(x) * S_past
    assert abs(est.estimate - expected) < 3 * est.stderr


def test_needs_two_inner_samples():
    with pytest.raises(ValueError):
        cond_expect_psi(count(), 0.5, 0.15, PAST, M, R, 1, np.random.default_rng(0))


def test_too_many_rejections_fail():
    bad = Functional(lambda w: math.nan if len(w) > 2 else 0.0)
    with pytest.raises(ReconstructionError):
        cond_expect_psi(bad, 0.2, 0.15, PAST, M, R, 50, np.random.default_rng(0))


def test_count_reconstruction_exact():
    rep = cho_reconstruct(count(R, M), M, T, 0.0, 50, 4, seed=1)
    assert rep.max_abs_error < 1e-8


def test_path_value_reconstruction_exact():
    J = path_functional(T, M, 0.0)
    rep = cho_reconstruct(J, M, T, 0.0, 50, 4, seed=2)
    assert rep.mean_F == pytest.approx(2.0 * (0.6 * -0.1 + 0.4 * 0.15))
    assert rep.max_abs_error < 1e-8


def test_deterministic_integrands_do_not_depend_on_inner_count():
    J = path_functional(T, M, 0.0)
    a = cho_reconstruct(J, M, T, 0.0, 10, 2, seed=3)
    b = cho_reconstruct(J, M, T, 0.0, 10, 64, seed=3)
    assert [r[2] for r in a.rows] == pytest.approx([r[2] for r in b.rows], abs=1e-12)


def test_price_reconstruction_small():
    S = exp_price(1.0, 0.05, M, T)
    rep = cho_reconstruct(S, M, T, 0.0, 60, 200, seed=4)
    assert rep.l1_relative_error < 0.05


def test_report_csv_lines():
    rep = cho_reconstruct(count(R, M), M, T, 0.0, 3, 2, seed=5)
    lines = rep.csv_lines()
    assert lines[0] == "path_id,F_value,reconstruction,abs_error"
    assert len(lines) == 4


def test_integrability_check_passes_for_count():
    assert psi_l1_norm(count(), M, T, 0.0, 5) == pytest.approx(M.mass(R))
    assert psi_l1_check(count(), M, T, (0.0, 0.0), 5)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.05, 0.95), st.sampled_from([-0.1, 0.15]))
def test_future_points_never_change_the_estimate(seed, s, x):
    S = exp_price(1.0, 0.05, M, T)
    w = sample_config(M, T, 0.0, substream(seed, 0))
    later = sample_config(M, T, 0.0, substream(seed, 1)).filter(lambda p: p[0] >= s)
    a = cond_expect_psi(S, s, x, w, M, R, 8, np.random.default_rng(seed))
    b = cond_expect_psi(S, s, x, w.union(later), M, R, 8, np.random.default_rng(seed))
    c = cond_expect_psi(S, s, x, restrict_before(w, s), M, R, 8, np.random.default_rng(seed))
    assert a == b == c
