import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, special

from jumpcalc.canonical import JumpConfiguration, add_point, restrict_before
from jumpcalc.measure import (DivergenceError, NormalSizes, PointMasses, Region, TimeRate,
                              alpha_stable, compound_poisson)
from jumpcalc.operators import constant, count
from jumpcalc.sampler import sample_config, substream, truncation_error_l1
from jumpcalc.volterra import (ConstantProcess, NestedVmav, StepProcess, TimeProcess,
                               VolterraKernel, VmavSpec, beta_bound_check, big_jump_component,
                               case_classify, case_number, default_truncation, gamma_kernel,
                               hypotheses_check, integral_toward, integrability_witness,
                               kg_nested_expansion, kg_operator, psi_kg_closed_form,
                               vmav_integral, vmav_process)

FINITE = compound_poisson(PointMasses((-0.4, 0.7), (0.8, 0.5)), 1.5)


# -- kernel -------------------------------------------------------------------


def test_kernel_causal():
    g = gamma_kernel(0.7, 0.5)
    assert g(1.0, 1.0) == 0.0 and g(0.5, 0.9) == 0.0
    assert g(1.0, 0.5) == pytest.approx(0.5 ** -0.3 * math.exp(-0.25))


@pytest.mark.parametrize("beta,lam", [(0.3, 0.0), (0.7, 0.5), (0.5, 2.0)])
def test_kernel_density_is_derivative(beta, lam):
    g = gamma_kernel(beta, lam)
    h = 1e-6
    for d in (0.05, 0.3, 0.9):
        num = (g.at(d + h) - g.at(d - h)) / (2 * h)
        assert g.density_at(d) == pytest.approx(num, rel=1e-7)


@pytest.mark.parametrize("beta,lam", [(0.3, 0.0), (0.7, 0.5)])
def test_kernel_integral_closed_form(beta, lam):
    g = gamma_kernel(beta, lam)
    q, _ = integrate.quad(lambda s: g(1.3, s), 0, 1.3, limit=200)
    assert g.integral(1.3) == pytest.approx(q, rel=1e-8)


def test_kernel_parameter_checks():
    with pytest.raises(ValueError):
        VolterraKernel(0.0)
    with pytest.raises(ValueError):
        VolterraKernel(0.5, -1.0)
    with pytest.raises(ValueError):
        VolterraKernel(0.5, 1.0, family="power")


def test_integral_toward_singular_endpoint():
    # lag=True hands over the exact distance to the endpoint
    f = lambda x, d: d ** -0.5
    assert integral_toward(f, 0.0, 1.0, 0.5, 1e-12, lag=True) == pytest.approx(2.0, abs=1e-10)
    f = lambda x, d: d ** -0.7
    assert integral_toward(f, 0.0, 1.0, 0.3, end="a", lag=True) == pytest.approx(1 / 0.3, abs=1e-9)
    assert integral_toward(lambda x: x * x, 0.0, 1.0, 0.5, 1e-12) == pytest.approx(1 / 3, abs=1e-11)


def test_integral_toward_flags_divergence():
    with pytest.raises(DivergenceError):
        integral_toward(lambda x, d: 1 / d, 0.0, 1.0, 0.5, lag=True)


# -- the kernel transform ------------------------------------------------------

W = JumpConfiguration([(0.15, 0.7), (0.4, -0.4), (0.55, 0.7), (0.8, -0.4)])


def test_kg_constant():
    g = gamma_kernel(0.6, 0.3)
    assert kg_operator(g, ConstantProcess(2.5), 1.0, 0.3, W) == pytest.approx(2.5 * g(1.0, 0.3))


@pytest.mark.parametrize("s", [0.0, 0.2, 0.7, 0.999])
def test_kg_identity_process(s):
    beta, t = 0.6, 1.0
    g = gamma_kernel(beta)
    exact = s * (t - s) ** (beta - 1) - (1 - beta) * (t - s) ** beta / beta
    assert kg_operator(g, TimeProcess(), t, s, W) == pytest.approx(exact, rel=1e-9, abs=1e-10)


def test_kg_requires_s_before_t():
    with pytest.raises(ValueError):
        kg_operator(gamma_kernel(0.5), TimeProcess(), 1.0, 1.0, W)


@pytest.mark.parametrize("s", [0.1, 0.5, 0.85])
def test_kg_nested_matches_expansion(s):
    m = FINITE
    Y = NestedVmav(m, 0.8, 0.0)
    g = gamma_kernel(0.7, 0.5)
    a = kg_operator(g, Y, 1.0, s, W, 1e-11)
    b = kg_nested_expansion(g, Y, 1.0, s, W, 1e-11)
    assert a == pytest.approx(b, rel=1e-7, abs=1e-8)


def test_nested_compensator_closed_form_with_time_trend():
    m = compound_poisson(PointMasses((0.3, 0.9), (1.0, 0.5)), TimeRate(0.7, 1.3))
    Y = NestedVmav(m, 0.6, 0.0)
    m1 = 0.3 + 0.45
    for s in (0.2, 1.0):
        q, _ = integrate.quad(lambda v: (s - v) ** 0.6 * (0.7 + 1.3 * v), 0, s)
        assert Y.compensator(s) == pytest.approx(m1 * q, rel=1e-12)
        # derivative of the compensator: m1 (a s^g + b s^(g+1) / (g+1))
        d = 1e-9
        slope = m1 * (0.7 * s ** 0.6 + 1.3 * s ** 1.6 / 1.6)
        assert Y.increment(s, d, JumpConfiguration()) == pytest.approx(-d * slope, rel=1e-6)
        d = 0.3
        assert Y.increment(s, d, JumpConfiguration()) == pytest.approx(
            Y.compensator(s) - Y.compensator(s + d), rel=1e-12)


# -- closed-form psi of the transform -----------------------------------------


@settings(max_examples=20, deadline=None)
@given(st.floats(0.02, 0.95), st.floats(-1.0, 1.0).filter(lambda x: abs(x) > 1e-3),
       st.integers(0, 1000))
def test_psi_kg_closed_form_matches_operator(s, x, seed):
    beta = 0.6
    gam = 1 - beta + 0.2
    g = gamma_kernel(beta)
    m = compound_poisson(NormalSizes(0.0, 0.5), 2.0)
    Y = NestedVmav(m, gam, 0.0)
    w = sample_config(m, 1.0, 0.0, substream(seed, 0))
    direct = kg_operator(g, Y, 1.0, s, add_point(w, (s, x)), 1e-12) - kg_operator(g, Y, 1.0, s, w, 1e-12)
    assert psi_kg_closed_form(g, gam, 1.0, s, x, 1e-12) == pytest.approx(direct, abs=1e-9)


def test_psi_kg_sign_and_support():
    g = gamma_kernel(0.6, 0.4)
    assert psi_kg_closed_form(g, 0.6, 1.0, 0.3, 0.5) < 0
    assert psi_kg_closed_form(g, 0.6, 1.0, 0.3, -0.5) > 0
    assert psi_kg_closed_form(g, 0.6, 1.0, 0.3, 1.5) == 0.0
    assert psi_kg_closed_form(g, 0.6, 1.0, 0.3, 1e-300) == pytest.approx(0.0, abs=1e-290)


def test_psi_kg_needs_beta_plus_gamma_above_one():
    with pytest.raises(DivergenceError):
        psi_kg_closed_form(gamma_kernel(0.3), 0.5, 1.0, 0.2, 0.5)


# -- the integral --------------------------------------------------------------


def test_constant_integrand_gives_the_process():
    m = compound_poisson(NormalSizes(0.0, 0.5), 3.0)
    spec = VmavSpec(m, gamma_kernel(0.7, 0.5))
    w = sample_config(m, 1.0, 0.0, substream(3, 0))
    r = vmav_integral(spec, ConstantProcess(1.0), 1.0, w, 0.0)
    assert r.phi_correction == 0.0 and r.ecal_correction == 0.0
    assert r.total == pytest.approx(vmav_process(spec, 1.0, w, 0.0), abs=1e-9)


def test_constant_integrand_asymmetric_driver():
    spec = VmavSpec(FINITE, gamma_kernel(0.7, 0.5))
    w = sample_config(FINITE, 1.0, 0.0, substream(4, 0))
    r = vmav_integral(spec, ConstantProcess(2.0), 1.0, w, 0.0)
    assert r.total == pytest.approx(2.0 * vmav_process(spec, 1.0, w, 0.0), abs=1e-8)


def test_big_jump_component():
    spec = VmavSpec(FINITE, gamma_kernel(0.7))
    w = JumpConfiguration([(0.2, 2.0), (0.5, 0.5), (0.9, -3.0), (1.2, 5.0)])
    assert big_jump_component(spec, 1.0, w) == pytest.approx(2.0 * 0.8 ** -0.3 - 3.0 * 0.1 ** -0.3)


def _step_oracle(spec, knots, values, w, t):
    X = lambda u: vmav_process(spec, u, w, 0.0, 1e-12)
    return sum(Z(restrict_before(w, a)) * (X(min(b, t)) - X(a))
               for a, b, Z in zip(knots[:-1], knots[1:], values) if a < t)


@pytest.mark.slow
def test_step_integrand_matches_pathwise_oracle():
    spec = VmavSpec(FINITE, gamma_kernel(0.6, 0.5))
    knots, values = [0.0, 0.3, 0.6, 1.0], [constant(1.0), count(), constant(-2.0)]
    w = sample_config(FINITE, 1.0, 0.0, substream(12, 0))
    got = vmav_integral(spec, StepProcess(knots, values), 1.0, w, 0.0, 1e-10).total
    assert got == pytest.approx(_step_oracle(spec, knots, values, w, 1.0), abs=1e-6)


def test_causality():
    m = compound_poisson(NormalSizes(0.0, 0.5), 2.0)
    spec = VmavSpec(m, gamma_kernel(0.7, 0.5))
    Y = NestedVmav(m, 0.7, 0.0)
    w = sample_config(m, 0.6, 0.0, substream(5, 0))
    a = vmav_integral(spec, Y, 0.6, w, 0.0)
    b = vmav_integral(spec, Y, 0.6, add_point(add_point(w, (0.7, 0.3)), (0.9, -0.2)), 0.0)
    assert a.total == b.total


def test_linear_in_the_integrand():
    m = compound_poisson(NormalSizes(0.0, 0.5), 2.0)
    spec = VmavSpec(m, gamma_kernel(0.7, 0.5))
    w = sample_config(m, 1.0, 0.0, substream(6, 0))
    y1, y2 = NestedVmav(m, 0.7, 0.0), ConstantProcess(1.0)

    class Combo(NestedVmav):
        def __call__(self, s, w):
            return 2.0 * super().__call__(s, w) - 3.0

        def increment(self, s, d, w):
            return 2.0 * super().increment(s, d, w)

        def jump_response(self, d):
            return 2.0 * super().jump_response(d)

    c = vmav_integral(spec, Combo(m, 0.7, 0.0), 1.0, w, 0.0).total
    a = vmav_integral(spec, y1, 1.0, w, 0.0).total
    b = vmav_integral(spec, y2, 1.0, w, 0.0).total
    assert c == pytest.approx(2 * a - 3 * b, abs=1e-8)


# -- hypotheses, cases, bounds ---------------------------------------------------


def test_hypotheses_finite_case():
    hyp = hypotheses_check(VmavSpec(alpha_stable(1.0, 0.5), gamma_kernel(0.7)), 1.0)
    assert all(h.finite for h in hyp.values())


def test_hypotheses_divergent_case():
    hyp = hypotheses_check(VmavSpec(alpha_stable(1.0, 1.5), gamma_kernel(0.3)), 1.0)
    assert hyp["H2"].status == "divergent"


def test_hypotheses_zero_kernel():
    spec = VmavSpec(alpha_stable(1.0, 1.5), VolterraKernel(0.3, scale=0.0))
    hyp = hypotheses_check(spec, 1.0)
    assert all(h.finite and h.value == 0.0 for h in hyp.values())


def test_hypotheses_general_driver():
    hyp = hypotheses_check(VmavSpec(FINITE, gamma_kernel(0.7, 0.5)), 1.0)
    assert all(h.finite for h in hyp.values())


def test_case_table():
    assert case_classify(0.5, 0.7) == {"in_L1": True, "in_L2": True}
    assert case_classify(1.5, 0.7) == {"in_L1": False, "in_L2": True}
    assert case_classify(0.5, 0.3) == {"in_L1": True, "in_L2": False}
    assert case_classify(1.5, 0.3) == {"in_L1": False, "in_L2": False}
    assert [case_number(a, b) for a, b in [(0.5, 0.7), (1.5, 0.7), (0.5, 0.3), (1.5, 0.3)]] == [1, 2, 3, 4]
    assert case_classify(0.5, 0.5) == {"in_L1": True, "in_L2": False}
    with pytest.raises(ValueError):
        case_classify(2.0, 0.5)
    with pytest.raises(ValueError):
        case_classify(0.5, 1.0)


def test_beta_bound_half_half():
    rep = beta_bound_check(0.5, 0.5, 1.0)
    assert rep.quadrature == pytest.approx(special.beta(0.5, 1.5), abs=1e-8)
    assert rep.quadrature == pytest.approx(math.pi / 2, abs=1e-8)


def test_beta_bound_trivial_and_damped():
    rep = beta_bound_check(1.0, 0.0, 2.5)
    assert rep.quadrature == pytest.approx(2.5, abs=1e-10)
    assert beta_bound_check(0.5, 0.5, 1.0, lam=2.0).damped < rep.quadrature
    assert beta_bound_check(0.4, 0.8, 1.7).damped_below


@settings(max_examples=20, deadline=None)
@given(st.floats(0.1, 1.0), st.floats(0.0, 2.0), st.floats(0.2, 3.0))
def test_beta_identity(beta, gamma, t):
    rep = beta_bound_check(beta, gamma, t, 1e-11)
    assert rep.abs_error < 1e-8 * max(1.0, rep.closed_form)
    assert rep.damped_below


def test_default_truncation():
    m = alpha_stable(1.0, 0.5)
    eps = default_truncation(m, 1.0)
    assert truncation_error_l1(m, 1.0, eps).value < 1e-3
    assert truncation_error_l1(m, 1.0, eps * 1.02).value >= 1e-3
    with pytest.raises(DivergenceError):
        default_truncation(alpha_stable(1.0, 1.5), 1.0)


@pytest.mark.slow
def test_witness_l1_beyond_l2():
    w = integrability_witness(0.5, 0.3)
    assert w["l1_ok"] and not w["l2_ok"]
    w = integrability_witness(1.5, 0.3)
    assert not w["l1_ok"] and not w["l2_ok"]
    w = integrability_witness(0.5, 0.7)
    assert w["l1_ok"] and w["l2_ok"]
