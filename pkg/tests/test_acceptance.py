"""Acceptance suite: one PASS/FAIL line per criterion, at the stated tolerances and budgets.

Run with ``pytest tests/test_acceptance.py -v``; the verdict lines go straight to the
terminal even when output capture is on.
"""
import filecmp
import math
import time
from pathlib import Path

import numpy as np
import pytest
from scipy import special

from jumpcalc.canonical import add_point, restrict_before
from jumpcalc.cho import cho_reconstruct
from jumpcalc.harness import REGISTRY, load, run_suite, verify_identity
from jumpcalc.harness.catalog import build_functional
from jumpcalc.measure import NormalSizes, PointMasses, Region, compound_poisson, measure_from_spec
from jumpcalc.operators import constant, count, path_functional
from jumpcalc.sampler import sample_config, substream
from jumpcalc.volterra import (NestedVmav, StepProcess, VmavSpec, beta_bound_check,
                               case_classify, gamma_kernel, integrability_witness, kg_operator,
                               psi_kg_closed_form, vmav_integral, vmav_process)

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

pytestmark = pytest.mark.acceptance


@pytest.fixture
def verdict(capsys):
    def emit(label, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} {label}: {detail}")
        return ok
    return emit


def _suite(name, tmp_path, **over):
    cfg = load(CONFIGS / name).with_overrides(out=str(tmp_path), **over)
    started = time.perf_counter()
    reports = [verify_identity(n, cfg) for n in cfg.identities]
    return cfg, reports, time.perf_counter() - started


def test_1_pathwise_rules(verdict, tmp_path):
    cfg, reports, secs = _suite("pathwise.yaml", tmp_path)
    worst = max(r.discrepancy for r in reports)
    ok = cfg.replicas >= 1000 and all(r.passed for r in reports) and worst < 1e-10 and secs < 10
    assert verdict("criterion 1 (pathwise rules)", ok,
                   f"{len(reports)} rules x {cfg.replicas} draws, max rel discrepancy "
                   f"{worst:.2e} (< 1e-10), {secs:.1f}s (< 10s)")


def test_2_expectation_identity(verdict, tmp_path):
    cfg, (rep,), secs = _suite("elau.yaml", tmp_path)
    ok = (cfg.replicas == 100_000 and abs(rep.lhs - 1.0) <= 3 * rep.se_lhs
          and rep.passed and secs < 30)
    assert verdict("criterion 2 (expectation identity)", ok,
                   f"E[Su]={rep.lhs:.5f} sigma={rep.se_lhs:.5f} oracle 1.0, "
                   f"E int u dnu={rep.rhs:.5f}, {secs:.1f}s (< 30s)")


def test_3_dualities(verdict, tmp_path):
    cfg, reports, secs = _suite("duality.yaml", tmp_path)
    parts = [f"{r.name}: {r.lhs:.4f}/{r.rhs:.4f} vs {r.oracle:g}" for r in reports]
    ok = cfg.replicas == 100_000 and all(r.passed and r.oracle is not None for r in reports) \
        and secs < 60
    assert verdict("criterion 3 (dualities)", ok, "; ".join(parts) + f", {secs:.1f}s (< 60s)")


def test_4_chaos_bridges(verdict, tmp_path):
    base = load(CONFIGS / "chaos.yaml")
    started = time.perf_counter()
    worst, ok = 0.0, True
    for k in (1, 2, 3):
        base.chaos = {"order": k}
        cfg = base.with_overrides(replicas=1000, out=str(tmp_path))
        for name in ("chaos-gradient", "chaos-divergence"):
            rep = verify_identity(name, cfg)
            worst = max(worst, rep.discrepancy)
            ok = ok and rep.passed
    secs = time.perf_counter() - started
    ok = ok and worst < 1e-10 and secs < 10
    assert verdict("criterion 4 (chaos bridges)", ok,
                   f"k=1,2,3 x 1000 samples, max discrepancy {worst:.2e} (< 1e-10), "
                   f"{secs:.1f}s (< 10s)")


def test_5_cho_exactness(verdict):
    started = time.perf_counter()
    m = compound_poisson(PointMasses((-0.1, 0.15), (0.6, 0.4)), 2.0)
    R = Region.theta(1.0, 0.0)
    exact = [cho_reconstruct(count(R, m), m, 1.0, 0.0, 200, 4, seed=1),
             cho_reconstruct(path_functional(1.0, m, 0.0), m, 1.0, 0.0, 200, 4, seed=2)]
    cfg = load(CONFIGS / "cho.yaml")
    mp = measure_from_spec(cfg.measure)
    S = build_functional(cfg.cho["functional"], mp, cfg.T, cfg.eps)
    price = cho_reconstruct(S, mp, cfg.T, cfg.eps, 2000, 200, cfg.seed)
    secs = time.perf_counter() - started
    err = max(r.max_abs_error for r in exact)
    ok = err < 1e-8 and price.l1_relative_error < 0.05 and secs < 600
    assert verdict("criterion 5 (CHO exactness)", ok,
                   f"count/L_T max error {err:.2e} (< 1e-8); S_T L1 relative error "
                   f"{price.l1_relative_error:.2e} (< 5%) at 2000x200, {secs:.0f}s (< 600s)")


def test_6_predictability(verdict, tmp_path):
    cfg = load(CONFIGS / "pathwise.yaml").with_overrides(replicas=1000, out=str(tmp_path))
    rep = verify_identity("cho-predictability", cfg)
    ok = rep.replicas == 1000 and np.array_equal(rep.lhs_values, rep.rhs_values)
    changed = int(np.sum(rep.lhs_values != rep.rhs_values))
    assert verdict("criterion 6 (predictability)", ok,
                   f"{changed} of {rep.replicas} trials changed by future points (exact)")


def test_7a_case_table(verdict):
    table = {(0.5, 0.7): (True, True), (1.5, 0.7): (False, True),
             (0.5, 0.3): (True, False), (1.5, 0.3): (False, False)}
    got = {k: tuple(case_classify(*k).values()) for k in table}
    assert verdict("criterion 7a (case table)", got == table, f"{got}")


def test_7b_psi_closed_form(verdict):
    beta, gam = 0.6, 0.6
    g = gamma_kernel(beta)
    m = compound_poisson(NormalSizes(0.0, 0.5), 2.0)
    Y = NestedVmav(m, gam, 0.0)
    rng = np.random.default_rng(72)
    worst = 0.0
    for i in range(100):
        s, x = rng.uniform(0.02, 0.95), rng.uniform(-1.0, 1.0)
        w = sample_config(m, 1.0, 0.0, substream(72, i))
        direct = kg_operator(g, Y, 1.0, s, add_point(w, (s, x)), 1e-12) \
            - kg_operator(g, Y, 1.0, s, w, 1e-12)
        worst = max(worst, abs(psi_kg_closed_form(g, gam, 1.0, s, x, 1e-12) - direct))
    assert verdict("criterion 7b (closed-form Psi of K_g)", worst < 1e-6,
                   f"100 draws, max abs difference {worst:.2e} (< 1e-6)")


def test_7c_beta_bound_literal(verdict):
    rep = beta_bound_check(0.5, 0.5, 1.0)
    err = abs(rep.quadrature - math.pi / 4)
    assert verdict("criterion 7c (beta bound vs pi/4 as stated)", err < 1e-8,
                   f"quadrature {rep.quadrature:.12f}, pi/4 = {math.pi / 4:.12f}, |d|={err:.2e}")


def test_7c_beta_bound_true_value(verdict):
    rep = beta_bound_check(0.5, 0.5, 1.0)
    err = max(abs(rep.quadrature - special.beta(0.5, 1.5)), abs(rep.closed_form - math.pi / 2))
    assert verdict("criterion 7c (beta bound vs B(0.5,1.5) = pi/2)", err < 1e-8,
                   f"quadrature {rep.quadrature:.12f}, |d|={err:.2e} (< 1e-8)")


def _step_oracle(spec, knots, values, w, t):
    X = lambda u: vmav_process(spec, u, w, 0.0, 1e-12)
    return sum(Z(restrict_before(w, a)) * (X(min(b, t)) - X(a))
               for a, b, Z in zip(knots[:-1], knots[1:], values) if a < t)


def test_7d_step_integrand(verdict):
    started = time.perf_counter()
    m = compound_poisson(PointMasses((-0.4, 0.7), (0.8, 0.5)), 1.5)
    spec = VmavSpec(m, gamma_kernel(0.6, 0.5))
    knots, values = [0.0, 0.3, 0.6, 1.0], [constant(1.0), count(), constant(-2.0)]
    worst = 0.0
    for i in range(3):
        w = sample_config(m, 1.0, 0.0, substream(12, i))
        got = vmav_integral(spec, StepProcess(knots, values), 1.0, w, 0.0, 1e-10).total
        worst = max(worst, abs(got - _step_oracle(spec, knots, values, w, 1.0)))
    secs = time.perf_counter() - started
    assert verdict("criterion 7d (step integrand vs Stieltjes oracle)", worst < 1e-6 and secs < 300,
                   f"3 paths, max abs difference {worst:.2e} (< 1e-6), {secs:.0f}s (< 300s)")


def test_8_l1_beyond_l2(verdict):
    started = time.perf_counter()
    a = integrability_witness(0.5, 0.3)
    b = integrability_witness(1.5, 0.3)
    secs = time.perf_counter() - started
    ok = a["l1_ok"] and not a["l2_ok"] and not b["l1_ok"] and not b["l2_ok"] and secs < 300
    assert verdict("criterion 8 (L1 beyond L2 witness)", ok,
                   f"(0.5,0.3): L1={a['l1_ok']} L2={a['l2_ok']}; "
                   f"(1.5,0.3): L1={b['l1_ok']} L2={b['l2_ok']}, {secs:.0f}s (< 300s)")


def test_9_determinism(verdict, tmp_path):
    runs = []
    for tag in ("a", "b"):
        out = tmp_path / tag
        for name in ("pathwise.yaml", "chaos.yaml"):
            cfg = load(CONFIGS / name).with_overrides(out=str(out / name), replicas=300)
            run_suite(cfg, echo=lambda *_: None)
        cfg = load(CONFIGS / "duality.yaml").with_overrides(out=str(out / "all"), replicas=3000)
        run_suite(cfg, names=list(REGISTRY), echo=lambda *_: None)
        runs.append(out)
    files = sorted(p.relative_to(runs[0]) for p in runs[0].rglob("*.csv"))
    same = [filecmp.cmp(runs[0] / f, runs[1] / f, shallow=False) for f in files]
    ok = len(files) > 0 and all(same)
    assert verdict("criterion 9 (determinism)", ok,
                   f"{sum(same)} of {len(files)} CSV files byte-identical across two runs")
