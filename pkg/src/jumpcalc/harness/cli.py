"""Command line entry point: ``jumpcalc <subcommand> --config run.yaml``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .._quadrature import DivergenceError
from ..cho import ReconstructionError, cho_reconstruct
from ..measure import InfiniteMassError, Region, alpha_stable, measure_from_spec
from ..sampler import sample_config, substream
from ..volterra import (NestedVmav, VmavSpec, case_classify, case_number, default_truncation,
                        gamma_kernel, hypotheses_check, vmav_integral)
from .catalog import build_functional
from .config import ConfigError, ExperimentConfig, load
from .identities import REGISTRY
from .runner import (EXIT_CONFIG, EXIT_DIVERGENCE, EXIT_FAIL, EXIT_PASS, csv_header,
                     run_suite, write_csv_atomic)

log = logging.getLogger("jumpcalc")

SIMULATE_TAG = 5
CLASSIFY_GRID = ((0.5, 0.7), (1.5, 0.7), (0.5, 0.3), (1.5, 0.3))


def cmd_simulate(cfg: ExperimentConfig) -> int:
    m = measure_from_spec(cfg.measure)
    rows = []
    for i in range(cfg.replicas):
        w = sample_config(m, cfg.T, cfg.eps, substream(cfg.seed, i, SIMULATE_TAG))
        rows += [[i, t, x] for t, x in w.points]
    path = write_csv_atomic(Path(cfg.out) / "paths.csv",
                            csv_header("paths", experiment=cfg.experiment, seed=cfg.seed),
                            ("path_id", "time", "size"), rows)
    print(f"wrote {cfg.replicas} paths ({len(rows)} jumps) to {path}")
    return EXIT_PASS


def cmd_verify(cfg: ExperimentConfig) -> int:
    _, code = run_suite(cfg)
    print({EXIT_PASS: "all identities pass", EXIT_FAIL: "identity failure",
           EXIT_DIVERGENCE: "numeric divergence"}[code])
    return code


def cmd_verify_cho(cfg: ExperimentConfig) -> int:
    spec = cfg.cho
    m = measure_from_spec(cfg.measure)
    F = build_functional(spec.get("functional", {"name": "count"}), m, cfg.T, cfg.eps)
    tol = float(spec.get("tolerance", 0.05))
    rep = cho_reconstruct(F, m, cfg.T, cfg.eps, int(spec.get("N_outer", cfg.replicas)),
                          int(spec.get("M_inner", 200)), cfg.seed,
                          n_time=int(spec.get("n_time", 4)), n_size=int(spec.get("n_size", 8)))
    rows = [list(r) for r in rep.rows]
    write_csv_atomic(Path(cfg.out) / "cho.csv",
                     csv_header("cho", experiment=cfg.experiment, seed=cfg.seed, functional=F.name),
                     ("path_id", "F_value", "reconstruction", "abs_error"), rows)
    ok = rep.l1_relative_error < tol
    print(f"{'PASS' if ok else 'FAIL'} cho {F.name}: E F = {rep.mean_F:.10g}, "
          f"L1 relative error {rep.l1_relative_error:.3g} (< {tol:g}), "
          f"max abs error {rep.max_abs_error:.3g}")
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_volterra(cfg: ExperimentConfig) -> int:
    v = cfg.volterra
    alpha, beta = float(v.get("alpha", 0.5)), float(v.get("beta", 0.7))
    lam, gamma = float(v.get("lambda", 0.0)), float(v.get("gamma", 1.0))
    t, c = float(v.get("t", cfg.T)), float(v.get("c", 1.0))
    driver = alpha_stable(c, alpha)
    spec = VmavSpec(driver, gamma_kernel(beta, lam))
    print(f"case ({case_number(alpha, beta)}): {case_classify(alpha, beta)}")
    hyp = hypotheses_check(spec, t)
    for k, st in hyp.items():
        print(f"  {k}: {st.status}" + (f" ({st.value:.6g})" if st.finite else ""))
    if not all(st.finite for st in hyp.values()):
        print("X(t) is not well defined for these parameters")
        return EXIT_DIVERGENCE
    eps = v.get("truncation")
    eps = float(eps) if eps is not None else default_truncation(driver, t)
    expected = driver.mass(Region(0.0, t, eps, 1.0))
    if expected > 2000:
        log.warning("truncation %.3g keeps about %.0f jumps per path; this will be slow",
                    eps, expected)
    Y = NestedVmav(driver, gamma, eps)
    rows = []
    for i in range(int(v.get("paths", cfg.replicas))):
        w = sample_config(driver, t, eps, substream(cfg.seed, i, SIMULATE_TAG))
        w = w.filter(lambda p: abs(p[1]) <= 1.0)
        r = vmav_integral(spec, Y, t, w, eps)
        rows.append([i, r.total, r.phi_main, r.phi_correction, r.ecal_correction])
    write_csv_atomic(Path(cfg.out) / "volterra.csv",
                     csv_header("volterra", experiment=cfg.experiment, seed=cfg.seed, alpha=alpha,
                                beta=beta, lam=lam, gamma=gamma, t=t, truncation=eps),
                     ("path_id", "integral", "phi_main", "phi_correction", "ecal_correction"), rows)
    print(f"wrote {len(rows)} path integrals at truncation {eps:.3g}")
    return EXIT_PASS


def cmd_classify(cfg: ExperimentConfig | None) -> int:
    v = cfg.volterra if cfg is not None else {}
    grid = [(float(v["alpha"]), float(v["beta"]))] if "alpha" in v and "beta" in v else CLASSIFY_GRID
    rows = []
    for a, b in grid:
        cls = case_classify(a, b)
        n = case_number(a, b)
        rows.append([a, b, str(cls["in_L1"]).lower(), str(cls["in_L2"]).lower(), n])
        print(f"alpha={a:g} beta={b:g}: L1={cls['in_L1']} L2={cls['in_L2']} case ({n})")
    if cfg is not None:
        write_csv_atomic(Path(cfg.out) / "classify.csv",
                         csv_header("classify", experiment=cfg.experiment),
                         ("alpha", "beta", "in_L1", "in_L2", "case"), rows)
    return EXIT_PASS


COMMANDS = {
    "simulate": (cmd_simulate, "sample configurations and dump them as CSV"),
    "verify": (cmd_verify, "run the identity suite"),
    "verify-cho": (cmd_verify_cho, "reconstruct a functional from its CHO representation"),
    "volterra": (cmd_volterra, "anticipative integrals against a Volterra process"),
    "classify": (cmd_classify, "L1/L2 case table for the gamma kernel with a stable driver"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="jumpcalc", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", type=Path, required=name != "classify")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--out")
        sp.add_argument("--replicas", type=int)
    sub.add_parser("identities", help="list registered identities")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "identities":
        for name, ident in REGISTRY.items():
            print(f"{name:22s} {ident.kind:12s} {ident.formula}")
        return EXIT_PASS
    fn = COMMANDS[args.command][0]
    try:
        cfg = load(args.config) if args.config else None
        if cfg is not None:
            cfg = cfg.with_overrides(args.seed, args.replicas, args.out)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return fn(cfg)
    except (DivergenceError, InfiniteMassError, ReconstructionError) as exc:
        print(f"numeric divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except (KeyError, TypeError, ValueError) as exc:
        # catalog lookups that only fail once a run starts
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
