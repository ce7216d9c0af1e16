"""Replica scheduling, identity reports and deterministic CSV output."""
from __future__ import annotations

import logging
import math
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .._quadrature import DivergenceError
from .config import ExperimentConfig
from .identities import REGISTRY, evaluate_chunk

log = logging.getLogger(__name__)

CSV_VERSION = 1
CHUNK = 2000

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_DIVERGENCE = 0, 1, 2, 3


def fmt(v: float) -> str:
    """Shortest round-trip text for a float; platform independent."""
    return repr(float(v))


def write_csv_atomic(path: Path, header_comment: str, columns: Iterable[str],
                     rows: Iterable[Iterable]) -> Path:
    """Write ``# header`` + column line + rows via a temp file and an atomic rename."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(f"# {header_comment}\n")
            fh.write(",".join(columns) + "\n")
            for row in rows:
                fh.write(",".join(fmt(c) if isinstance(c, float) else str(c) for c in row) + "\n")
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise
    return path


def csv_header(kind: str, **meta) -> str:
    extra = " ".join(f"{k}={v}" for k, v in meta.items())
    return f"jumpcalc {kind} v{CSV_VERSION}" + (f" {extra}" if extra else "")


@dataclass
class IdentityReport:
    name: str
    formula: str
    kind: str
    lhs: float
    rhs: float
    se_lhs: float
    se_rhs: float
    discrepancy: float
    threshold: float
    passed: bool
    replicas: int
    criterion: str
    oracle: float | None = None
    diverged: bool = False
    message: str = ""
    wall_time: float = 0.0
    lhs_values: np.ndarray = field(default=None, repr=False)
    rhs_values: np.ndarray = field(default=None, repr=False)

    def line(self) -> str:
        status = "PASS" if self.passed else ("DIVERGED" if self.diverged else "FAIL")
        tail = f" oracle={self.oracle:g}" if self.oracle is not None else ""
        return (f"{status} {self.name}: lhs={self.lhs:.10g} rhs={self.rhs:.10g} "
                f"|d|={self.discrepancy:.3g} <= {self.threshold:.3g} [{self.criterion}]{tail} "
                f"n={self.replicas} ({self.wall_time:.1f}s)")

    SUMMARY_COLUMNS = ("identity", "kind", "lhs", "rhs", "se_lhs", "se_rhs", "discrepancy",
                       "threshold", "criterion", "oracle", "replicas", "passed")

    def summary_row(self) -> list:
        return [self.name, self.kind, self.lhs, self.rhs, self.se_lhs, self.se_rhs,
                self.discrepancy, self.threshold, self.criterion,
                "" if self.oracle is None else float(self.oracle), self.replicas,
                "pass" if self.passed else ("diverged" if self.diverged else "fail")]


def _chunks(n: int, size: int = CHUNK) -> list[tuple[int, int]]:
    return [(a, min(a + size, n)) for a in range(0, n, size)]


def _collect(cfg: dict, name: str, n: int, workers: int) -> tuple[np.ndarray, np.ndarray]:
    spans = _chunks(n)
    if workers <= 1 or len(spans) == 1:
        parts = [evaluate_chunk(cfg, name, a, b) for a, b in spans]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(evaluate_chunk, cfg, name, a, b) for a, b in spans]
            parts = [f.result() for f in futures]
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def _se(x: np.ndarray) -> float:
    return float(np.std(x, ddof=1) / math.sqrt(len(x))) if len(x) > 1 else math.inf


def verify_identity(name: str, config: ExperimentConfig) -> IdentityReport:
    """Run one registered identity under ``config`` and judge it."""
    if name not in REGISTRY:
        raise KeyError(f"unknown identity {name!r}")
    ident = REGISTRY[name]
    tol_path = config.tolerances.get("pathwise", 1e-10)
    k_sigma = config.tolerances.get("sigma", 3.0)
    oracle = config.oracle.get(name)
    started = time.perf_counter()
    n = config.replicas
    try:
        lhs, rhs = _collect(config.to_dict(), name, n, config.workers)
    except DivergenceError as exc:
        return IdentityReport(name, ident.formula, ident.kind, math.nan, math.nan, math.nan,
                              math.nan, math.nan, math.nan, False, n, "diverged", oracle,
                              True, str(exc), time.perf_counter() - started)
    if ident.kind == "expectation":
        ml, mr = float(lhs.mean()), float(rhs.mean())
        sl, sr = _se(lhs), _se(rhs)
        # the floor keeps exactly computed sides (zero spread) comparable
        floor = tol_path * max(1.0, abs(ml), abs(mr))
        disc = abs(ml - mr)
        thr = k_sigma * math.hypot(sl, sr) + floor
        ok = disc <= thr
        if oracle is not None:
            ok = ok and abs(ml - oracle) <= k_sigma * sl + floor \
                and abs(mr - oracle) <= k_sigma * sr + floor
        crit = f"{k_sigma:g} sigma"
    else:
        scale = np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
        rel = np.abs(lhs - rhs) / scale
        ml, mr, sl, sr = float(lhs.mean()), float(rhs.mean()), math.nan, math.nan
        disc = float(rel.max()) if len(rel) else 0.0
        thr = tol_path
        ok = bool(np.all(np.isfinite(rel))) and disc < thr
        crit = f"relative {tol_path:g}"
    return IdentityReport(name, ident.formula, ident.kind, ml, mr, sl, sr, disc, thr, bool(ok),
                          n, crit, oracle, False, "", time.perf_counter() - started, lhs, rhs)


def write_identity_csv(report: IdentityReport, out: Path, experiment: str, seed: int) -> Path:
    rows = [[i, float(a), float(b)] for i, (a, b) in
            enumerate(zip(report.lhs_values if report.lhs_values is not None else [],
                          report.rhs_values if report.rhs_values is not None else []))]
    rows.append(["summary", report.lhs, report.rhs])
    header = csv_header("identity", experiment=experiment, identity=report.name, seed=seed,
                        formula=f'"{report.formula}"')
    return write_csv_atomic(out / f"{report.name}.csv", header, ("replica", "lhs", "rhs"), rows)


def run_suite(config: ExperimentConfig, names: list[str] | None = None,
              echo=print) -> tuple[list[IdentityReport], int]:
    """Run identities, write per-identity CSVs and ``summary.csv``; return reports and exit code."""
    names = names or config.identities or list(REGISTRY)
    out = Path(config.out)
    reports = []
    for name in names:
        echo(f"== {name}: {REGISTRY[name].formula}")
        rep = verify_identity(name, config)
        echo(rep.line())
        if rep.diverged:
            echo(f"   divergence: {rep.message}")
        write_identity_csv(rep, out, config.experiment, config.seed)
        reports.append(rep)
    write_csv_atomic(out / "summary.csv",
                     csv_header("summary", experiment=config.experiment, seed=config.seed),
                     IdentityReport.SUMMARY_COLUMNS, [r.summary_row() for r in reports])
    return reports, exit_code(reports)


def exit_code(reports: list[IdentityReport]) -> int:
    if any(r.diverged for r in reports):
        return EXIT_DIVERGENCE
    if not all(r.passed for r in reports):
        return EXIT_FAIL
    return EXIT_PASS
