"""Experiment runner: identity suite, run configs, CSV output and the CLI."""
from .config import ConfigError, ExperimentConfig, load, loads
from .identities import REGISTRY
from .runner import IdentityReport, run_suite, verify_identity

__all__ = ["ConfigError", "ExperimentConfig", "load", "loads", "REGISTRY",
           "IdentityReport", "run_suite", "verify_identity", "run_experiment"]


def run_experiment(config: ExperimentConfig) -> int:
    """Run every identity named in ``config``; returns the CLI exit code."""
    return run_suite(config)[1]
