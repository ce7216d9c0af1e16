"""Pathwise Malliavin-Skorohod calculus for pure-jump additive noise.

Submodules:

``measure``    jump measures, regions, quadrature against ``nu``
``canonical``  finite jump configurations and the add/remove maps
``sampler``    seeded Poisson sampling of configurations
``operators``  transfer, pathwise sum, ``Psi``, ``Phi`` and the compensator term
``chaos``      product-kernel multiple integrals and the bridging checks
``cho``        Clark-Haussmann-Ocone reconstruction by nested Monte Carlo
``volterra``   anticipative integrals against jump-driven Volterra processes
``harness``    identity suite, run configs, CSV output and the CLI
"""
from ._quadrature import DivergenceError
from .canonical import EMPTY, JumpConfiguration, add_point, project, remove_point
from .measure import (InfiniteMassError, JumpMeasure, Region, alpha_stable,
                      compound_poisson, measure_from_spec, product_measure,
                      standard_poisson)
from .operators import Functional, RandomField, ecal, phi, psi, s_integral, transfer
from .sampler import sample_config, substream

__version__ = "0.1.0"

__all__ = [
    "DivergenceError", "InfiniteMassError", "JumpConfiguration", "EMPTY", "add_point",
    "remove_point", "project", "JumpMeasure", "Region", "standard_poisson",
    "compound_poisson", "alpha_stable", "product_measure", "measure_from_spec",
    "Functional", "RandomField", "transfer", "psi", "s_integral", "ecal", "phi",
    "sample_config", "substream", "__version__",
]
