"""Exact type-A Verlinde numbers and their spin / cohomological refinements."""

__version__ = "0.1.0"

from .alcove import AlcoveContext, OrbitInfo, Partition, enumerate_alcove, orbit_info, rho_step
from .arith import (
    CertifiedReal,
    NonIntegral,
    PrecisionExhausted,
    PrecisionPolicy,
)
from .core import (
    coho_verlinde,
    pu_spin_verlinde,
    pu_verlinde,
    spin_admissible_su,
    spin_verlinde,
    verlinde,
)
from .surfaces import SpinStructure

__all__ = [
    "AlcoveContext",
    "CertifiedReal",
    "NonIntegral",
    "OrbitInfo",
    "Partition",
    "PrecisionExhausted",
    "PrecisionPolicy",
    "SpinStructure",
    "coho_verlinde",
    "enumerate_alcove",
    "orbit_info",
    "pu_spin_verlinde",
    "pu_verlinde",
    "rho_step",
    "spin_admissible_su",
    "spin_verlinde",
    "verlinde",
]
