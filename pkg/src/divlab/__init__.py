"""divlab: a numerical laboratory for quantum divergences and the convexity
properties of the trace functionals behind their data processing inequalities."""

__version__ = "0.1.0"

from .divergences import (
    bs_entropy,
    classical_relative_entropy,
    classical_renyi,
    d_alpha_z,
    d_renyi,
    d_sandwiched,
    hiai_concavity_functional,
    psi,
    umegaki,
    upsilon,
    von_neumann_entropy,
)
from .params import ParamPoint
from .regions import RegionKind, RegionLabel, classify, classify_upsilon
from .tolerances import Tolerances, get_tolerances

__all__ = [
    "ParamPoint",
    "RegionKind",
    "RegionLabel",
    "Tolerances",
    "bs_entropy",
    "classical_relative_entropy",
    "classical_renyi",
    "classify",
    "classify_upsilon",
    "d_alpha_z",
    "d_renyi",
    "d_sandwiched",
    "get_tolerances",
    "hiai_concavity_functional",
    "psi",
    "umegaki",
    "upsilon",
    "von_neumann_entropy",
]
