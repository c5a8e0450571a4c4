"""Numerics for compatible triples, polarizations and Siegel disks.

The package realizes, in explicit finite-dimensional linear algebra:
compatible triples (g, J, omega) and their completions; polarizations of
complexified spaces; the Siegel disk with its block symplectic action;
charted orthogonal Grassmannians; truncated circle models built from
composition operators; and fermionic Fock representations with exact
anticommutation checks.  The ``polargrass`` CLI exposes each piece as a
batch verb producing JSON reports.
"""

from .errors import DomainError, FormatError, PolargrassError
from .linalg import DEFAULT_TOL, Frame, Tolerances, principal_angle_distance
from .polarization import (
    ComplexifiedSpace,
    EigenSplit,
    OrthogonalPolarization,
    PositiveSymplecticPolarization,
    complexify,
    eigensplit,
)
from .siegel import BlockSymplectic, SiegelPoint, mobius_act, sp_from_siegel_point
from .triples import (
    BilinearForm,
    CompatibleTriple,
    ComplexStructure,
    complete_from_g_J,
    complete_from_g_omega,
    complete_from_J_omega,
    pullback_triple,
    standard_triple,
    verify_triple,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "PolargrassError",
    "FormatError",
    "DomainError",
    "Tolerances",
    "DEFAULT_TOL",
    "Frame",
    "principal_angle_distance",
    "BilinearForm",
    "ComplexStructure",
    "CompatibleTriple",
    "standard_triple",
    "pullback_triple",
    "verify_triple",
    "complete_from_g_J",
    "complete_from_g_omega",
    "complete_from_J_omega",
    "ComplexifiedSpace",
    "EigenSplit",
    "complexify",
    "eigensplit",
    "OrthogonalPolarization",
    "PositiveSymplecticPolarization",
    "SiegelPoint",
    "BlockSymplectic",
    "mobius_act",
    "sp_from_siegel_point",
]
