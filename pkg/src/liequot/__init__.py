"""Exact Lie-theoretic and convex-geometric computations for torus and compact-group quotients.

Modules
-------
lie_core      root systems, Weyl groups, chamber faces, weights of irreducibles
reduction     pointwise Kähler reduction linear algebra and projection identities
implosion     coadjoint-orbit metrics, the implosion embedding and its moment maps
vgit          torus semistability, the numerical function, walls and chambers
master_space  weight-level master-space constructions
estimators    fit/predict wrappers around the chamber machinery
"""

from .errors import (
    CapabilityError,
    ConfigurationError,
    DegeneratePointError,
    DomainError,
    LiequotError,
    PreconditionError,
)
from .lie_core import Face, RootSystem, WeylGroup, build_root_system, face_of, faces, weights_of_irrep
from .vgit import (
    ChamberDecomposition,
    MValue,
    WeightConfig,
    chambers,
    is_semistable,
    is_stable,
    m_function,
    walls,
)
from .estimators import ChamberDecomposer, SemistabilityTransformer

__version__ = "0.1.0"

__all__ = [
    "CapabilityError",
    "ChamberDecomposer",
    "ChamberDecomposition",
    "ConfigurationError",
    "DegeneratePointError",
    "DomainError",
    "Face",
    "LiequotError",
    "MValue",
    "PreconditionError",
    "RootSystem",
    "SemistabilityTransformer",
    "WeightConfig",
    "WeylGroup",
    "build_root_system",
    "chambers",
    "face_of",
    "faces",
    "is_semistable",
    "is_stable",
    "m_function",
    "walls",
    "weights_of_irrep",
]
