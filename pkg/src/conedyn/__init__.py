"""Exact dynamics of matrix groups preserving polyhedral cones.

Submodules: ``exact_linalg``, ``cones``, ``model_en``, ``dyn_degrees``,
``dyn_rank``, ``free_group`` and the ``cli`` entry point.
"""

__version__ = "0.1.0"

from .cones import PolyCone, common_eigenvector, pf_eigenvector
from .dyn_degrees import dynamical_degrees, model_profile
from .dyn_rank import GroupRep, build_quasi_nef_sequence, dynamical_rank
from .errors import ConeDynError, PreconditionError, SchemaError, VerificationError
from .exact.matrix import ExactMatrix
from .exact_linalg import is_spectral_radius_one, spectral_radius

__all__ = [
    "ConeDynError",
    "ExactMatrix",
    "GroupRep",
    "PolyCone",
    "PreconditionError",
    "SchemaError",
    "VerificationError",
    "build_quasi_nef_sequence",
    "common_eigenvector",
    "dynamical_degrees",
    "dynamical_rank",
    "is_spectral_radius_one",
    "model_profile",
    "pf_eigenvector",
    "spectral_radius",
]
