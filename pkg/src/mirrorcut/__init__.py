"""Gaussian-state simulator of a cavity suddenly split in two by a mirror.

The package computes the truncated Bogoliubov transform of the split,
propagates Gaussian states through it, and evaluates particle production
and left/right entanglement for a range of input states.
"""

from .modes import (CavityGeometry, SymplecticTransform, TruncationConfig,
                    build_transform, symplectic_defect)
from .gaussian import (GaussianState, ModePair, log_negativity,
                       mean_particle_number, vacuum, validate)

__version__ = "0.1.0"

__all__ = [
    "CavityGeometry",
    "TruncationConfig",
    "SymplecticTransform",
    "GaussianState",
    "ModePair",
    "build_transform",
    "symplectic_defect",
    "vacuum",
    "validate",
    "log_negativity",
    "mean_particle_number",
    "__version__",
]
