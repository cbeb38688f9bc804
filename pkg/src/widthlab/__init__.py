"""Approximation numbers, entropy numbers and tractability for diagonal
embeddings between weighted periodic function spaces."""

from .approx import (
    ApproxNumberResult,
    BoundPair,
    approx_number,
    approx_number_linf,
    characterization_bounds,
    limit_diagnostic,
    regime_bounds_iso,
)
from .constants import BoundConstants
from .entropy import EntropyEstimate, entropy_bounds
from .errors import (
    AmbiguousBoundaryError,
    CountCeilingError,
    DimensionMismatchError,
    DivergentTailError,
    NonMonotoneProfileError,
    NotRadialError,
    PreconditionError,
    WidthlabError,
)
from .gevrey import gevrey_bounds, gevrey_to_hs, mixed_vs_gevrey_compare
from .lattice import grid_count_hyperbolic, grid_count_pball, volume_pball
from .tractability import classify_gevrey, classify_iso, info_complexity_exact, transfer_identity_check
from .weights import WeightSpec, custom_radial, isotropic, mixed, ratio

__all__ = [name for name in dir() if not name.startswith("_")]
