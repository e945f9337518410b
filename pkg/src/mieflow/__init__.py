"""Measurement-induced entanglement (MIE) and information (MII) toolkit.

Computes Born-averaged post-measurement entanglement for a zoo of exactly
solvable many-body ground states: free-fermion chains and 2d lattices
(correlation-matrix Gaussian formalism), random-singlet chains (strong
disorder RG + teleportation combinatorics), toric-code / abelian quantum
double states (prime-qudit stabilizer formalism) and large-bond-dimension
MERA networks (min-cut geometry).  A dense statevector oracle provides
ground truth on small systems.
"""

from .oracle import StateVector, ProductBasis
from .gaussian import GaussianState, TrajectoryRecord
from .lattices import RegionSpec
from .estimator import EstimatorResult, SeriesResult

__version__ = "0.1.0"

__all__ = [
    "StateVector",
    "ProductBasis",
    "GaussianState",
    "TrajectoryRecord",
    "RegionSpec",
    "EstimatorResult",
    "SeriesResult",
    "__version__",
]
