"""banachlab: exact and certified computations for exotic sequence-space
norms, special-partition combinatorics, renormings, and finite-scale
asymptotic-model estimation."""

__version__ = "0.1.0"

from .finvec import FinVec  # noqa: F401
