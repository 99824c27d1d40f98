"""Exact Mukai-lattice arithmetic, Bridgeland wall geometry and reduction traces for K3 surfaces."""

from __future__ import annotations

from .errors import (
    ConsistencyError,
    DomainError,
    LatticeMismatchError,
    MukaiError,
    ParseError,
    ResourceError,
    UnresolvedError,
)
from .lattice import Isometry, MukaiVector, NSLattice, mukai_pairing
from .stability import StabParam, central_charge, slope

__version__ = "0.1.0"

__all__ = [
    "ConsistencyError",
    "DomainError",
    "Isometry",
    "LatticeMismatchError",
    "MukaiError",
    "MukaiVector",
    "NSLattice",
    "ParseError",
    "ResourceError",
    "StabParam",
    "UnresolvedError",
    "central_charge",
    "mukai_pairing",
    "slope",
]
