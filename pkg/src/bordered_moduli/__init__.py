"""Combinatorics, index theory, multiple-cover invariants and gluing checks
for moduli spaces of bordered Riemann surfaces."""

from .surface_types import (
    ConsistencyError,
    DomainError,
    MarkedTopType,
    Quotient,
    SymType,
    TopType,
    classify_symmetric,
    complex_double,
    is_stable,
    quotient_type,
)
from .strata import (
    BoundaryCircle,
    Piece,
    StratumGraph,
    StructuralError,
    degeneration_poset,
    enumerate_closed_strata,
    enumerate_strata,
    stratum_dim,
    total_type,
)

__version__ = "0.1.0"
