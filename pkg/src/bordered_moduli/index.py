"""Dimension and index formulas for moduli of bordered surfaces and maps.

All arithmetic is on Python integers.  ``mu`` is the Maslov index of the
bundle pair, ``N`` the complex dimension of the target.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Iterable

from .surface_types import ConsistencyError, DomainError, MarkedTopType, TopType


@dataclass(frozen=True)
class DeformationDims:
    deform: int
    interior: int
    boundary: int
    aut: int = 0


@dataclass(frozen=True)
class IndexReport:
    maslov: int
    ambient_half_dim: int
    fredholm_index: int
    moduli_dim: int
    virtual_dim: int
    deformation_dims: DeformationDims

    def __post_init__(self):
        if self.maslov % 2:
            raise DomainError(f"Maslov index mu={self.maslov} must be even")
        if self.virtual_dim != self.fredholm_index + self.moduli_dim:
            raise ConsistencyError("virtual_dim != fredholm_index + moduli_dim")

    def to_dict(self) -> dict:
        return asdict(self)


def _require_even(mu: int) -> None:
    if mu % 2:
        raise DomainError(f"Maslov index mu={mu} must be even for an oriented Lagrangian")


def moduli_dim(t: MarkedTopType) -> int:
    return 6 * t.g + 3 * t.h - 6 + 2 * t.n + sum(t.m)


def fredholm_index_smooth(mu: int, N: int, g: int, h: int) -> int:
    _require_even(mu)
    return mu + N * (2 - 2 * g - h)


def fredholm_index_nodal(mu: int, N: int, g_tilde: int) -> int:
    """Index of the linearized operator on a nodal domain with double of arithmetic genus ``g_tilde``."""
    _require_even(mu)
    return mu + N * (1 - g_tilde)


def arithmetic_genus(pieces: Iterable[tuple[int, int]], l0: int, l1: int) -> int:
    """Arithmetic genus of the complex double of a nodal bordered surface.

    ``pieces`` holds ``(genus, circles)`` per component of the normalization,
    where ``circles`` counts uncollapsed boundary circles (0 for a closed
    component).  ``l0`` and ``l1`` count interior and boundary nodes; a
    collapsed circle is a boundary node.
    """
    total = 0
    for genus, circles in pieces:
        if circles:
            total += 2 * genus + circles - 2
        else:
            total += 2 * (genus - 1)
    return total + 2 * l0 + l1 + 1


def virtual_dim(mu: int, N: int, t: MarkedTopType) -> int:
    _require_even(mu)
    return mu + (N - 3) * (2 - 2 * t.g - t.h) + 2 * t.n + sum(t.m)


def map_deformation_dim(mu: int, N: int, g_tilde: int, obstruction_dim: int) -> int:
    """Dimension of the map-deformation space once an obstruction space is chosen."""
    if obstruction_dim < 0:
        raise DomainError(f"obstruction_dim={obstruction_dim} must be nonnegative")
    return fredholm_index_nodal(mu, N, g_tilde) + obstruction_dim


def smooth_aut_dim(g: int, circles: int, n: int, m: int) -> int:
    """Real dimension of the automorphism group of a smooth marked piece.

    ``circles == 0`` means a closed surface with ``n`` marked points.
    """
    if circles == 0:
        if g == 0:
            return max(0, 6 - 2 * n)
        if g == 1:
            return 2 if n == 0 else 0
        return 0
    if g == 0 and circles == 1:
        if n == 0:
            return max(0, 3 - m)
        if n == 1:
            return 1 if m == 0 else 0
        return 0
    if g == 0 and circles == 2 and n == 0 and m == 0:
        return 1
    return 0


def deformation_dims(s, n: int | None = None, m=None) -> DeformationDims:
    """Split the moduli dimension at a stratum into its normal and tangent parts.

    ``n`` and ``m`` default to the marked type recorded on the stratum.
    """
    from .strata import stratum_dim

    t = s.marked_type
    if n is not None and n != t.n or m is not None and tuple(m) != t.m:
        raise DomainError(f"(n, m)=({n}, {m}) does not match stratum type {t}")
    deform = stratum_dim(s)
    interior = 2 * s.l0
    boundary = s.l1
    aut = sum(p.aut_dim for p in s.pieces)
    if deform + interior + boundary - aut != moduli_dim(t):
        raise ConsistencyError(f"deformation dimensions do not add up for {t}")
    return DeformationDims(deform, interior, boundary, aut)


def double_degree(mu: int) -> int:
    _require_even(mu)
    return mu // 2


def total_maslov(closed_degrees: Iterable[int], bordered_maslov: Iterable[int]) -> int:
    """Maslov index of a nodal map from the degrees of its closed components
    and the Maslov indices of its bordered components."""
    bordered = list(bordered_maslov)
    for mu in bordered:
        _require_even(mu)
    return 2 * sum(closed_degrees) + sum(bordered)


def disc_maslov(d: int) -> int:
    """Maslov index of a degree ``d`` disc in (P^1, S^1)."""
    return 2 * d


def maslov_tools(mu: int) -> dict:
    return {"maslov": mu, "double_degree": double_degree(mu)}


def orientability(spin: bool, relatively_spin: bool, h: int) -> bool:
    """Sufficient condition for the moduli of maps to be orientable.

    ``False`` means the criterion does not apply, not that the space is
    non-orientable.
    """
    if h < 1:
        raise DomainError(f"h={h} must be positive")
    return bool(spin or (h == 1 and relatively_spin))


def index_report(mu: int, N: int, t: MarkedTopType, stratum=None) -> IndexReport:
    if N < 1:
        raise DomainError(f"N={N} must be positive")
    _require_even(mu)
    if stratum is not None:
        dims = deformation_dims(stratum)
        fred = fredholm_index_nodal(mu, N, stratum.arithmetic_genus)
    else:
        md = moduli_dim(t)
        dims = DeformationDims(md, 0, 0, 0)
        fred = fredholm_index_smooth(mu, N, t.g, t.h)
    return IndexReport(
        maslov=mu,
        ambient_half_dim=N,
        fredholm_index=fred,
        moduli_dim=moduli_dim(t),
        virtual_dim=virtual_dim(mu, N, t),
        deformation_dims=dims,
    )


__all__ = [
    "DeformationDims",
    "IndexReport",
    "TopType",
    "arithmetic_genus",
    "deformation_dims",
    "disc_maslov",
    "double_degree",
    "fredholm_index_nodal",
    "fredholm_index_smooth",
    "index_report",
    "map_deformation_dim",
    "maslov_tools",
    "moduli_dim",
    "orientability",
    "smooth_aut_dim",
    "total_maslov",
    "virtual_dim",
]
