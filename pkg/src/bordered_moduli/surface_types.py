"""Topological types of bordered and compact symmetric Riemann surfaces.

A bordered surface of type ``(g, h)`` doubles to a closed surface of genus
``2g + h - 1`` carrying an antiholomorphic involution.  Closed symmetric
surfaces are classified by the triple ``(g_tilde, h, k)``.
"""

from __future__ import annotations

from dataclasses import dataclass


class DomainError(ValueError):
    """An input lies outside the domain of an operation."""


class ConsistencyError(RuntimeError):
    """Two independent computations of the same quantity disagree."""


@dataclass(frozen=True)
class TopType:
    g: int
    h: int

    def __post_init__(self):
        if self.g < 0:
            raise DomainError(f"genus g={self.g} must be nonnegative")
        if self.h < 1:
            raise DomainError(f"boundary count h={self.h} must be positive")

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.g - self.h

    @property
    def stable(self) -> bool:
        return self.euler_characteristic < 0


@dataclass(frozen=True)
class MarkedTopType:
    """Type ``(g, h)`` with ``n`` interior and ``m[i]`` boundary marked points."""

    base: TopType
    n: int = 0
    m: tuple[int, ...] = ()

    def __post_init__(self):
        m = tuple(int(x) for x in self.m) if self.m else (0,) * self.base.h
        object.__setattr__(self, "m", m)
        if self.n < 0:
            raise DomainError(f"interior marked count n={self.n} must be nonnegative")
        if len(m) != self.base.h:
            raise DomainError(f"m={m} must have length h={self.base.h}")
        if any(x < 0 for x in m):
            raise DomainError(f"boundary marked counts m={m} must be nonnegative")

    @classmethod
    def of(cls, g: int, h: int, n: int = 0, m=None) -> "MarkedTopType":
        return cls(TopType(g, h), n, tuple(m) if m is not None else ())

    @property
    def g(self) -> int:
        return self.base.g

    @property
    def h(self) -> int:
        return self.base.h

    def __str__(self):
        return f"({self.g},{self.h}),({self.n},{self.m})"


@dataclass(frozen=True)
class SymType:
    """Invariants of a closed symmetric surface.

    ``h`` counts components of the real locus, ``k`` is the index of
    orientability (0 when the complement of the real locus is disconnected).
    """

    g_tilde: int
    h: int
    k: int

    def __post_init__(self):
        if not is_valid_symtype(self.g_tilde, self.h, self.k):
            raise DomainError(f"no symmetric surface has invariants {tuple(self)}")

    def __iter__(self):
        return iter((self.g_tilde, self.h, self.k))


@dataclass(frozen=True)
class Quotient:
    """Quotient surface: orientable of genus ``g``, or ``g`` crosscaps, with ``h`` holes."""

    orientable: bool
    g: int
    h: int


def is_valid_symtype(g_tilde: int, h: int, k: int) -> bool:
    if g_tilde < 0 or k not in (0, 1) or not 0 <= h <= g_tilde + 1:
        return False
    if k == 0:
        return h > 0 and (h - g_tilde - 1) % 2 == 0
    return h <= g_tilde


def complex_double(t: TopType) -> int:
    return 2 * t.g + t.h - 1


def is_stable(t: TopType) -> bool:
    return 2 - 2 * t.g - t.h < 0


def classify_symmetric(g_tilde: int) -> list[SymType]:
    """All topological types of symmetric surfaces of genus ``g_tilde``.

    The list has ``(3 * g_tilde + 4) // 2`` entries, orientable quotients
    first, each group ordered by ``h``.
    """
    if g_tilde < 0:
        raise DomainError(f"g_tilde={g_tilde} must be nonnegative")
    return [
        SymType(g_tilde, h, k)
        for k in (0, 1)
        for h in range(g_tilde + 2)
        if is_valid_symtype(g_tilde, h, k)
    ]


def quotient_type(s: SymType) -> Quotient:
    g_tilde, h, k = s
    if not is_valid_symtype(g_tilde, h, k):
        raise DomainError(f"invalid SymType {(g_tilde, h, k)}")
    if k == 0:
        return Quotient(True, (g_tilde - h + 1) // 2, h)
    return Quotient(False, g_tilde - h + 1, h)
