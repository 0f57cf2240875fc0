"""Exact evaluation of the conjectural multiple-cover invariants of a disc in (P^1, S^1).

For a degree ``d`` cover with winding numbers ``n_1 + ... + n_h = d`` and a
torus weight ``a``, the genus-0 value is the closed form

    F(a) = (a(1-a))^(h-1) * prod_i binom(n_i a - 1, n_i - 1) * d^(h-3),

and the higher-genus value replaces ``d^(h-3)`` by a Hodge integral over the
moduli of stable curves with ``h`` marked points.  Hodge integrals come from a
:class:`HodgeOracle`; nothing here computes them from first principles.

All arithmetic is exact (``fractions.Fraction``).
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from . import hodge
from .surface_types import DomainError

Rational = Fraction


class UnsupportedHodgeIntegral(LookupError):
    """The oracle has no value for a requested Hodge integral."""


def gen_binom(x: int, k: int) -> int:
    """Binomial coefficient ``x(x-1)...(x-k+1)/k!`` for any integer ``x``."""
    if k < 0:
        raise DomainError(f"k={k} must be nonnegative")
    num = 1
    for i in range(k):
        num *= x - i
    return num // math.factorial(k)


def _check_args(h: int, d: int, n, a) -> tuple[int, ...]:
    n = tuple(int(x) for x in n)
    if h < 1 or len(n) != h:
        raise DomainError(f"need h >= 1 winding numbers, got h={h}, n={n}")
    if any(x < 1 for x in n):
        raise DomainError(f"winding numbers {n} must be positive")
    if sum(n) != d:
        raise DomainError(f"winding numbers {n} do not sum to d={d}")
    if isinstance(a, bool) or int(a) != a:
        raise DomainError(f"weight a={a} must be an integer")
    return n


def prefactor(h: int, n, a: int) -> int:
    out = (a * (1 - a)) ** (h - 1)
    for ni in n:
        out *= gen_binom(ni * a - 1, ni - 1)
    return out


def c_genus0(h: int, d: int, n, a: int) -> Fraction:
    n = _check_args(h, d, n, a)
    return Fraction(prefactor(h, n, int(a))) * Fraction(d) ** (h - 3)


# -- Hodge oracle ---------------------------------------------------------


class HodgeOracle:
    """Integrals of ``psi_1^a_1 ... psi_h^a_h * lambda_{i_1} ... lambda_{i_r}`` over the moduli of stable curves.

    ``provider(g, h, psi, hodge)`` returns a rational or raises ``KeyError``
    for cases it does not cover.  Terms of the wrong total degree are zero
    without consulting the provider.
    """

    def __init__(self, provider: Callable, name: str = "oracle"):
        self.provider = provider
        self.name = name

    def __call__(self, g: int, h: int, psi, hodge=()) -> Fraction:
        psi = tuple(psi)
        hodge = tuple(sorted(hodge))
        if len(psi) != h:
            raise DomainError(f"{len(psi)} psi exponents for h={h} points")
        if any(i < 1 or i > g for i in hodge):
            return Fraction(0)
        if sum(psi) + sum(hodge) != 3 * g - 3 + h:
            return Fraction(0)
        try:
            return Fraction(self.provider(g, h, psi, hodge))
        except KeyError:
            raise UnsupportedHodgeIntegral(
                f"{self.name} has no value for g={g}, h={h}, psi={psi}, lambda={hodge}"
            ) from None


def builtin_oracle_g1() -> HodgeOracle:
    """The two nonzero Hodge integrals on the moduli of one-pointed genus-1 curves."""
    table = {((1,), ()): Fraction(1, 24), ((0,), (1,)): Fraction(1, 24)}

    def provider(g, h, psi, hodge):
        if (g, h) != (1, 1):
            raise KeyError((g, h))
        return table.get((psi, hodge), Fraction(0))

    return HodgeOracle(provider, "builtin_oracle_g1")


def genus_le1_oracle() -> HodgeOracle:
    """Genus 0 and genus 1 with any number of points (see :mod:`bordered_moduli.hodge`)."""

    def provider(g, h, psi, hodge_):
        if g == 0:
            return hodge.genus0_provider(g, h, psi, hodge_)
        return hodge.genus1_provider(g, h, psi, hodge_)

    return HodgeOracle(provider, "genus_le1_oracle")


# -- truncated polynomial algebra -----------------------------------------


class LocalizationExpr:
    """Laurent polynomial in the torus weight ``lambda`` with class coefficients.

    A term is keyed by ``(lambda power, psi exponents, sorted lambda_i indices)``.
    Terms whose class degree exceeds ``3g - 3 + h`` are discarded, as are
    Hodge classes ``lambda_i`` with ``i > g``.
    """

    def __init__(self, g: int, h: int, terms: dict | None = None):
        self.g, self.h = g, h
        self.top = 3 * g - 3 + h
        self.terms: dict = {}
        for key, c in (terms or {}).items():
            self._add(key, Fraction(c))

    @staticmethod
    def class_degree(key) -> int:
        return sum(key[1]) + sum(key[2])

    def _add(self, key, c):
        if c == 0 or self.class_degree(key) > self.top or any(i > self.g for i in key[2]):
            return
        v = self.terms.get(key, 0) + c
        if v:
            self.terms[key] = v
        else:
            self.terms.pop(key, None)

    def _zero_psi(self):
        return (0,) * self.h

    @classmethod
    def lam(cls, g, h, power: int, coeff=1) -> "LocalizationExpr":
        return cls(g, h, {(power, (0,) * h, ()): coeff})

    def __add__(self, other: "LocalizationExpr") -> "LocalizationExpr":
        out = LocalizationExpr(self.g, self.h, self.terms)
        for k, c in other.terms.items():
            out._add(k, c)
        return out

    def __mul__(self, other: "LocalizationExpr") -> "LocalizationExpr":
        out = LocalizationExpr(self.g, self.h)
        for (p1, s1, l1), c1 in self.terms.items():
            for (p2, s2, l2), c2 in other.terms.items():
                key = (p1 + p2, tuple(x + y for x, y in zip(s1, s2)), tuple(sorted(l1 + l2)))
                out._add(key, c1 * c2)
        return out

    @classmethod
    def hodge_chern(cls, g: int, h: int, x) -> "LocalizationExpr":
        """``c_g(E^dual (x lambda)) = sum_i (-1)^i lambda_i (x lambda)^(g-i)``."""
        terms = {}
        for i in range(g + 1):
            key = (g - i, (0,) * h, (i,) if i else ())
            terms[key] = (-1) ** i * Fraction(x) ** (g - i)
        return cls(g, h, terms)

    @classmethod
    def inverse_linear(cls, g: int, h: int, i: int, n: int) -> "LocalizationExpr":
        """``1 / (lambda - n psi_i)`` expanded as ``sum_k n^k psi_i^k lambda^(-k-1)``."""
        top = 3 * g - 3 + h
        terms = {}
        for k in range(max(top, 0) + 1):
            psi = tuple(k if j == i else 0 for j in range(h))
            terms[(-k - 1, psi, ())] = Fraction(n) ** k
        return cls(g, h, terms)

    def lambda0_top(self) -> dict:
        """Coefficient of ``lambda^0`` in class degree ``3g - 3 + h``, as ``{(psi, hodge): coeff}``."""
        return {
            (s, l): c for (p, s, l), c in self.terms.items() if p == 0 and self.class_degree((p, s, l)) == self.top
        }


def localization_integrand(g: int, h: int, n, a: int) -> LocalizationExpr:
    expr = LocalizationExpr.lam(g, h, 2 * h - 3)
    if g > 0:
        for x in (1, a - 1, -a):
            expr = expr * LocalizationExpr.hodge_chern(g, h, x)
    for i, ni in enumerate(n):
        expr = expr * LocalizationExpr.inverse_linear(g, h, i, ni)
    return expr


def localization_integral(g: int, h: int, n, a: int, oracle: HodgeOracle) -> Fraction:
    """The Hodge integral factor, i.e. the value divided by the prefactor."""
    if 2 * g - 2 + h <= 0:
        raise DomainError(f"(g, h)=({g}, {h}) is unstable; no moduli of stable curves")
    total = Fraction(0)
    for (psi, hod), c in sorted(localization_integrand(g, h, n, a).lambda0_top().items()):
        total += c * oracle(g, h, psi, hod)
    return total


def c_genus_g(g: int, h: int, d: int, n, a: int, oracle: HodgeOracle) -> Fraction:
    if g < 1:
        raise DomainError(f"g={g}: use c_genus0 in genus 0")
    n = _check_args(h, d, n, a)
    a = int(a)
    return prefactor(h, n, a) * localization_integral(g, h, n, a, oracle)


def invariant(g: int, h: int, d: int, n, a: int, oracle: HodgeOracle | None = None) -> Fraction:
    if g == 0:
        return c_genus0(h, d, n, a)
    return c_genus_g(g, h, d, n, a, oracle or builtin_oracle_g1())


def sign_symmetry_check(g: int, h: int, d: int, n, a: int, oracle: HodgeOracle | None = None) -> bool:
    """``(-1)^(d-h) C(a) == C(1-a)``, compared exactly."""
    lhs = (-1) ** (d - h) * invariant(g, h, d, n, a, oracle)
    return lhs == invariant(g, h, d, n, 1 - a, oracle)


def maslov_p1(d: int) -> int:
    """Maslov index of a degree ``d`` map from a bordered surface to (P^1, S^1)."""
    if d < 0:
        raise DomainError(f"d={d} must be nonnegative")
    return 2 * d


def compositions(d: int, h: int) -> Iterable[tuple[int, ...]]:
    """Ordered ``h``-tuples of positive integers summing to ``d``."""
    if h == 1:
        if d >= 1:
            yield (d,)
        return
    for first in range(1, d - h + 2):
        for rest in compositions(d - first, h - 1):
            yield (first,) + rest


# -- tables ---------------------------------------------------------------


def rational_str(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class InvariantRow:
    g: int
    h: int
    d: int
    n: tuple
    a: int
    value: Fraction

    def to_dict(self) -> dict:
        return {"g": self.g, "h": self.h, "d": self.d, "n": list(self.n), "a": self.a, "value": rational_str(self.value)}


def invariant_table(g: int, h: int, d: int, n, a_values: Iterable[int], oracle: HodgeOracle | None = None) -> list[InvariantRow]:
    n = tuple(n)
    return [InvariantRow(g, h, d, n, a, invariant(g, h, d, n, a, oracle)) for a in a_values]


def table_to_csv(rows: Iterable[InvariantRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["g", "h", "d", "n", "a", "value"])
    for r in rows:
        w.writerow([r.g, r.h, r.d, ",".join(map(str, r.n)), r.a, rational_str(r.value)])
    return buf.getvalue()


def table_to_json(rows: Iterable[InvariantRow]) -> str:
    return json.dumps([r.to_dict() for r in rows], indent=2)


def polynomial_in_a(h: int, d: int, n, degree: int) -> list[Fraction]:
    """Coefficients (ascending) of the genus-0 value as a polynomial in ``a``, by exact interpolation.

    Uses ``degree + 2`` integer nodes; raises if the extra node disagrees.
    """
    xs = list(range(degree + 2))
    ys = [c_genus0(h, d, n, x) for x in xs]
    coeffs = _newton_to_monomial(xs[:-1], _divided_differences(xs[:-1], ys[:-1]))
    check = sum(c * Fraction(xs[-1]) ** k for k, c in enumerate(coeffs))
    if check != ys[-1]:
        raise ArithmeticError(f"genus-0 value is not a polynomial of degree <= {degree} in a")
    return coeffs


def _divided_differences(xs, ys) -> list[Fraction]:
    coef = [Fraction(y) for y in ys]
    for j in range(1, len(xs)):
        for i in range(len(xs) - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    return coef


def _newton_to_monomial(xs, coef) -> list[Fraction]:
    poly = [Fraction(0)] * len(coef)
    basis = [Fraction(1)]
    for k, c in enumerate(coef):
        for i, b in enumerate(basis):
            poly[i] += c * b
        if k < len(xs):
            new = defaultdict(Fraction)
            for i, b in enumerate(basis):
                new[i + 1] += b
                new[i] -= xs[k] * b
            basis = [new[i] for i in range(len(basis) + 1)]
    return poly


__all__ = [
    "HodgeOracle",
    "InvariantRow",
    "LocalizationExpr",
    "Rational",
    "UnsupportedHodgeIntegral",
    "builtin_oracle_g1",
    "c_genus0",
    "c_genus_g",
    "compositions",
    "gen_binom",
    "genus_le1_oracle",
    "invariant",
    "invariant_table",
    "localization_integral",
    "maslov_p1",
    "polynomial_in_a",
    "rational_str",
    "sign_symmetry_check",
    "table_to_csv",
    "table_to_json",
]
