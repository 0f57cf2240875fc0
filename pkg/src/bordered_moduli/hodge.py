"""Small Hodge-integral providers in genus 0 and 1.

These serve as independent oracles for the localization formulas in
:mod:`bordered_moduli.invariants`; nothing here is used by default.

* psi-only integrals in any genus via the Dijkgraaf-Verlinde-Verlinde
  (Virasoro) recursion for Witten-Kontsevich numbers;
* genus 0: ``int psi^a = multinomial(h-3; a)``;
* genus 1: ``int lambda_1 psi^a = multinomial(h-1; a) / 24`` and
  ``lambda_1^2 = 0``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import combinations


def _dfact(n: int) -> int:
    """Double factorial with ``(-1)!! = 1``."""
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def multinomial(total: int, parts) -> int:
    parts = list(parts)
    if any(p < 0 for p in parts) or sum(parts) != total:
        return 0
    out = math.factorial(total)
    for p in parts:
        out //= math.factorial(p)
    return out


def witten_kontsevich(g: int, exps) -> Fraction:
    """``<tau_{d_1} ... tau_{d_n}>_g``, the psi-class integral over the moduli of stable curves."""
    return _wk(g, tuple(sorted(exps)))


@lru_cache(maxsize=None)
def _wk(g: int, d: tuple) -> Fraction:
    n = len(d)
    if g < 0 or n == 0 or 2 * g - 2 + n <= 0 or any(x < 0 for x in d):
        return Fraction(0)
    if sum(d) != 3 * g - 3 + n:
        return Fraction(0)
    if g == 0 and n == 3:
        return Fraction(1)
    if g == 1 and n == 1:
        return Fraction(1, 24)
    if d[0] == 0:
        # string equation
        rest = list(d[1:])
        total = Fraction(0)
        for j, x in enumerate(rest):
            if x > 0:
                total += _wk(g, tuple(sorted(rest[:j] + [x - 1] + rest[j + 1:])))
        return total
    # DVV recursion on the largest exponent, written as tau_{k+1}
    k = d[-1] - 1
    rest = list(d[:-1])
    total = Fraction(0)
    for j, x in enumerate(rest):
        others = rest[:j] + rest[j + 1:]
        total += Fraction(_dfact(2 * k + 2 * x + 1), _dfact(2 * x - 1)) * _wk(g, tuple(sorted(others + [x + k])))
    for r in range(k):
        s = k - 1 - r
        w = Fraction(_dfact(2 * r + 1) * _dfact(2 * s + 1), 2)
        total += w * _wk(g - 1, tuple(sorted(rest + [r, s])))
        idx = range(len(rest))
        for size in range(len(rest) + 1):
            for left in combinations(idx, size):
                a = [rest[i] for i in left]
                b = [rest[i] for i in idx if i not in left]
                for g1 in range(g + 1):
                    total += w * _wk(g1, tuple(sorted(a + [r]))) * _wk(g - g1, tuple(sorted(b + [s])))
    return total / _dfact(2 * k + 3)


def genus0_provider(g: int, h: int, psi, hodge) -> Fraction:
    if g != 0 or h < 3:
        raise KeyError((g, h))
    if hodge:
        return Fraction(0)
    return Fraction(multinomial(h - 3, psi))


def genus1_provider(g: int, h: int, psi, hodge) -> Fraction:
    if g != 1:
        raise KeyError((g, h))
    hodge = tuple(hodge)
    if not hodge:
        return witten_kontsevich(1, psi)
    if hodge == (1,):
        return Fraction(multinomial(h - 1, psi), 24)
    return Fraction(0)


def psi_only_provider(g: int, h: int, psi, hodge) -> Fraction:
    if hodge:
        raise KeyError((g, h, tuple(hodge)))
    return witten_kontsevich(g, psi)
