import math
from fractions import Fraction

from hypothesis import given, settings, strategies as st
import pytest

from bordered_moduli.invariants import (
    HodgeOracle,
    LocalizationExpr,
    UnsupportedHodgeIntegral,
    builtin_oracle_g1,
    c_genus0,
    c_genus_g,
    compositions,
    gen_binom,
    genus_le1_oracle,
    invariant,
    invariant_table,
    localization_integral,
    maslov_p1,
    polynomial_in_a,
    rational_str,
    sign_symmetry_check,
    table_to_csv,
    table_to_json,
)
from bordered_moduli.surface_types import DomainError


def hand_g1_h1(d: int, a: int) -> Fraction:
    """Genus-1, one-boundary value reduced by hand from the localization integrand.

    For x in (1, a-1, -a), c_1(E^dual(x L)) = x L - lambda_1, and lambda_1^2 = 0
    on the one-pointed genus-1 space.  The product of the three factors is
    e3 L^3 - e2 L^2 lambda_1 with e3 = -a(a-1) and e2 = -(a^2 - a + 1).
    Multiplying by L^(-1) and by 1/(L - d psi) = sum d^k psi^k L^(-k-1),
    the L^0 part of class degree 1 is -a(a-1) d psi + (a^2 - a + 1) lambda_1.
    Both classes integrate to 1/24.
    """
    return Fraction(gen_binom(d * a - 1, d - 1) * ((a * a - a + 1) - a * (a - 1) * d), 24)


def test_gen_binom():
    assert gen_binom(5, 2) == 10
    assert gen_binom(2, 2) == 1
    assert gen_binom(-1, 3) == -1
    assert gen_binom(-3, 2) == 6
    assert gen_binom(7, 0) == 1
    assert gen_binom(2, 5) == 0
    for x in range(0, 12):
        for k in range(0, 12):
            assert gen_binom(x, k) == math.comb(x, k)
    with pytest.raises(DomainError):
        gen_binom(3, -1)


def test_c_genus0_examples():
    assert c_genus0(1, 1, (1,), 1) == 1
    assert c_genus0(1, 3, (3,), 1) == Fraction(1, 9)
    assert c_genus0(2, 2, (1, 1), 2) == -1


@pytest.mark.parametrize("d", range(1, 9))
def test_disc_multiple_cover_pattern(d):
    assert c_genus0(1, d, (d,), 1) == Fraction(1, d * d)


def test_c_genus0_domain_errors():
    with pytest.raises(DomainError):
        c_genus0(1, 3, (2,), 1)
    with pytest.raises(DomainError):
        c_genus0(2, 3, (3,), 1)
    with pytest.raises(DomainError):
        c_genus0(2, 2, (2, 0), 1)
    with pytest.raises(DomainError):
        c_genus0(1, 2, (2,), 1.5)


def test_sign_symmetry_examples():
    assert sign_symmetry_check(0, 1, 2, (2,), 3)
    assert sign_symmetry_check(0, 2, 3, (1, 2), -1)
    assert sign_symmetry_check(1, 1, 2, (2,), 2)


def test_sign_symmetry_genus0_exhaustive():
    for h in (1, 2, 3):
        for d in range(h, 7):
            for n in compositions(d, h):
                for a in range(-4, 6):
                    assert sign_symmetry_check(0, h, d, n, a), (h, d, n, a)


def test_sign_symmetry_genus1():
    oracle = builtin_oracle_g1()
    for d in range(1, 7):
        for a in range(-4, 6):
            assert sign_symmetry_check(1, 1, d, (d,), a, oracle)
    wide = genus_le1_oracle()
    for h in (2, 3):
        for d in range(h, 6):
            for n in compositions(d, h):
                for a in range(-3, 5):
                    assert sign_symmetry_check(1, h, d, n, a, wide)


def test_genus1_examples():
    oracle = builtin_oracle_g1()
    assert c_genus_g(1, 1, 1, (1,), 1, oracle) == Fraction(1, 24)
    assert c_genus_g(1, 1, 2, (2,), 1, oracle) == Fraction(1, 24)


@pytest.mark.parametrize("d", range(1, 6))
def test_genus1_matches_hand_reduction(d):
    oracle = builtin_oracle_g1()
    for a in range(-3, 5):
        assert c_genus_g(1, 1, d, (d,), a, oracle) == hand_g1_h1(d, a)


def test_genus1_oracles_agree_on_one_point():
    for d in range(1, 5):
        for a in range(-2, 4):
            assert c_genus_g(1, 1, d, (d,), a, builtin_oracle_g1()) == c_genus_g(1, 1, d, (d,), a, genus_le1_oracle())


def test_genus0_localization_reproduces_closed_form():
    # Genus-0 integrand integrated with multinomial psi integrals gives d^(h-3).
    oracle = genus_le1_oracle()
    for h in (3, 4, 5):
        for d in range(h, h + 4):
            for n in compositions(d, h):
                for a in (-2, 0, 3):
                    assert localization_integral(0, h, n, a, oracle) == Fraction(d) ** (h - 3)


def test_vanishing_at_fixed_points():
    for h in (2, 3):
        for d in range(h, 6):
            for n in compositions(d, h):
                assert c_genus0(h, d, n, 0) == 0
                assert c_genus0(h, d, n, 1) == 0


@pytest.mark.parametrize("n", [(1,), (3,), (1, 2), (2, 2), (1, 1, 3), (2, 1, 2)])
def test_polynomial_degree(n):
    h, d = len(n), sum(n)
    degree = 2 * (h - 1) + sum(x - 1 for x in n)
    coeffs = polynomial_in_a(h, d, n, degree)
    for a in range(-6, 8):
        assert sum(c * Fraction(a) ** k for k, c in enumerate(coeffs)) == c_genus0(h, d, n, a)
    if degree > 0:
        with pytest.raises(ArithmeticError):
            polynomial_in_a(h, d, n, degree - 1)


def test_oracle_degree_bookkeeping():
    oracle = builtin_oracle_g1()
    assert oracle(1, 1, (1,)) == Fraction(1, 24)
    assert oracle(1, 1, (0,), (1,)) == Fraction(1, 24)
    assert oracle(1, 1, (0,)) == 0
    assert oracle(1, 1, (2,)) == 0
    assert oracle(1, 1, (1,), (1,)) == 0
    calls = []
    spy = HodgeOracle(lambda *args: calls.append(args) or 1)
    assert spy(2, 1, (1,), (1,)) == 0  # degree 2 != 4
    assert spy(1, 1, (0,), (2,)) == 0  # lambda_2 vanishes in genus 1
    assert calls == []


def test_unsupported_case_is_explicit():
    with pytest.raises(UnsupportedHodgeIntegral):
        c_genus_g(1, 2, 2, (1, 1), 2, builtin_oracle_g1())
    with pytest.raises(UnsupportedHodgeIntegral):
        c_genus_g(2, 1, 1, (1,), 2, genus_le1_oracle())


def test_localization_expr_algebra():
    g, h = 1, 1
    x = LocalizationExpr.hodge_chern(g, h, 3)
    assert x.terms == {(1, (0,), ()): 3, (0, (0,), (1,)): -1}
    inv = LocalizationExpr.inverse_linear(g, h, 0, 2)
    assert inv.terms == {(-1, (0,), ()): 1, (-2, (1,), ()): 2}
    prod = x * x
    assert (0, (0,), (1, 1)) not in prod.terms  # degree 2 truncated
    assert prod.terms[(2, (0,), ())] == 9
    assert prod.terms[(1, (0,), (1,))] == -6


def test_maslov_p1():
    assert [maslov_p1(d) for d in (0, 1, 3)] == [0, 2, 6]
    with pytest.raises(DomainError):
        maslov_p1(-1)


def test_compositions():
    assert list(compositions(4, 2)) == [(1, 3), (2, 2), (3, 1)]
    for d in range(1, 8):
        for h in range(1, d + 1):
            assert len(list(compositions(d, h))) == math.comb(d - 1, h - 1)


def test_tables():
    rows = invariant_table(0, 1, 3, (3,), range(-1, 2))
    assert [rational_str(r.value) for r in rows] == ["10/9", "1/9", "1/9"]  # binom(3a-1, 2) / 9
    csv_text = table_to_csv(rows)
    assert csv_text.splitlines()[0] == "g,h,d,n,a,value"
    assert csv_text.splitlines()[3] == "0,1,3,3,1,1/9"
    assert '"value": "1/9"' in table_to_json(rows)
    assert invariant(1, 1, 1, (1,), 1) == Fraction(1, 24)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 3), st.integers(0, 4), st.integers(-6, 7), st.data())
def test_sign_symmetry_property(h, extra, a, data):
    d = h + extra
    n = data.draw(st.sampled_from(list(compositions(d, h))))
    assert (-1) ** (d - h) * c_genus0(h, d, n, a) == c_genus0(h, d, n, 1 - a)
