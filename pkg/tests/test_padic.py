from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from padlfun.arith import QuadChar
from padlfun.padic import (
    BranchChar,
    PadicNum,
    PrecisionError,
    angle,
    binomial_coeffs,
    from_rat,
    padic_exp,
    padic_log,
    s_exponent,
    t_coordinate,
    teichmuller,
)

primes = st.sampled_from([3, 5, 7, 37])
rats = st.fractions(max_denominator=10**6).filter(lambda x: x != 0)


def test_printing_layout():
    assert str(from_rat(Fraction(1, 3), 5, prec=4)) == "2 + 3*5 + 5^2 + 3*5^3 + O(5^4)"
    assert str(from_rat(Fraction(1, 37), 37, prec=2)) == "37^-1 + O(37^1)"
    assert str(from_rat(-1, 7, absprec=3)) == "6 + 6*7 + 6*7^2 + O(7^3)"
    assert str(PadicNum.zero(5)) == "0"


@given(primes, rats, rats)
def test_field_operations_match_rationals(p, x, y):
    N = 12
    a, b = from_rat(x, p, prec=N), from_rat(y, p, prec=N)
    for got, want in ((a + b, x + y), (a - b, x - y), (a * b, x * y), (a / b, x / y)):
        if want == 0:
            assert got.is_zero()
            continue
        assert got.agrees(from_rat(want, p, absprec=int(got.absprec) + 5), int(got.absprec))


@given(primes, rats)
def test_precision_is_tracked(p, x):
    a = from_rat(x, p, prec=8)
    assert a.absprec == a.val + 8
    prod = a * from_rat(p**3, p, prec=8)
    assert prod.val == a.val + 3 and prod.prec == 8


def test_exact_zero_and_bigoh():
    z = PadicNum.zero(5)
    assert z.is_exact_zero()
    z3 = PadicNum.zero(5, 3)
    assert z3.is_zero() and not z3.is_exact_zero()
    assert from_rat(7, 5, absprec=10).add_bigoh(2).absprec == 2
    with pytest.raises(ValueError):
        from_rat(1, 5)


@given(primes, st.integers(1, 10**6))
def test_teichmuller_is_root_of_unity(p, a):
    if a % p == 0:
        return
    w = teichmuller(a, p, 15)
    assert (w ** (p - 1)).agrees(1, 15)
    assert w.residue() % p == a % p
    # <a> = a / omega(a) is a principal unit
    assert (angle(a, p, 15) - 1).val >= 1


@given(primes, st.integers(1, 10**4))
@settings(max_examples=50)
def test_log_exp_inverse(p, n):
    x = from_rat(p * n, p, absprec=14)
    assert padic_log(padic_exp(x)).agrees(x, 13)


@given(primes, st.integers(1, 10**4), st.integers(1, 10**4))
@settings(max_examples=50)
def test_log_is_additive(p, m, n):
    u, v = from_rat(1 + p * m, p, absprec=14), from_rat(1 + p * n, p, absprec=14)
    assert padic_log(u * v).agrees(padic_log(u) + padic_log(v), 13)


def test_log_rejects_non_principal_units():
    with pytest.raises(ValueError):
        padic_log(from_rat(2, 5, absprec=5))


@given(st.sampled_from([5, 7]), st.integers(2, 200))
@settings(max_examples=40)
def test_s_exponent_recovers_angle(p, a):
    if a % p == 0:
        return
    s = s_exponent(a, p, 12)
    lhs = padic_exp(padic_log(from_rat(1 + p, p, absprec=12)) * s)
    assert lhs.agrees(angle(a, p, 12), 11)


@given(st.sampled_from([5, 7]), st.integers(1, 500))
def test_t_coordinate_valuation(p, k):
    t = t_coordinate(k, p, 20)
    e = 0
    while k % p**(e + 1) == 0:
        e += 1
    assert t.val == e + 1


@given(st.integers(0, 30))
def test_binomial_coeffs_integer_exponent(n):
    from math import comb
    cs = binomial_coeffs(from_rat(n, 5, absprec=20), 8)
    for i, c in enumerate(cs):
        assert c.agrees(comb(n, i), 20 - 2 * i)


def test_branch_character():
    chi = BranchChar(5, 2)
    assert chi.conductor == 5 and chi.parity() == 1
    assert chi(5).is_exact_zero()
    assert BranchChar(5, 0)(5).agrees(1, 10)
    tw = BranchChar(5, 1, QuadChar.from_discriminant(-4))
    assert tw.conductor == 20 and tw.parity() == 1
    assert tw(3).agrees(teichmuller(3, 5, 10) * -1, 10)
    with pytest.raises(ValueError):
        BranchChar(5, 1, QuadChar.from_discriminant(5))


def test_precision_error_type():
    assert issubclass(PrecisionError, ArithmeticError)


def test_json_digits():
    js = from_rat(Fraction(1, 3), 5, prec=3).to_json()
    assert js == {"p": 5, "val": 0, "prec": 3, "digits": [2, 3, 1]}


@given(st.sampled_from([3, 5, 37]), st.fractions(max_denominator=10**6), st.integers(1, 12))
def test_json_round_trip(p, x, prec):
    a = from_rat(x, p, prec=prec)
    b = PadicNum.from_json(a.to_json())
    assert str(b) == str(a) and b.absprec == a.absprec
    assert str(PadicNum.from_json(PadicNum.zero(p).to_json())) == str(PadicNum.zero(p))
