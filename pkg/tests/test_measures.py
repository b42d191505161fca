from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from padlfun.arith import QuadChar, gen_bernoulli_quad, valuation, zeta_neg
from padlfun.lambda_algebra import PoleError
from padlfun.measures import (
    MazurMeasure,
    default_c,
    gen_bernoulli_padic,
    iwasawa_series,
    kl_zeta,
    measure_value,
    moment_exact,
    quad_L_series,
    reciprocal_L_dirichlet,
    reciprocal_zeta,
    reciprocal_zeta_routes,
    riemann_moment,
    twisted_moment_exact,
)
from padlfun.padic import BranchChar, from_rat, t_coordinate


def test_cell_values():
    mu = MazurMeasure(5, 2)
    assert measure_value(mu, 1, 5) == Fraction(1, 4)
    with pytest.raises(ValueError):
        measure_value(mu, 5, 25)
    with pytest.raises(ValueError):
        measure_value(mu, 1, 10)
    assert MazurMeasure(5, 2, aux_primes=(3,)).cell(1, 15) == measure_value(MazurMeasure(5, 2, (3,)), 1, 15)
    with pytest.raises(ValueError):
        MazurMeasure(5, 10)


@given(st.sampled_from([3, 5, 7]), st.sampled_from([2, 3, 4]), st.integers(1, 3), st.integers(1, 10**6))
def test_distribution_property(p, c, v, a):
    if c % p == 0 or a % p == 0:
        return
    mu = MazurMeasure(p, c)
    q = p**v
    parent = mu.regularized_cell(a % q, q)
    children = sum(mu.regularized_cell((a + i * q) % (q * p), q * p) for i in range(p))
    assert parent == children
    assert valuation(parent, p) >= 0


def test_moment_formula():
    assert moment_exact(5, 2, 2) == (1 - 4) * Fraction(-1, 12) * (1 - 5)
    assert riemann_moment(5, 2, 2, 4) == moment_exact(5, 2, 2)
    psi = QuadChar.from_discriminant(-4)
    assert twisted_moment_exact(5, 3, 1, psi) == (1 - psi(3) * 3) * Fraction(1, 2) * (1 - psi(5))


@pytest.mark.parametrize("p", [5, 7])
@pytest.mark.parametrize("c", [2, 3])
def test_riemann_sums_converge(p, c):
    for k in range(1, 13):
        exact = moment_exact(p, c, k)
        for v in range(1, 5):
            assert valuation(riemann_moment(p, c, k, v) - exact, p) >= v - 1


@pytest.mark.parametrize("p", [5, 7])
def test_kummer_congruences(p):
    c = 2
    for v in (1, 2, 3):
        period = (p - 1) * p ** (v - 1)
        for k in range(1, 9):
            a, b = moment_exact(p, c, k), moment_exact(p, c, k + period)
            assert valuation(a - b, p) >= v
            if (k % (p - 1)) and k % 2 == 0:
                za = zeta_neg(k) * (1 - Fraction(p) ** (k - 1))
                zb = zeta_neg(k + period) * (1 - Fraction(p) ** (k + period - 1))
                assert valuation(za - zb, p) >= v


def test_default_c_generates_units():
    assert default_c(37) == 2
    assert default_c(7) == 3
    assert default_c(5, 3) == 2
    assert default_c(5, 6) == 13  # 7 has 7^4 = 1 mod 25, 11 = 1 mod 5


@pytest.mark.parametrize("j", [1, 3])
def test_interpolation_and_riemann_series_agree(j):
    a = iwasawa_series(5, j, 2, 6, 5)
    b = iwasawa_series(5, j, 2, 6, 5, "riemann")
    assert a.G.agrees(b.G, 4, 6)
    assert a.P == b.P or a.lam == b.lam == 0


def test_zero_branches():
    br = iwasawa_series(5, 0, 2)
    assert br.is_zero and br.lam == 0
    assert br.evaluate(from_rat(5, 5, absprec=10)).is_exact_zero()


@pytest.mark.parametrize("j", [1, 3])
def test_branch_values_match_moments(j):
    p, c = 5, 2
    br = iwasawa_series(p, j, c)
    for k in range(j + 1 + 20 * (p - 1), j + 1 + 20 * (p - 1) + 3 * (p - 1), p - 1):
        T = t_coordinate(k - 1, p, 30)
        assert br.evaluate(T).agrees(moment_exact(p, c, k), 10)


@given(st.integers(1, 200), st.sampled_from([1, 3]))
@settings(max_examples=25, deadline=None)
def test_kl_zeta_independent_of_c(n, j):
    p = 5
    t0 = from_rat(p * n, p, absprec=20)
    a, b = kl_zeta(p, 2, j, t0), kl_zeta(p, 3, j, t0)
    assert a.agrees(b, 8)


@pytest.mark.parametrize("k", [2, 4, 6, 8, 10, 12])
def test_kl_zeta_interpolates(k):
    p = 5
    j = k - 1
    t0 = t_coordinate(k - 1, p, 30)
    want = zeta_neg(k) * (1 - Fraction(p) ** (k - 1))
    assert kl_zeta(p, 2, j, t0).agrees(from_rat(want, p, absprec=12), 8)


def test_kl_zeta_pole():
    # x(y) = 1/y: omega^{-1}, t0 = (1+p)^-1 - 1
    p = 5
    t0 = from_rat(Fraction(1, 1 + p) - 1, p, absprec=20)
    with pytest.raises(PoleError):
        kl_zeta(p, 2, p - 2, t0)


@given(st.integers(1, 20))
@settings(max_examples=20, deadline=None)
def test_reciprocal_zeta_routes(n):
    k = 2 * n
    a, b = reciprocal_zeta_routes(5, k, 8)
    assert a.agrees(b, int(min(a.absprec, b.absprec, 8)))


def test_reciprocal_zeta_at_p37_irregular_row():
    val = reciprocal_zeta(37, 32, 4)
    assert val.val == -1


@pytest.mark.parametrize("a,D,k", [(2, None, 2), (2, None, 4), (0, -3, 1), (0, -4, 3), (1, -4, 2), (2, -3, 3)])
def test_dirichlet_reciprocals(a, D, k):
    p = 5
    psi = QuadChar.from_discriminant(D) if D else None
    chi = BranchChar(p, a, psi)
    got = reciprocal_L_dirichlet(p, k, chi, 8)
    B = gen_bernoulli_padic(k, chi, 14)
    euler = 1 - chi(p, 14) * Fraction(p) ** (k - 1)
    want = 1 / (-B / k * euler)
    assert got.agrees(want, int(min(got.absprec, 6)))
    if a == 0:
        exact = -gen_bernoulli_quad(k, psi) / k * (1 - psi(p) * Fraction(p) ** (k - 1))
        assert got.agrees(from_rat(1 / exact, p, absprec=12), 6)


def test_dirichlet_poles():
    with pytest.raises(PoleError):
        reciprocal_L_dirichlet(5, 2, BranchChar(5, 1), 6)
    # chi_-4(5) = 1 kills the Euler factor at k = 1
    with pytest.raises(PoleError):
        reciprocal_L_dirichlet(5, 1, BranchChar(5, 0, QuadChar.from_discriminant(-4)), 6)


def test_quad_L_series_matches_twisted_moments():
    p = 5
    psi = QuadChar.from_discriminant(-4)
    r = 2  # weights k = 2 mod 4, k' = k - 1
    data = quad_L_series(p, psi, 2, 3, r)
    for k in (6, 10, 14):
        kp = k - 1
        T = from_rat((1 + p) ** (kp - 1) - 1, p, absprec=30)
        want = twisted_moment_exact(p, 3, kp, psi)
        assert data.branch.evaluate(T).agrees(want, 8)
        u = 1 - psi(3) * Fraction(3) ** kp
        assert data.u.evaluate(T).agrees(u, 8)
    with pytest.raises(ValueError):
        quad_L_series(p, psi, 1, 3, r)
