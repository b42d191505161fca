import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st
from sympy.functions.combinatorial.numbers import kronecker_symbol, mobius

from padlfun.arith import divisor_power_sum, zeta_neg
from padlfun.eisenstein import (
    HalfIntMatrix,
    LocalDensity,
    QExpansion,
    build_family,
    character_orthogonality,
    cminus,
    cplus,
    elliptic_eisenstein,
    eval_family,
    normalized_coeff,
    p_regular_coeff,
    p_regular_exact,
    psi_and_conductor,
    raw_coeff,
    remove_p_singular,
    singular_series_m1,
    singular_series_tail,
    twist_average_check,
    zeta_even_float,
)
from padlfun.lambda_algebra import DEFAULT_D, DEFAULT_N, PoleError
from padlfun.measures import _node_ks
from padlfun.mass import Lattice, theta2_coeff
from padlfun.padic import from_rat

H = HalfIntMatrix.of


# ---------------------------------------------------------------------------
# oracles


def sigma(r, n):
    return sum(d**r for d in sympy.divisors(n))


def fundamental(N):
    """-N = D0 f^2 with D0 a fundamental discriminant."""
    D = -N
    for f in range(math.isqrt(N), 0, -1):
        if N % (f * f):
            continue
        D0 = D // (f * f)
        if D0 % 4 == 1 or (D0 % 4 == 0 and (D0 // 4) % 4 in (2, 3)):
            return D0, f
    raise AssertionError(N)


def L_neg(n, D0):
    """L(1-n, chi_D0) = -B_{n,chi}/n with B_{n,chi} from Bernoulli polynomials."""
    F = abs(D0)
    x = sympy.Symbol("x")
    Bn = sympy.bernoulli(n, x)
    B = F ** (n - 1) * sum(kronecker_symbol(D0, a) * Bn.subs(x, sympy.Rational(a, F)) for a in range(1, F + 1))
    B = sympy.Rational(B)
    return -Fraction(int(B.p), int(B.q)) / n


def cohen_H(r, N):
    D0, f = fundamental(N)
    s = sum(mobius(d) * kronecker_symbol(D0, d) * d ** (r - 1) * sigma(2 * r - 1, f // d) for d in sympy.divisors(f))
    return L_neg(r, D0) * s


def eichler_zagier(a, b, c, k):
    """a_h(E_k^(2)) via Cohen's H function."""
    N = 4 * a * c - b * b
    e = math.gcd(a, b, c)
    total = sum(Fraction(d) ** (k - 1) * cohen_H(k - 1, N // (d * d)) for d in sympy.divisors(e))
    return 2 * total / (zeta_neg(k) * zeta_neg(2 * k - 2))


def L_float(n, D0, terms=200000):
    F = abs(D0)
    chi = [int(kronecker_symbol(D0, j)) for j in range(F)]
    return math.fsum(chi[j % F] / j**n for j in range(1, terms))


# ---------------------------------------------------------------------------


def test_half_int_matrix():
    assert H(3).det2h == 6 and H(3).det_h == 3
    assert H(1, 1, 1).det2h == 3 and H(1, 1, 1).det_h == Fraction(3, 4)
    assert H(2, 2, 2).content == 2 and H(2, 0, 3).trace == 5
    for bad in [(0,), (1, 2, 1), (-1, 0, -1), (1, 2), ()]:
        with pytest.raises(ValueError):
            H(*bad)


@pytest.mark.parametrize("h,C,f", [((1, 0, 1), 4, 1), ((1, 1, 1), 3, 1), ((2, 0, 2), 4, 2), ((1, 0, 2), 8, 1)])
def test_psi_and_conductor(h, C, f):
    psi = psi_and_conductor(H(*h))
    assert abs(psi.D0) == C and psi.f == f
    assert psi.D0 * psi.f**2 == -H(*h).det2h
    with pytest.raises(ValueError):
        psi_and_conductor(H(2))


def test_raw_coeff_examples():
    assert raw_coeff(H(1), 4) == 240
    assert raw_coeff(H(2), 4) == 2160
    assert raw_coeff(H(1), 12) == Fraction(65520, 691)
    assert normalized_coeff(H(6), 4, M=LocalDensity.identity()) == 216


@given(st.integers(1, 60), st.sampled_from([4, 6, 8, 10, 12, 14, 16]))
def test_raw_coeff_divisor_sums(n, k):
    assert raw_coeff(H(n), k) == 2 * divisor_power_sum(k - 1, n) / zeta_neg(k)
    assert raw_coeff(H(n), k) == raw_coeff(H(1), k) * sigma(k - 1, n)


def test_golden_genus2_normalized():
    # f = 1: (1/2)^5 L(-2, chi_-3) = (1/32)(-2/9)
    assert normalized_coeff(H(1, 1, 1), 4) == Fraction(-1, 144)


E8_GENUS2 = {(1, 0, 1): 30240, (1, 1, 1): 13440, (1, 0, 2): 181440, (1, 1, 2): 138240,
             (1, 0, 3): 497280, (2, 2, 2): 604800, (2, 0, 2): 1239840}


@pytest.mark.parametrize("h", sorted(E8_GENUS2))
def test_genus2_matches_e8_theta(h):
    # the degree-2 theta series of E8 is the Siegel Eisenstein series of weight 4
    want = theta2_coeff(Lattice.e8(), *h)
    assert want == E8_GENUS2[h]
    assert raw_coeff(H(*h), 4) == want


GENUS2_GRID = [(1, 0, 1), (1, 1, 1), (1, 0, 2), (1, 1, 2), (2, 2, 2), (2, 0, 2), (2, 1, 3), (3, 0, 3),
               (2, 2, 5), (3, 3, 3), (4, 0, 4), (1, 0, 9), (3, 0, 6)]


@pytest.mark.parametrize("h", GENUS2_GRID)
@pytest.mark.parametrize("k", [4, 6, 8, 10])
def test_genus2_matches_cohen_h(h, k):
    assert raw_coeff(H(*h), k) == eichler_zagier(*h, k)


@pytest.mark.parametrize("h", [(1, 1, 1), (1, 0, 1), (1, 0, 2), (2, 1, 3)])
@pytest.mark.parametrize("k", [4, 6])
def test_genus2_L_value_float_route(h, k):
    # L(2-k, psi) against the functional equation applied to a partial sum of L(k-1, psi)
    psi = psi_and_conductor(H(*h))
    n = k - 1
    F = abs(psi.D0)
    fe = (-1) ** ((n - 1) // 2) * 2 * math.factorial(n - 1) * F ** (n - 0.5) / (2 * math.pi) ** n
    L = fe * L_float(n, psi.D0)
    exact = normalized_coeff(H(*h), k, M=LocalDensity.identity()) / Fraction(psi.f, 2) ** (2 * k - 3)
    assert abs(float(exact) - L) <= 1e-6 * abs(L)


def test_local_density_shapes():
    assert LocalDensity.default(H(1, 0, 1)).polys == ()
    M = LocalDensity.default(H(2, 0, 2))
    assert M.primes == (2,)
    assert LocalDensity.genus1(12).evaluate(4) * Fraction(12) ** 3 == sigma(3, 12)
    with pytest.raises(ValueError):
        LocalDensity.of({3: [2, 1]})
    assert LocalDensity.identity().evaluate(10) == 1


def test_cplus_cminus():
    assert cplus(H(1), 4, 1, 5) == Fraction(624, 625)
    for k in (4, 6, 8):
        for p in (3, 5, 7):
            P = Fraction(p)
            assert cminus(H(1), k, 1, p) * (1 - P ** (k - 1)) == 1
            assert cplus(H(1), k, 1, p) == 1 - P ** (-k)
            assert cplus(H(1), k, 1, p) * cminus(H(1), k, 1, p) == (1 - P ** (-k)) / (1 - P ** (k - 1))
    # psi(5) = +1 for D = -4
    h = H(1, 0, 1)
    assert psi_and_conductor(h)(5) == 1
    assert cplus(h, 6, 2, 5) == (1 - Fraction(5) ** -6) * (1 + Fraction(5) ** -5)
    assert cminus(h, 6, 2, 5) == (1 - Fraction(5) ** 4) / ((1 - Fraction(5) ** 5) * (1 - Fraction(5) ** 9))
    with pytest.raises(ValueError):
        cplus(H(5), 4, 1, 5)
    with pytest.raises(ValueError):
        cminus(H(1, 0, 5), 4, 2, 5)


def test_p_regular_coeff():
    v = p_regular_coeff(H(1), 2 + 36, 1, 37, N=10)
    assert v.agrees(from_rat(p_regular_exact(H(1), 38, 1, 37), 37, absprec=10), 10)
    with pytest.raises(ValueError):
        p_regular_coeff(H(5), 4, 1, 5)
    with pytest.raises(ValueError):
        raw_coeff(H(1), 5)
    with pytest.raises(ValueError):
        raw_coeff(H(1, 0, 1), 2)


def test_weight_two_row_pattern():
    # 2 sigma_1(1) / (zeta(-1)(1 - 37)) = 2 * (1/3) ; 1/3 = 25 + 24*37 + ... at 37
    exact = 2 * divisor_power_sum(1, 1) / (zeta_neg(2) * (1 - 37))
    assert exact == Fraction(2, 3)
    assert from_rat(Fraction(1, 3), 37, absprec=3).residue() % 37 == 25


# ---------------------------------------------------------------------------
# families


def _held_out(p, r, start=4, count=3):
    return [k for k in range(start, start + 8 * p * (p - 1), 2) if (k - r) % (p - 1) == 0][:count]


@pytest.mark.parametrize("p", [5, 7])
@pytest.mark.parametrize("hv", [1, 2, 3, 4, 6])
def test_genus1_family_interpolates(p, hv):
    h = H(hv)
    for r in range(0, p - 1, 2):
        fam = build_family(h, p, r=r)
        assert fam.P.degree == 0 and fam.mu == 0
        beyond = max(_node_ks(p, (r - 1) % (p - 1), DEFAULT_D + DEFAULT_N + 1)) + p - 1
        for k in _held_out(p, r) + [beyond]:
            got = eval_family(fam, k)
            want = p_regular_coeff(h, k, 1, p, N=40)
            assert got.absprec >= 6
            assert got.agrees(want, int(got.absprec))


def test_family_example_branch_2_mod_4():
    fam = build_family(H(1), 5, r=2)
    for k in (6, 10, 14):
        assert eval_family(fam, k).agrees(p_regular_coeff(H(1), k, 1, 5, N=20), 8)


def test_family_independent_of_c():
    # c = 2 is excluded at genus 1 since det(2h) = 2h is even
    f3 = build_family(H(1), 5, c=3, r=0)
    f13 = build_family(H(1), 5, c=13, r=0)
    assert f3.c == 3 and f13.c == 13
    assert f3.factors["1-c^k"].coeffs[1] != f13.factors["1-c^k"].coeffs[1]
    for k in (8, 12, 16):
        assert eval_family(f3, k).agrees(eval_family(f13, k), 10)


def test_family_kummer_congruence():
    p = 5
    fam = build_family(H(2), p, r=0)
    a, b = eval_family(fam, 8), eval_family(fam, 8 + p * (p - 1))
    assert a.agrees(b, 2)
    ea, eb = p_regular_exact(H(2), 8, 1, p), p_regular_exact(H(2), 8 + p * (p - 1), 1, p)
    assert from_rat(ea - eb, p, absprec=4).valuation() >= 2


GENUS2_FAMILIES = [((1, 0, 1), 5), ((1, 1, 1), 5), ((1, 0, 2), 5), ((2, 2, 2), 5), ((1, 0, 1), 7), ((1, 1, 1), 7),
                   ((2, 0, 2), 7)]


@pytest.mark.parametrize("h,p", GENUS2_FAMILIES)
def test_genus2_family_interpolates(h, p):
    h = H(*h)
    for r in range(0, p - 1, 2):
        fam = build_family(h, p, r=r)
        for k in _held_out(p, r, start=6):
            try:
                got = eval_family(fam, k)
            except PoleError:
                pytest.fail(f"unexpected pole at k={k}")
            want = p_regular_coeff(h, k, 2, p, N=40)
            assert got.absprec >= 6
            assert got.agrees(want, int(got.absprec))


def test_genus2_family_example_p5_k6():
    h = H(1, 0, 1)
    fam = build_family(h, 5, r=2)
    assert eval_family(fam, 6).agrees(p_regular_coeff(h, 6, 2, 5, N=20), 8)
    audit = fam.audit()
    assert {"M_h", "1-c^k", "G_psi"} <= set(audit)


def test_family_errors():
    with pytest.raises(ValueError):
        build_family(H(5), 5)
    with pytest.raises(ValueError):
        build_family(H(1), 5, r=1)
    with pytest.raises(ValueError):
        build_family(H(3), 5, c=3)
    fam = build_family(H(1), 5, r=0)
    with pytest.raises(ValueError):
        eval_family(fam, 6)


# ---------------------------------------------------------------------------
# q-expansions


def test_elliptic_eisenstein():
    e4 = elliptic_eisenstein(4, 5)
    assert [e4[n] for n in range(4)] == [1, 240, 2160, 6720]
    e12 = elliptic_eisenstein(12, 12)
    assert e12[0] == 1
    assert all(691 % e12[n].denominator == 0 for n in range(13))
    with pytest.raises(ValueError):
        elliptic_eisenstein(2, 4)


def test_remove_p_singular():
    f = QExpansion(1, 10, {n: Fraction(n * n + 1) for n in range(1, 11)})
    g = remove_p_singular(f, 5)
    assert g[5] == 0 and g[10] == 0 and g[3] == 10
    assert remove_p_singular(g, 5) == g
    assert remove_p_singular(f.scale(Fraction(3, 7)), 5) == g.scale(Fraction(3, 7))
    e = remove_p_singular(elliptic_eisenstein(4, 12), 3)
    for n in range(1, 13):
        assert e[n] == (0 if n % 3 == 0 else 240 * sigma(3, n))


def test_qexpansion_json_round_trip():
    f = elliptic_eisenstein(6, 6)
    assert QExpansion.from_json(f.to_json()) == f
    g = QExpansion(2, 2, {0: Fraction(1), H(1, 0, 1): Fraction(30240), H(1, 1, 1): Fraction(-7, 3)})
    assert QExpansion.from_json(g.to_json()) == g


# ---------------------------------------------------------------------------
# geometric identities


@pytest.mark.parametrize("h", range(1, 7))
@pytest.mark.parametrize("k", [4, 6])
def test_singular_series(h, k):
    closed = sigma(k - 1, h) / (h ** (k - 1) * zeta_even_float(k))
    for C in (20, 50, 200):
        assert abs(singular_series_m1(h, k, C) - closed) <= singular_series_tail(k, C)


def test_singular_series_examples():
    assert abs(singular_series_m1(1, 4, 200) - 90 / math.pi**4) < 1e-5
    assert abs(zeta_even_float(4) - math.pi**4 / 90) < 1e-14
    C = 30
    step = abs(singular_series_m1(5, 4, C + 1) - singular_series_m1(5, 4, C))
    assert step <= (C + 1) ** -3 * sympy.totient(C + 1)


@pytest.mark.parametrize("k", [4, 6])
def test_twist_average_eisenstein(k):
    rep = twist_average_check(elliptic_eisenstein(k, 30), 5, k, tol=1e-9)
    assert rep.ok, rep


def test_twist_average_monomials():
    for n in (1, 3, 5, 7, 10):
        f = QExpansion(1, 12, {n: Fraction(1)})
        rep = twist_average_check(f, 5, 4)
        assert rep.max_error < 1e-12
    with pytest.raises(ValueError):
        twist_average_check(QExpansion(2, 1, {}), 5, 4)


@pytest.mark.parametrize("p", [5, 7, 11])
def test_character_orthogonality(p):
    rep = character_orthogonality(p)
    assert rep.ok and rep.details["exact"]
    with pytest.raises(ValueError):
        character_orthogonality(p, v=2)
