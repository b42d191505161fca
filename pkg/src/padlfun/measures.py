"""The Mazur measure, its moments, the Iwasawa series of its branches, the
Kubota-Leopoldt zeta function and reciprocal L-values as Iwasawa functions
divided by distinguished polynomials.

Sign convention.  The cell formula ``mu_c(a + p^v) = B_1({ca/p^v})/c - B_1(a/p^v)``
has moments ``(1 - c^-k) zeta(1-k) (1 - p^(k-1))``.  The branch series are built
from ``nu_c = -c * (c^-1)_* mu_c``, i.e. ``nu_c(a + p^v) = -c mu_c(a/c + p^v)``,
whose moments carry the factor ``(1 - c^k)``.  The two series differ by the unit
``-c theta(c) (1+t)^s(c)``, so the distinguished polynomials agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import QuadChar, bernoulli, bernoulli_poly, gen_bernoulli_quad, zeta_neg, valuation
from .lambda_algebra import (
    DEFAULT_D,
    DEFAULT_N,
    DistinguishedPoly,
    IwasawaSeries,
    PoleError,
    one_plus_t_power,
    weierstrass_prepare,
)
from .padic import (
    BranchChar,
    PadicNum,
    PrecisionError,
    from_rat,
    padic_exp,
    padic_log,
    s_exponent,
    teichmuller,
)

__all__ = [
    "MazurMeasure",
    "ZetaBranch",
    "QuadLData",
    "default_c",
    "measure_value",
    "moment_exact",
    "twisted_moment_exact",
    "riemann_moment",
    "iwasawa_series",
    "kl_zeta",
    "reciprocal_zeta",
    "reciprocal_zeta_routes",
    "reciprocal_L_dirichlet",
    "gen_bernoulli_padic",
    "quad_L_series",
]


def default_c(p: int, conductor: int = 1) -> int:
    """Smallest c > 1 prime to the conductor that topologically generates Z_p^x.

    Any c prime to p gives correct values, but when omega(c)^(j+1) = 1 or
    c^(p-1) = 1 mod p^2 the factor 1 - c^k acquires zeros of its own and the
    distinguished polynomial of branch j grows accordingly.
    """
    qs = [q for q in range(2, p) if (p - 1) % q == 0 and all(q % r for r in range(2, q))]
    c = 2
    while (math.gcd(c, p * conductor) != 1 or pow(c, p - 1, p * p) == 1
           or any(pow(c, (p - 1) // q, p) == 1 for q in qs)):
        c += 1
    return c


@dataclass(frozen=True)
class MazurMeasure:
    """mu_c on Z_p^*, or on prod_{l in primes} Z_l^* when aux primes are given."""

    p: int
    c: int
    aux_primes: tuple = ()

    def __post_init__(self):
        if self.c < 1:
            raise ValueError("c must be a positive integer")
        for q in (self.p,) + tuple(self.aux_primes):
            if self.c % q == 0:
                raise ValueError(f"c = {self.c} must be prime to {q}")
        object.__setattr__(self, "aux_primes", tuple(sorted(set(self.aux_primes) - {self.p})))

    @property
    def primes(self) -> tuple:
        return (self.p,) + self.aux_primes

    def cell(self, a: int, modulus: int) -> Fraction:
        return measure_value(self, a, modulus)

    def regularized_cell(self, a: int, modulus: int) -> Fraction:
        """nu_c(a + modulus) = -c * mu_c(a/c + modulus); moments carry (1 - c^k)."""
        return -self.c * measure_value(self, a * pow(self.c, -1, modulus) % modulus, modulus)


def _support_ok(modulus: int, primes) -> bool:
    m = modulus
    for q in primes:
        while m % q == 0:
            m //= q
    return m == 1


def measure_value(mu: MazurMeasure, a: int, modulus: int) -> Fraction:
    """mu_c(a + modulus*Z) = B_1({c a / N})/c - B_1(a / N), with N = modulus."""
    if modulus < 1 or not _support_ok(modulus, mu.primes):
        raise ValueError(f"modulus {modulus} must be supported on {mu.primes}")
    if math.gcd(a, modulus) != 1:
        raise ValueError(f"{a} is not a unit mod {modulus}")
    c = mu.c
    val = bernoulli_poly(1, Fraction((c * a) % modulus, modulus)) / c - bernoulli_poly(
        1, Fraction(a % modulus, modulus)
    )
    for q in mu.primes:
        if valuation(val, q) < 0:
            raise ArithmeticError(f"cell value {val} is not {q}-integral")
    return val


def moment_exact(p: int, c: int, k: int) -> Fraction:
    """(1 - c^k) zeta(1-k) (1 - p^(k-1))."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return (1 - Fraction(c) ** k) * zeta_neg(k) * (1 - Fraction(p) ** (k - 1))


def twisted_moment_exact(p: int, c: int, k: int, psi: QuadChar | None) -> Fraction:
    """(1 - psi(c) c^k) L(1-k, psi) (1 - psi(p) p^(k-1)); psi = None is zeta."""
    if psi is None or psi.is_trivial:
        return moment_exact(p, c, k)
    L = -gen_bernoulli_quad(k, psi) / k
    return (1 - psi(c) * Fraction(c) ** k) * L * (1 - psi(p) * Fraction(p) ** (k - 1))


def riemann_moment(p: int, c: int, k: int, v: int) -> Fraction:
    """sum over units a mod p^v of a^(k-1) nu_c(a + p^v); agrees with
    :func:`moment_exact` mod p^(v-1)."""
    if v < 1:
        raise ValueError("level must be >= 1")
    mu = MazurMeasure(p, c)
    q = p**v
    return sum(
        (Fraction(a) ** (k - 1) * mu.regularized_cell(a, q) for a in range(1, q) if a % p),
        Fraction(0),
    )


# ---------------------------------------------------------------------------
# Branch series


@dataclass(frozen=True)
class ZetaBranch:
    """Branch theta = omega^j (times an optional quadratic psi) of nu_c, prepared."""

    p: int
    j: int
    c: int
    G: IwasawaSeries
    mu: int
    P: DistinguishedPoly
    U: IwasawaSeries
    psi: QuadChar | None = None
    nodes: tuple = ()
    method: str = "interpolation"

    @property
    def is_zero(self) -> bool:
        return self.G.is_exact and all(c.is_exact_zero() for c in self.G.coeffs)

    @property
    def lam(self) -> int:
        return self.P.degree

    @property
    def Ustar(self) -> IwasawaSeries:
        from .lambda_algebra import series_invert

        return series_invert(self.U)

    def evaluate(self, t0) -> PadicNum:
        return self.G.evaluate(t0)


def _node_ks(p: int, j: int, M: int) -> list[int]:
    k0 = j + 1 if j + 1 >= 2 else j + p
    return [k0 + r * (p - 1) for r in range(M)]


def _branch_is_zero(p: int, j: int, psi: QuadChar | None) -> bool:
    # nodes have k = j+1 mod 2; L(1-k, psi) = 0 unless psi(-1) = (-1)^k
    sign = psi(-1) if psi is not None and not psi.is_trivial else 1
    return sign != (-1) ** (j + 1)


def _newton_to_monomial(nodes: list[PadicNum], values: list[PadicNum]) -> list[PadicNum]:
    """Interpolating polynomial through (nodes, values) in the monomial basis.

    Divided differences are formed in p-adic arithmetic, so every division by
    a node gap T_r - T_s (valuation 1 + ord_p(r - s)) is charged to the
    precision of the result automatically.
    """
    M = len(nodes)
    dd = list(values)
    for lvl in range(1, M):
        for r in range(M - 1, lvl - 1, -1):
            dd[r] = (dd[r] - dd[r - 1]) / (nodes[r] - nodes[r - lvl])
    p = nodes[0].p
    poly = [dd[M - 1]]
    # Horner in Newton form: poly <- dd[r] + (t - x_r) * poly
    for r in range(M - 2, -1, -1):
        nxt = [PadicNum.zero(p)] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i + 1] = nxt[i + 1] + c
            nxt[i] = nxt[i] - nodes[r] * c
        nxt[0] = nxt[0] + dd[r]
        poly = nxt
    return poly


def _interp_series(p: int, j: int, c: int, D: int, N: int, psi) -> tuple[IwasawaSeries, tuple]:
    M = D + N
    ks = _node_ks(p, j, M + 1)
    node_ks, held_k = ks[:M], ks[M]
    # the tableau loses about one digit per level plus ord_p of the level
    K = 2 * M + 4
    mod = p**K
    xs = [from_rat((pow(1 + p, k - 1, mod) - 1) % mod, p, absprec=K) for k in node_ks]
    ys = [from_rat(twisted_moment_exact(p, c, k, psi), p, absprec=K) for k in node_ks]
    poly = _newton_to_monomial(xs, ys)
    coeffs = []
    for i, q in enumerate(poly):
        if q.val < 0 and not q.is_zero():
            raise PrecisionError("interpolating polynomial is not p-integral")
        # a_i = q_i mod p^(M-i): the neglected part is a multiple of prod (t - T_s)
        coeffs.append(q.add_bigoh(M - i))
    if min(cf.absprec for cf in coeffs[:D]) < min(N, M - D + 1):
        raise PrecisionError("interpolation nodes too close to recover N digits")
    G = IwasawaSeries(p, coeffs, 0)
    # held-out node: the series must reproduce the exact moment
    T = from_rat((pow(1 + p, held_k - 1, mod) - 1) % mod, p, absprec=K)
    got = G.evaluate(T)
    want = twisted_moment_exact(p, c, held_k, psi)
    check = int(min(got.absprec, N))
    if not got.agrees(want, check):
        raise ArithmeticError(f"held-out node k={held_k} disagrees mod {p}^{check}")
    return G, tuple(node_ks)


def _riemann_series(p: int, j: int, c: int, D: int, N: int) -> IwasawaSeries:
    """Riemann sums over the cells mod p^v, v = N + 1.

    Each unit cell contains x = omega(g)^i (1+p)^e for exactly one pair
    (i, e) with 0 <= e < p^(v-1), and s(x) = e there, so the integrand
    omega(x)^j (1+t)^s(x) has integer binomial coefficients.  Replacing s by e
    moves coefficient n by at most p^(v-1-ord(n!)), which is the claimed
    precision.
    """
    v = N + 1
    q = p**v
    cinv = pow(c, -1, q)
    half = (1 - c) * pow(2, -1, q) % q
    g = next(a for a in range(2, p + 1) if _is_primitive_root(a, p)) if p > 2 else 1
    wg = int(teichmuller(g, p, v).lift())
    sums = [0] * D
    wi = 1
    for i in range(p - 1):
        theta = pow(wi, j, q)
        x = wi % q
        for e in range(p ** (v - 1)):
            # nu_c(x + p^v) = (c b - x)/p^v + (1 - c)/2 with b = x/c mod p^v
            w = (c * (x * cinv % q) - x) // q + half
            weight = theta * w % q
            if weight:
                b = 1
                for n in range(D):
                    if n:
                        b = b * (e - n + 1) // n
                        if b == 0:
                            break
                    sums[n] += weight * b
            x = x * (1 + p) % q
        wi = wi * wg % q
    out = []
    for n, total in enumerate(sums):
        prec = max(v - 1 - valuation(math.factorial(n), p), 0)
        out.append(from_rat(total % q, p, absprec=v).add_bigoh(prec))
    return IwasawaSeries(p, out, 0)


def _is_primitive_root(g: int, p: int) -> bool:
    return all(pow(g, (p - 1) // q, p) != 1 for q in range(2, p) if (p - 1) % q == 0)


@lru_cache(maxsize=512)
def iwasawa_series(
    p: int,
    j: int,
    c: int | None = None,
    D: int = DEFAULT_D,
    N: int = DEFAULT_N,
    method: str = "interpolation",
    psi: QuadChar | None = None,
) -> ZetaBranch:
    """G_{theta,c}(t) = int theta(y) (1+t)^s(y) dnu_c with theta = omega^j (psi).

    ``method='interpolation'`` builds the series from exact moments at the nodes
    t = (1+p)^(k-1) - 1, k = j+1 mod (p-1); ``'riemann'`` sums over cells mod
    p^(N+1) and is meant as an independent check at small p.
    """
    j %= p - 1
    if psi is not None and psi.is_trivial:
        psi = None
    C = psi.conductor if psi is not None else 1
    if psi is not None and C % p == 0:
        raise ValueError("quadratic twist must have conductor prime to p")
    c = default_c(p, C) if c is None else c
    if math.gcd(c, p * C) != 1 or c < 2:
        raise ValueError(f"c = {c} must exceed 1 and be prime to {p * C}")
    if _branch_is_zero(p, j, psi):
        G = IwasawaSeries(p, [], math.inf)
        return ZetaBranch(p, j, c, G, 0, DistinguishedPoly.one(p), G, psi, (), method)
    if method == "interpolation":
        G, nodes = _interp_series(p, j, c, D, N, psi)
    elif method == "riemann":
        if psi is not None:
            raise ValueError("the Riemann-sum route is only implemented for untwisted branches")
        G, nodes = _riemann_series(p, j, c, D, N), ()
    else:
        raise ValueError(f"unknown method {method!r}")
    mu, P, U = weierstrass_prepare(G)
    return ZetaBranch(p, j, c, G, mu, P, U, psi, nodes, method)


def _pow_one_plus(t0: PadicNum, s: PadicNum) -> PadicNum:
    """(1 + t0)^s for t0 in pZ_p, s in Z_p."""
    if t0.is_exact_zero():
        return from_rat(1, t0.p, absprec=int(s.absprec) + 1)
    A = int(min(t0.absprec, s.absprec + t0.val))
    one_t = (t0 + 1).add_bigoh(A)
    return padic_exp(padic_log(one_t) * s)


def _as_point(t0, p: int, N: int) -> PadicNum:
    if isinstance(t0, PadicNum):
        return t0
    return from_rat(t0, p, absprec=N) if t0 != 0 else PadicNum.zero(p, N)


def kl_zeta(p: int, c: int | None, j: int, t0, D: int = DEFAULT_D, N: int = DEFAULT_N) -> PadicNum:
    """zeta_p(x) for x(y) = omega(y)^j (1+t0)^s(y): G_j(t0) / (1 - c x(c))."""
    c = default_c(p) if c is None else c
    t0 = _as_point(t0, p, N + 2)
    br = iwasawa_series(p, j % (p - 1), c, D, N)
    xc = teichmuller(c, p, N + 2) ** j * _pow_one_plus(t0, s_exponent(c, p, N + 2))
    den = 1 - xc * c
    num = br.evaluate(t0)
    if den.is_zero():
        raise PoleError("x is the excluded character y -> 1/y", location=t0)
    return num / den


def reciprocal_zeta_routes(p: int, k: int, N: int, c: int | None = None,
                           D: int = DEFAULT_D, Nw: int = DEFAULT_N) -> tuple[PadicNum, PadicNum]:
    """(route A, route B) for 1/(zeta(1-k)(1 - p^(k-1))).

    A reduces the exact rational -k/B_k/(1 - p^(k-1)); B is
    (1 - c^k) U*(T) / (p^mu P(T)) at T = (1+p)^(k-1) - 1.
    """
    if k < 2 or k % 2:
        raise ValueError("k must be even and >= 2")
    exact = 1 / (zeta_neg(k) * (1 - Fraction(p) ** (k - 1)))
    route_a = from_rat(exact, p, absprec=N)
    c = default_c(p) if c is None else c
    br = iwasawa_series(p, (k - 1) % (p - 1), c, D, Nw)
    T = from_rat((1 + p) ** (k - 1) - 1, p, absprec=Nw + D + 2)
    Ustar = br.Ustar.evaluate(T)
    PT = br.P.evaluate(T)
    if PT.is_zero():
        raise PoleError("T is a root of the distinguished polynomial", location=T)
    route_b = Ustar * (1 - Fraction(c) ** k) / PT
    if br.mu:
        route_b = route_b / Fraction(p) ** br.mu
    return route_a, route_b


def reciprocal_zeta(p: int, k: int, N: int, c: int | None = None,
                    D: int = DEFAULT_D, Nw: int = DEFAULT_N) -> PadicNum:
    """1/(zeta(1-k)(1 - p^(k-1))) to absolute precision N, cross-checked against
    the Iwasawa-function route."""
    a, b = reciprocal_zeta_routes(p, k, N, c, D, Nw)
    check = int(min(a.absprec, b.absprec))
    if not a.agrees(b, check):
        raise ArithmeticError(f"routes disagree for p={p}, k={k}: {a} vs {b}")
    return a


def gen_bernoulli_padic(k: int, chi: BranchChar, N: int) -> PadicNum:
    """B_{k,chi} = F^(k-1) sum_{b=1}^{F} chi(b) B_k(b/F) with F = cond(chi),
    in p-adic arithmetic (omega values are not rational)."""
    p = chi.p
    F = chi.conductor
    work = N + k + 4
    total = PadicNum.zero(p)
    for b in range(1, F + 1):
        val = chi(b, work)
        if val.is_zero():
            continue
        # F^(k-1) B_k(b/F) = sum_i binom(k,i) B_i F^(i-1) b^(k-i)
        poly = sum(
            (math.comb(k, i) * bernoulli(i) * Fraction(F) ** (i - 1) * b ** (k - i) for i in range(k + 1)),
            Fraction(0),
        )
        if poly:
            total = total + val * from_rat(poly, p, absprec=work)
    return total


def reciprocal_L_dirichlet(p: int, k: int, chi: BranchChar, N: int, c: int | None = None,
                           D: int = DEFAULT_D, Nw: int = DEFAULT_N) -> PadicNum:
    """1/(L(1-k, chi)(1 - chi(p) p^(k-1))) for a tame chi = omega^a psi, read
    off branch a+k-1 of the psi-twisted series at T = (1+p)^(k-1) - 1."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if chi.parity() != (-1) ** k:
        raise PoleError(f"L(1-{k}, chi) vanishes: parity of chi does not match k")
    psi = chi.twist if chi.twist is not None and not chi.twist.is_trivial else None
    C = psi.conductor if psi else 1
    c = default_c(p, C) if c is None else c
    br = iwasawa_series(p, (chi.j + k - 1) % (p - 1), c, D, Nw, "interpolation", psi)
    T = from_rat((1 + p) ** (k - 1) - 1, p, absprec=Nw + D + 2)
    GT = br.evaluate(T)
    if GT.is_zero():
        raise PoleError("L-value times Euler factor vanishes to working precision", location=T)
    chic = chi(c, Nw + 2)
    val = (1 - chic * Fraction(c) ** k) / GT
    return val.add_bigoh(N) if val.absprec > N else val


@dataclass(frozen=True)
class QuadLData:
    """Measure-side series for L(1-k', psi) on one branch and the regularizer
    u(T) = 1 - psi(c) c^k' written as a series in T = (1+p)^(k'-1) - 1."""

    branch: ZetaBranch
    u: IwasawaSeries
    u_prepared: tuple | None


def quad_L_series(p: int, psi: QuadChar | None, m: int, c: int | None, r: int,
                  D: int = DEFAULT_D, N: int = DEFAULT_N) -> QuadLData:
    """Series for L(1-k+m/2, psi)(1 - psi(p) p^(k-m/2-1)) times (1 - psi(c) c^(k-m/2)),
    for weights k = r mod p-1 (m even).

    The variable is T = (1+p)^(k'-1) - 1 with k' = k - m/2, on branch
    j = k'-1 mod p-1.  When omega^(j+1) psi is trivial the regularizer is a
    non-unit; it is then returned Weierstrass-prepared so the caller can divide
    it out.
    """
    if m % 2:
        raise ValueError("m must be even")
    j = (r - m // 2 - 1) % (p - 1)
    if psi is not None and psi.is_trivial:
        psi = None
    C = psi.conductor if psi else 1
    c = default_c(p, C) if c is None else c
    if math.gcd(c, p * C) != 1:
        raise ValueError(f"c = {c} shares a factor with {p * C}")
    br = iwasawa_series(p, j % (p - 1), c, D, N, "interpolation", psi)
    work = N + D + 2
    # psi(c) c^k' = psi(c) omega(c)^(j+1) <c> (1+T)^s(c)
    wc = teichmuller(c, p, work)
    const = wc ** ((j + 1) % (p - 1)) * (from_rat(c, p, absprec=work) / wc)
    if psi is not None:
        const = const * psi(c)
    series = one_plus_t_power(s_exponent(c, p, work), D + N)
    u = IwasawaSeries.one(p) - series.scale(const)
    prepared = None
    if not u.coeff(0).is_unit():
        prepared = weierstrass_prepare(u)
    return QuadLData(br, u, prepared)
