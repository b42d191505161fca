"""Fourier coefficients of Siegel-Eisenstein series of genus 1 and 2, their
p-regular parts, and the p-adic families S/P interpolating them in the
variable t = (1+p)^k - 1.

Normalizations (pinned by the classical oracles E_k = 1 + 2/zeta(1-k) sum sigma
q^n and the genus-2 theta series of E8):

* genus 1: ``normalized = h^(k-1) M_h(k)`` and ``raw = 2 normalized / zeta(1-k)``;
* genus 2: with -det(2h) = D0 f^2, ``normalized = (f/2)^(2k-3) M_h(k) L(2-k, psi_h)``
  and ``raw = 2^(2k-2) normalized / (zeta(1-k) zeta(3-2k))``.

The factor 2^(-m/2) of the normalized series is dropped so every value stays
rational.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import (
    QuadChar,
    bernoulli,
    divisor_power_sum,
    divisors,
    factorize,
    gen_bernoulli_quad,
    kronecker,
    zeta_neg,
)
from .lambda_algebra import (
    DEFAULT_D,
    DEFAULT_N,
    DistinguishedPoly,
    IwasawaSeries,
    PoleError,
    compose_poly_arg,
    one_plus_t_power,
    series_invert,
    series_mul,
    weierstrass_prepare,
)
from .measures import default_c, iwasawa_series, quad_L_series
from .padic import PadicNum, from_rat, s_exponent, t_coordinate, teichmuller

__all__ = [
    "HalfIntMatrix",
    "LocalDensity",
    "QExpansion",
    "CoeffFamily",
    "psi_and_conductor",
    "normalized_coeff",
    "raw_coeff",
    "cplus",
    "cminus",
    "p_regular_coeff",
    "p_regular_exact",
    "build_family",
    "eval_family",
    "elliptic_eisenstein",
    "singular_series_m1",
    "singular_series_tail",
    "zeta_even_float",
    "CheckReport",
    "remove_p_singular",
    "twist_average_check",
    "character_orthogonality",
]


@dataclass(frozen=True, order=True)
class HalfIntMatrix:
    """m = 1: (h,) ; m = 2: (a, b, c) for [[a, b/2], [b/2, c]]."""

    m: int
    entries: tuple

    def __post_init__(self):
        e = tuple(int(x) for x in self.entries)
        object.__setattr__(self, "entries", e)
        if self.m == 1:
            if len(e) != 1 or e[0] <= 0:
                raise ValueError("genus 1 index must be a positive integer")
        elif self.m == 2:
            if len(e) != 3:
                raise ValueError("genus 2 index needs (a, b, c)")
            a, b, c = e
            if a <= 0 or 4 * a * c - b * b <= 0:
                raise ValueError(f"{e} is not positive definite")
        else:
            raise ValueError("only genus 1 and 2 are supported")

    @classmethod
    def of(cls, *entries: int) -> "HalfIntMatrix":
        return cls(1 if len(entries) == 1 else 2, tuple(entries))

    @property
    def det2h(self) -> int:
        if self.m == 1:
            return 2 * self.entries[0]
        a, b, c = self.entries
        return 4 * a * c - b * b

    @property
    def det_h(self) -> Fraction:
        return Fraction(self.det2h, 2**self.m)

    @property
    def content(self) -> int:
        return math.gcd(*self.entries)

    @property
    def trace(self) -> int:
        return self.entries[0] if self.m == 1 else self.entries[0] + self.entries[2]

    def __str__(self):
        return ",".join(map(str, self.entries))


def psi_and_conductor(h: HalfIntMatrix, m: int | None = None) -> QuadChar:
    """psi_h for discriminant (-1)^(m/2) det(2h)."""
    m = h.m if m is None else m
    if m % 2:
        raise ValueError("psi_h is only defined for even genus")
    return QuadChar.from_discriminant((-1) ** (m // 2) * h.det2h)


@dataclass(frozen=True)
class LocalDensity:
    """Primes l -> integer polynomial M_l(X) in X = l^(-k) (coefficients from X^0)."""

    polys: tuple = ()

    @classmethod
    def of(cls, mapping: dict) -> "LocalDensity":
        for q, cs in mapping.items():
            if not cs or cs[0] != 1:
                raise ValueError(f"M_{q} must have constant term 1")
        return cls(tuple(sorted((int(q), tuple(int(c) for c in cs)) for q, cs in mapping.items())))

    @classmethod
    def identity(cls) -> "LocalDensity":
        return cls(())

    @classmethod
    def genus1(cls, h: int) -> "LocalDensity":
        """M_l(X) = sum_{i<=e} (l X)^i for l^e || h, so h^(k-1) M_h(k) = sigma_{k-1}(h)."""
        return cls.of({q: [q**i for i in range(e + 1)] for q, e in factorize(h).factors})

    @classmethod
    def genus2(cls, h: HalfIntMatrix) -> "LocalDensity":
        """Local factors of the Eichler-Zagier coefficient formula, divided by
        f^(2k-3) L(2-k, psi): for l^a || f and l^b || content(h),
        M_l(X) = sum_{i<=b} sum_{g<=1} sum_{s} (-psi(l))^g l^(3a-i-2g-3s) X^(2a-i-g-2s)."""
        psi = psi_and_conductor(h)
        e = h.content
        out = {}
        for q, a in factorize(psi.f).factors:
            b = _ord(e, q)
            chi = kronecker(psi.D0, q)
            cs = [0] * (2 * a + 1)
            for i in range(b + 1):
                for g in (0, 1):
                    if g > a - i:
                        continue
                    for s in range(a - i - g + 1):
                        cs[2 * a - i - g - 2 * s] += (-chi) ** g * q ** (3 * a - i - 2 * g - 3 * s)
            while len(cs) > 1 and cs[-1] == 0:
                cs.pop()
            out[q] = cs
        return cls.of(out)

    @classmethod
    def default(cls, h: HalfIntMatrix) -> "LocalDensity":
        return cls.genus1(h.entries[0]) if h.m == 1 else cls.genus2(h)

    @property
    def primes(self) -> tuple:
        return tuple(q for q, _ in self.polys)

    def evaluate(self, k: int) -> Fraction:
        out = Fraction(1)
        for q, cs in self.polys:
            x = Fraction(1, q**k)
            out *= sum((c * x**i for i, c in enumerate(cs)), Fraction(0))
        return out

    def iwasawa(self, p: int, r: int, D: int, N: int) -> IwasawaSeries:
        """k -> M_h(k) as a series in t = (1+p)^k - 1 on the branch k = r mod p-1."""
        out = IwasawaSeries.one(p)
        for q, cs in self.polys:
            if q % p == 0:
                raise ValueError("local density at p cannot be interpolated")
            factor = IwasawaSeries.one(p)
            for i, c in enumerate(cs[1:], start=1):
                if c:
                    factor = factor + _atilde(q, -i, p, r, D, N).scale(c)
            out = series_mul(out, factor, D=D)
        return out


def _ord(n: int, q: int) -> int:
    v = 0
    while n % q == 0:
        n //= q
        v += 1
    return v


def _check_weight(k: int, m: int) -> None:
    if k % 2 or k <= m + 1:
        raise ValueError(f"weight k={k} must be even and exceed m+1={m + 1}")


def normalized_coeff(h: HalfIntMatrix, k: int, m: int | None = None,
                     M: LocalDensity | None = None) -> Fraction:
    """a_h of the normalized series, without the constant 2^(-m/2)."""
    m = h.m if m is None else m
    _check_weight(k, m)
    M = LocalDensity.default(h) if M is None else M
    if m == 1:
        return Fraction(h.entries[0]) ** (k - 1) * M.evaluate(k)
    psi = psi_and_conductor(h)
    # (det h)^(k-3/2) C_h^(3/2-k) = (f^2/4)^(k-3/2) = (f/2)^(2k-3)
    L = -gen_bernoulli_quad(k - 1, psi) / (k - 1)
    return Fraction(psi.f, 2) ** (2 * k - 3) * M.evaluate(k) * L


def _zeta_product(k: int, m: int) -> Fraction:
    out = zeta_neg(k)
    for i in range(1, m // 2 + 1):
        out *= zeta_neg(2 * k - 2 * i)
    return out


def raw_coeff(h: HalfIntMatrix, k: int, m: int | None = None, M: LocalDensity | None = None) -> Fraction:
    """a_h(E_k^m), the Fourier coefficient of the Eisenstein series with constant term 1."""
    m = h.m if m is None else m
    _check_weight(k, m)
    zp = _zeta_product(k, m)
    if zp == 0:
        raise ZeroDivisionError("zeta product vanishes")
    scale = 2 if m == 1 else Fraction(2) ** (2 * k - 2)
    return scale * normalized_coeff(h, k, m, M) / zp


def cplus(h: HalfIntMatrix, k: int, m: int, p: int) -> Fraction:
    """Euler factor linking E*_k(chi_0) to E_k: negative powers of p."""
    if h.det2h % p == 0:
        raise ValueError("p divides det(2h)")
    P = Fraction(p)
    out = 1 - P ** (-k)
    if m % 2:
        for i in range(1, (m - 1) // 2 + 1):
            out *= 1 - P ** (-2 * k + 2 * i)
        return out
    psi = psi_and_conductor(h, m)
    out *= 1 + psi(p) * P ** (-k + m // 2)
    for i in range(1, m // 2):
        out *= 1 - P ** (-2 * k + 2 * i)
    return out


def cminus(h: HalfIntMatrix, k: int, m: int, p: int) -> Fraction:
    """Factor turning a_h(E_k^m) into its p-regular part: positive powers of p."""
    if h.det2h % p == 0:
        raise ValueError("p divides det(2h)")
    P = Fraction(p)
    den = 1 - P ** (k - 1)
    if m % 2:
        for i in range(1, (m - 1) // 2 + 1):
            den *= 1 - P ** (2 * k - 2 * i - 1)
        return 1 / den
    for i in range(1, m // 2 + 1):
        den *= 1 - P ** (2 * k - 2 * i - 1)
    psi = psi_and_conductor(h, m)
    return (1 - psi(p) * P ** (k - m // 2 - 1)) / den


def p_regular_exact(h: HalfIntMatrix, k: int, m: int, p: int, M: LocalDensity | None = None) -> Fraction:
    return raw_coeff(h, k, m, M) * cminus(h, k, m, p)


def p_regular_coeff(h: HalfIntMatrix, k: int, m: int, p: int, M: LocalDensity | None = None,
                    N: int = DEFAULT_N) -> PadicNum:
    """a_h^(p)(k) = a_h(E_k^m) C^-(h, k, p) reduced to absolute precision N."""
    return from_rat(p_regular_exact(h, k, m, p, M), p, absprec=N)


# ---------------------------------------------------------------------------
# p-adic families


def _atilde(a: int | Fraction, e: int, p: int, r: int, D: int, N: int) -> IwasawaSeries:
    """k -> a^(e k) on the branch k = r mod p-1: omega(a)^(e r) (1+t)^(e s(a))."""
    a = Fraction(a)
    work = N + D + 4
    if a.denominator != 1:
        return _atilde(a.numerator, e, p, r, D, N) * _atilde(a.denominator, -e, p, r, D, N)
    a = int(a)
    w = teichmuller(a, p, work) ** ((e * r) % (p - 1))
    s = s_exponent(a, p, work) * e
    return one_plus_t_power(s, D).scale(w)


def _arg_shift(p: int, shift: int) -> list:
    """(1+t)(1+p)^(-shift) - 1 as polynomial coefficients."""
    u = Fraction(1, (1 + p) ** shift)
    return [u - 1, u]


def _arg_square(p: int, shift: int) -> list:
    """(1+t)^2 (1+p)^(-shift) - 1."""
    u = Fraction(1, (1 + p) ** shift)
    return [u - 1, 2 * u, u]


@dataclass
class CoeffFamily:
    """a_h^(p)(k) = p^mu S(t) / P(t) at t = (1+p)^k - 1, for k = r mod p-1."""

    h: HalfIntMatrix
    p: int
    r: int
    c: int
    S: IwasawaSeries
    P: DistinguishedPoly
    mu: int = 0
    D: int = DEFAULT_D
    N: int = DEFAULT_N
    M: LocalDensity = field(default_factory=LocalDensity.identity)
    factors: dict = field(default_factory=dict)

    @property
    def m(self) -> int:
        return self.h.m

    def audit(self) -> dict:
        """Constituent factors and their shapes, for the CLI audit trail."""
        out = {}
        for name, f in self.factors.items():
            if isinstance(f, DistinguishedPoly):
                out[name] = {"kind": "poly", "degree": f.degree, "value": repr(f)}
            elif isinstance(f, IwasawaSeries):
                out[name] = {"kind": "series", "D": f.D, "N": f.N, "head": [str(c) for c in f.coeffs[:4]]}
            else:
                out[name] = {"kind": "scalar", "value": str(f)}
        return out


def _prepare_composed(f, arg, D: int, work: int):
    """Compose a distinguished polynomial with arg and split off its unit part."""
    comp = compose_poly_arg(f, arg)
    comp = IwasawaSeries(comp.p, [c.add_bigoh(work) for c in comp.coeffs], comp.tail)
    padded = IwasawaSeries(comp.p, list(comp.coeffs) + [PadicNum.zero(comp.p)] * max(0, D - comp.D), comp.tail)
    return weierstrass_prepare(padded)


def build_family(h: HalfIntMatrix, p: int, c: int | None = None, r: int | None = None,
                 D: int = DEFAULT_D, N: int = DEFAULT_N, M: LocalDensity | None = None) -> CoeffFamily:
    """Assemble S^E and P^E for the p-regular coefficient a_h^(p)(k), k = r mod p-1.

    Genus 1:  a^(p) = 2 sigma_{k-1}(h) / (zeta(1-k)(1-p^(k-1))), and the zeta
    reciprocal is (1 - c^k) U*(T1) / P(T1) with T1 = (1+t)/(1+p) - 1.
    Genus 2 adds the zeta(3-2k) branch at T2 = (1+t)^2/(1+p)^3 - 1, the
    psi_h-twisted L-series at T3 = (1+t)/(1+p)^2 - 1, and its regularizer.
    Composed polynomials are re-prepared; their distinguished parts multiply
    into P^E and their unit parts move into S^E.
    """
    m = h.m
    if h.det2h % p == 0:
        raise ValueError(f"p = {p} divides det(2h) = {h.det2h}")
    r = 0 if r is None else r % (p - 1)
    if r % 2:
        raise ValueError("the branch residue of an even weight must be even")
    c = default_c(p, h.det2h) if c is None else c
    if math.gcd(c, p * h.det2h) != 1 or c < 2:
        raise ValueError(f"c = {c} must exceed 1 and be prime to p det(2h)")
    M = LocalDensity.default(h) if M is None else M
    L = D + N
    work = N + D + 4
    factors: dict = {}
    mu = 0

    # elementary factor: 2 h^(k-1) M_h(k)  or  2 f^(2k-3) M_h(k)
    if m == 1:
        hv = h.entries[0]
        Mt = _atilde(hv, 1, p, r, L, N).scale(Fraction(2, hv))
    else:
        psi = psi_and_conductor(h)
        Mt = _atilde(psi.f, 2, p, r, L, N).scale(Fraction(2, psi.f**3))
    if M.polys:
        Mt = series_mul(Mt, M.iwasawa(p, r, L, N), D=L)
    factors["M_h"] = Mt
    S = Mt

    # 1/(zeta(1-k)(1-p^(k-1))) = (1 - c^k) U*_{r-1}(T1) / P_{r-1}(T1)
    br1 = iwasawa_series(p, (r - 1) % (p - 1), c, D, N)
    arg1 = _arg_shift(p, 1)
    c1 = IwasawaSeries.one(p) - _atilde(c, 1, p, r, L, N)
    U1 = compose_poly_arg(br1.Ustar, arg1)
    mu1, Pd1, V1 = _prepare_composed(br1.P, arg1, L, work)
    factors.update({"1-c^k": c1, "U*_zeta(1-k)": U1, "P_zeta(1-k)": Pd1})
    S = series_mul(series_mul(S, c1, D=L), series_mul(U1, series_invert(V1, L), D=L), D=L)
    P = Pd1
    mu -= br1.mu + mu1

    if m == 2:
        # 1/(zeta(3-2k)(1-p^(2k-3))): weight 2k-2, branch 2r-3
        br2 = iwasawa_series(p, (2 * r - 3) % (p - 1), c, D, N)
        arg2 = _arg_square(p, 3)
        c2 = IwasawaSeries.one(p) - _atilde(c, 2, p, r, L, N).scale(Fraction(1, c * c))
        U2 = compose_poly_arg(br2.Ustar, arg2)
        mu2, Pd2, V2 = _prepare_composed(br2.P, arg2, L, work)
        factors.update({"1-c^(2k-2)": c2, "U*_zeta(3-2k)": U2, "P_zeta(3-2k)": Pd2})
        S = series_mul(series_mul(S, c2, D=L), series_mul(U2, series_invert(V2, L), D=L), D=L)
        P = P * Pd2
        mu -= br2.mu + mu2

        # L(2-k, psi)(1 - psi(p) p^(k-2)) = G_psi(T3) / u(T3)
        ql = quad_L_series(p, psi, 2, c, r, D, N)
        arg3 = _arg_shift(p, 2)
        G3 = compose_poly_arg(ql.branch.G, arg3)
        u3 = compose_poly_arg(ql.u, arg3)
        factors.update({"G_psi": G3, "u_c": u3})
        S = series_mul(S, G3, D=L)
        if u3.coeff(0).is_unit():
            S = series_mul(S, series_invert(u3, L), D=L)
        else:
            muu, Pu, Vu = weierstrass_prepare(u3)
            factors["P_regularizer"] = Pu
            S = series_mul(S, series_invert(Vu, L), D=L)
            P = P * Pu
            mu -= muu
    return CoeffFamily(h, p, r, c, S, P, mu, D, N, M, factors)


def eval_family(fam: CoeffFamily, k: int) -> PadicNum:
    """p^mu S(t_k) / P(t_k) with t_k = (1+p)^k - 1; PoleError when P(t_k) = 0."""
    p = fam.p
    if (k - fam.r) % (p - 1):
        raise ValueError(f"k = {k} is not in the branch k = {fam.r} mod {p - 1}")
    t = t_coordinate(k, p, fam.N + fam.D + 8)
    den = fam.P.evaluate(t)
    if den.is_zero():
        raise PoleError(f"P^E vanishes at k = {k}", location=t)
    val = fam.S.evaluate(t) / den
    if fam.mu:
        val = val * Fraction(p) ** fam.mu
    return val


# ---------------------------------------------------------------------------
# q-expansions


@dataclass
class QExpansion:
    """Finite Fourier expansion: index -> exact coefficient.

    Genus 1 indices are non-negative integers; genus 2 indices are
    HalfIntMatrix instances plus ``0`` for the constant term.  Every index of
    trace at most ``cutoff`` is present.
    """

    m: int
    cutoff: int
    coeffs: dict

    def __getitem__(self, idx):
        return self.coeffs.get(idx, Fraction(0))

    def scale(self, r) -> "QExpansion":
        return QExpansion(self.m, self.cutoff, {i: r * v for i, v in self.coeffs.items()})

    def to_json(self) -> dict:
        def key(i):
            if isinstance(i, HalfIntMatrix):
                return list(i.entries)
            return [int(i)]

        entries = [[key(i), str(v)] for i, v in sorted(self.coeffs.items(), key=lambda kv: _sort_key(kv[0]))]
        return {"m": self.m, "cutoff": self.cutoff, "entries": entries}

    @classmethod
    def from_json(cls, obj: dict) -> "QExpansion":
        m = obj["m"]
        out = {}
        for idx, val in obj["entries"]:
            if m == 1 or idx == [0]:
                key = int(idx[0])
            else:
                key = HalfIntMatrix(2, tuple(idx))
            out[key] = Fraction(val)
        return cls(m, obj["cutoff"], out)


def _sort_key(i):
    if isinstance(i, HalfIntMatrix):
        return (1, i.trace, i.entries)
    return (0, i, ())


def elliptic_eisenstein(k: int, cutoff: int) -> QExpansion:
    """1 + (2/zeta(1-k)) sum_{n<=cutoff} sigma_{k-1}(n) q^n."""
    if k < 4 or k % 2:
        raise ValueError("k must be even and >= 4")
    scale = 2 / zeta_neg(k)
    coeffs = {0: Fraction(1)}
    for n in range(1, cutoff + 1):
        coeffs[n] = scale * divisor_power_sum(k - 1, n)
    return QExpansion(1, cutoff, coeffs)


def remove_p_singular(f: QExpansion, p: int) -> QExpansion:
    """Zero the coefficients at indices with p | det(2h) (genus 1: p | n)."""
    out = {}
    for idx, v in f.coeffs.items():
        if isinstance(idx, HalfIntMatrix):
            det = idx.det2h
        else:
            det = 2 * idx if f.m == 1 else 0
        out[idx] = Fraction(0) if det % p == 0 else v
    return QExpansion(f.m, f.cutoff, out)


def _ramanujan_sum(c: int, n: int) -> int:
    """c_c(n) = sum over units d mod c of cos(2 pi n d / c) = sum_{d | (c, n)} mu(c/d) d."""
    total = 0
    for d in divisors(math.gcd(c, n)):
        total += _mobius(c // d) * d
    return total


def _mobius(n: int) -> int:
    if n == 1:
        return 1
    out = 1
    for q, e in factorize(n).factors:
        if e > 1:
            return 0
        out = -out
    return out


def singular_series_m1(h: int, k: int, C: int) -> float:
    """sum_{c<=C} c^(-k) c_c(h); tends to sigma_{k-1}(h) / (h^(k-1) zeta(k))."""
    if k < 4:
        raise ValueError("k must be >= 4")
    return math.fsum(_ramanujan_sum(c, h) / c**k for c in range(1, C + 1))


def singular_series_tail(k: int, C: int) -> float:
    """Bound for the terms beyond C: sum_{c>C} c^(1-k) <= C^(2-k)/(k-2)."""
    return C ** (2 - k) / (k - 2)


def zeta_even_float(k: int) -> float:
    """zeta(k) for even k >= 2 from Bernoulli numbers."""
    b = bernoulli(k)
    return float(abs(b) * (2 * math.pi) ** k / (2 * math.factorial(k)))


@dataclass
class CheckReport:
    name: str
    ok: bool
    max_error: float
    details: dict = field(default_factory=dict)


def twist_average_check(f: QExpansion, p: int, k: int, tol: float = 1e-9, cutoff: int | None = None) -> CheckReport:
    """Compare the p-regular filter [p not | n] C^+ a_n with the root-of-unity
    average (4p)^-1 sum_{h0 mod 4p, p not | h0} C^+ sum_x e(-h0 x/4p) f(z + x/4p),
    coefficient by coefficient in complex floating point.  Genus 1 only."""
    if f.m != 1:
        raise ValueError("twist averages are implemented for genus 1")
    cutoff = f.cutoff if cutoff is None else min(cutoff, f.cutoff)
    Mod = 4 * p
    roots = [cmath.exp(2j * math.pi * x / Mod) for x in range(Mod)]
    worst = 0.0
    for n in range(1, cutoff + 1):
        a = float(f[n])
        filtered = 0.0 if n % p == 0 else float(cplus(HalfIntMatrix(1, (n,)), k, 1, p)) * a
        acc = 0j
        for h0 in range(Mod):
            if h0 % p == 0:
                continue
            cp = float(cplus(HalfIntMatrix(1, (h0 if h0 else Mod,)), k, 1, p))
            inner = sum(roots[(-h0 * x + n * x) % Mod] for x in range(Mod))
            acc += cp * inner * a
        averaged = acc / Mod
        scale = max(1.0, abs(a))
        worst = max(worst, abs(averaged - filtered) / scale)
    return CheckReport("twist_average", worst < tol, worst, {"p": p, "k": k, "cutoff": cutoff})


def character_orthogonality(p: int, v: int = 1, N: int = 8) -> CheckReport:
    """(1/phi(p)) sum_i omega^i(b)^-1 omega^i(c) = [b = c mod p], checked exactly
    with Teichmuller values mod p^N and in complex floats."""
    if v != 1:
        raise ValueError("only v = 1 is supported")
    g = _primitive_root(p)
    log = {pow(g, e, p): e for e in range(p - 1)}
    worst = 0.0
    exact_ok = True
    for b in range(1, p):
        wb = teichmuller(b, p, N).inverse()
        for c in range(1, p):
            wc = teichmuller(c, p, N)
            acc = PadicNum.zero(p)
            for i in range(p - 1):
                acc = acc + (wb * wc) ** i
            acc = acc / (p - 1)
            want = 1 if b == c else 0
            exact_ok &= acc.agrees(want, N)
            z = sum(cmath.exp(2j * math.pi * i * (log[c] - log[b]) / (p - 1)) for i in range(p - 1)) / (p - 1)
            worst = max(worst, abs(z - want))
    return CheckReport("character_orthogonality", exact_ok and worst < 1e-12, worst, {"p": p, "exact": exact_ok})


def _primitive_root(p: int) -> int:
    qs = [q for q, _ in factorize(p - 1).factors]
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise ValueError("no primitive root")
