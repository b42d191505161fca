"""Truncated elements of the Iwasawa algebra Z_p[[t]], distinguished polynomials
and pseudomeasures (per-branch fractions S/P).

Precision model: every coefficient is a :class:`PadicNum` carrying its own
absolute precision, and a series also records ``tail``, the absolute precision
to which the coefficients past the stored ones are known to vanish.  ``tail = 0``
means "some unknown integral coefficients follow"; ``tail = inf`` marks an exact
polynomial.  Unknown coefficients are modelled as ``0 + O(p^tail)`` so ordinary
PadicNum arithmetic propagates losses without extra bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .padic import INF, BranchChar, PadicNum, PrecisionError, from_rat, t_coordinate

__all__ = [
    "IwasawaSeries",
    "DistinguishedPoly",
    "PseudoBranch",
    "Pseudomeasure",
    "PoleError",
    "series_add",
    "series_sub",
    "series_mul",
    "series_invert",
    "compose_poly_arg",
    "one_plus_t_power",
    "weierstrass_prepare",
    "newton_polygon",
    "valuation_at_tj",
    "roots_in_pZp",
    "mellin_eval",
    "distribution_values",
]

DEFAULT_D = 16
DEFAULT_N = 12


class PoleError(ArithmeticError):
    """A denominator vanishes (to working precision) at the evaluation point."""

    def __init__(self, msg: str, location=None):
        super().__init__(msg)
        self.location = location


def _unknown(p: int, absprec) -> PadicNum:
    return PadicNum.zero(p, absprec)


def _as_padic(x, p: int, absprec) -> PadicNum:
    if isinstance(x, PadicNum):
        return x
    return from_rat(x, p, absprec=absprec) if x != 0 else PadicNum.zero(p)


class IwasawaSeries:
    """c_0 + c_1 t + ... + c_{D-1} t^{D-1} + (unknown terms, each O(p^tail))."""

    __slots__ = ("p", "coeffs", "tail")

    def __init__(self, p: int, coeffs: Iterable[PadicNum], tail=0):
        self.p = p
        self.coeffs = tuple(coeffs)
        self.tail = tail
        for c in self.coeffs:
            if c.p != p:
                raise ValueError("mismatched primes")

    @classmethod
    def from_rats(cls, p: int, values: Sequence, N: int, tail=0) -> "IwasawaSeries":
        return cls(p, [_as_padic(Fraction(v), p, N) for v in values], tail)

    @classmethod
    def polynomial(cls, p: int, values: Sequence) -> "IwasawaSeries":
        """Exact polynomial from rationals or PadicNums (no unknown tail)."""
        cs = [v if isinstance(v, PadicNum) else _as_padic(Fraction(v), p, _EXACT) for v in values]
        return cls(p, cs, INF)

    @classmethod
    def one(cls, p: int) -> "IwasawaSeries":
        return cls.polynomial(p, [1])

    @classmethod
    def t(cls, p: int) -> "IwasawaSeries":
        return cls.polynomial(p, [0, 1])

    # -- shape ------------------------------------------------------------

    @property
    def D(self) -> int:
        return len(self.coeffs)

    @property
    def N(self):
        """Worst absolute precision over the stored coefficients."""
        return min((c.absprec for c in self.coeffs), default=INF)

    @property
    def is_exact(self) -> bool:
        return self.tail == INF

    def coeff(self, n: int) -> PadicNum:
        if n < len(self.coeffs):
            return self.coeffs[n]
        return _unknown(self.p, self.tail)

    def min_valuation(self):
        v = min((c.val for c in self.coeffs), default=INF)
        return min(v, self.tail)

    def truncate(self, D: int) -> "IwasawaSeries":
        if D >= self.D:
            return self
        return IwasawaSeries(self.p, self.coeffs[:D], 0)

    def add_bigoh(self, N) -> "IwasawaSeries":
        return IwasawaSeries(self.p, [c.add_bigoh(N) for c in self.coeffs], min(self.tail, N))

    def shift_down(self, lam: int) -> "IwasawaSeries":
        """tau_lam: drop the first lam coefficients and divide by t^lam."""
        return IwasawaSeries(self.p, self.coeffs[lam:], self.tail)

    def scale(self, r) -> "IwasawaSeries":
        """Multiply by an exact rational or a PadicNum constant."""
        p = self.p
        if not isinstance(r, PadicNum):
            r = Fraction(r)
            if r == 0:
                return IwasawaSeries(p, [], INF)
            rv = _rat_val(r, p)
        else:
            if r.is_exact_zero():
                return IwasawaSeries(p, [], INF)
            rv = r.val
        return IwasawaSeries(p, [c * r for c in self.coeffs], self.tail + rv)

    # -- evaluation -----------------------------------------------------------

    def __call__(self, t0) -> PadicNum:
        return self.evaluate(t0)

    def evaluate(self, t0) -> PadicNum:
        """f(t0) for t0 in pZ_p; the unknown tail contributes O(p^(tail + D*v(t0)))."""
        p = self.p
        if not isinstance(t0, PadicNum):
            t0 = from_rat(t0, p, absprec=_EXACT) if t0 != 0 else PadicNum.zero(p)
        if t0.val < 1:
            raise ValueError("evaluation point must lie in pZ_p")
        acc = PadicNum.zero(p)
        for c in reversed(self.coeffs):
            acc = acc * t0 + c
        if self.tail != INF:
            v0 = t0.val if t0.val != INF else INF
            bound = self.tail + self.D * v0 if v0 != INF else INF
            if bound != INF:
                acc = acc + _unknown(p, bound)
        return acc

    # -- arithmetic operators -------------------------------------------------

    def __add__(self, other):
        return series_add(self, _coerce_series(other, self.p))

    __radd__ = __add__

    def __sub__(self, other):
        return series_sub(self, _coerce_series(other, self.p))

    def __rsub__(self, other):
        return series_sub(_coerce_series(other, self.p), self)

    def __neg__(self):
        return IwasawaSeries(self.p, [-c for c in self.coeffs], self.tail)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return series_mul(self, _coerce_series(other, self.p))

    __rmul__ = __mul__

    def agrees(self, other: "IwasawaSeries", N: int, D: int | None = None) -> bool:
        """Coefficient-wise congruence mod (p^N, t^D)."""
        D = min(self.D, other.D) if D is None else D
        return all(self.coeff(i).agrees(other.coeff(i), N) for i in range(D))

    def __eq__(self, other):
        if not isinstance(other, IwasawaSeries):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs and self.tail == other.tail

    def __hash__(self):
        return hash((self.p, self.coeffs, self.tail))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero() and c.absprec == INF:
                continue
            terms.append(f"({c})" + ("" if i == 0 else "*t" if i == 1 else f"*t^{i}"))
        if self.tail != INF:
            terms.append(f"O(t^{self.D})")
        return " + ".join(terms) or "0"

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "N": None if self.N == INF else self.N,
            "D": self.D,
            "tail": None if self.tail == INF else self.tail,
            "coeffs": [_abs_digits(c) for c in self.coeffs],
            "precs": [None if c.absprec == INF else c.absprec for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "IwasawaSeries":
        p = obj["p"]
        cs = []
        for digits, prec in zip(obj["coeffs"], obj["precs"]):
            x = sum(d * p**i for i, d in enumerate(digits))
            cs.append(from_rat(x, p, absprec=prec) if prec is not None and x else
                      PadicNum.zero(p, INF if prec is None else prec))
        tail = INF if obj["tail"] is None else obj["tail"]
        return cls(p, cs, tail)


# exact rationals get this much absolute precision when forced into digits;
# far beyond anything the tables need, and recorded as a finite number so that
# precision bookkeeping stays honest
_EXACT = 200


def _abs_digits(c: PadicNum) -> list[int]:
    if c.is_zero():
        return []
    if c.val < 0:
        raise ValueError("series coefficients must be integral")
    return [0] * int(c.val) + c.digits()


def _coerce_series(x, p: int) -> IwasawaSeries:
    if isinstance(x, IwasawaSeries):
        return x
    if isinstance(x, DistinguishedPoly):
        return x.as_series()
    if isinstance(x, PadicNum):
        return IwasawaSeries(p, [x], INF)
    return IwasawaSeries.polynomial(p, [x])


def series_add(f: IwasawaSeries, g: IwasawaSeries) -> IwasawaSeries:
    p = f.p
    L = max(f.D, g.D)
    return IwasawaSeries(p, [f.coeff(i) + g.coeff(i) for i in range(L)], min(f.tail, g.tail))


def series_sub(f: IwasawaSeries, g: IwasawaSeries) -> IwasawaSeries:
    return series_add(f, -g)


def series_mul(f: IwasawaSeries, g: IwasawaSeries, D: int | None = None) -> IwasawaSeries:
    """Cauchy product, truncated to length D.

    Default length: the full product when either factor is an exact
    polynomial, otherwise the longer operand's length.
    """
    p = f.p
    full = f.D + g.D - 1 if f.D and g.D else 0
    if D is None:
        D = full if (f.is_exact or g.is_exact) else max(f.D, g.D)
    out = []
    for n in range(D):
        acc = PadicNum.zero(p)
        for i in range(n + 1):
            a, b = f.coeff(i), g.coeff(n - i)
            if a.is_exact_zero() or b.is_exact_zero():
                continue
            acc = acc + a * b
        out.append(acc)
    if D < full:
        # dropped coefficients are integral but otherwise unknown
        tail = 0
    elif f.is_exact and g.is_exact:
        tail = INF
    else:
        tail = min(f.tail + g.min_valuation(), g.tail + f.min_valuation())
    return IwasawaSeries(p, out, tail)


def series_invert(f: IwasawaSeries, D: int | None = None) -> IwasawaSeries:
    """1/f for f with unit constant term, to t-adic length D (default f.D)."""
    p = f.p
    c0 = f.coeff(0)
    if not c0.is_unit():
        raise ValueError("series_invert needs a unit constant term")
    D = f.D if D is None else D
    inv0 = c0.inverse()
    h = [inv0]
    for n in range(1, D):
        acc = PadicNum.zero(p)
        for i in range(1, n + 1):
            a = f.coeff(i)
            if a.is_exact_zero():
                continue
            acc = acc + a * h[n - i]
        h.append(-(acc * inv0))
    # beyond D the inverse is generally non-zero: only integrality is known
    tail = 0
    return IwasawaSeries(p, h, tail)


def one_plus_t_power(s: PadicNum, D: int) -> IwasawaSeries:
    """(1+t)^s = sum binom(s, n) t^n for s in Z_p."""
    from .padic import binomial_coeffs

    return IwasawaSeries(s.p, binomial_coeffs(s, D), 0)


def compose_poly_arg(f, arg: Sequence) -> IwasawaSeries:
    """f(arg(t)) for a polynomial argument a0 + a1 t + a2 t^2 with p | a0.

    For a series f of length D, the dropped terms f_n arg^n (n >= D) contribute
    to t^i only with valuation >= tail + (D - i) v(a0), which is what the result
    coefficients record.  A DistinguishedPoly (or exact series) composes exactly.
    """
    if isinstance(f, DistinguishedPoly):
        f = f.as_series()
    p = f.p
    a = [_as_padic(x, p, _EXACT) if not isinstance(x, PadicNum) else x for x in arg]
    if len(a) > 3:
        raise ValueError("argument degree must be at most 2")
    if a[0].val < 1:
        raise ValueError("composition needs arg(0) divisible by p")
    if any(x.val < 0 for x in a[1:]):
        raise ValueError("argument must have integral coefficients")
    arg_s = IwasawaSeries(p, a, INF)
    deg_arg = max((i for i, x in enumerate(a) if not x.is_exact_zero()), default=0)
    if f.is_exact:
        L = (f.D - 1) * max(deg_arg, 1) + 1 if f.D else 0
    else:
        L = f.D
    acc = IwasawaSeries(p, [], INF)
    power = IwasawaSeries.one(p)
    for n in range(f.D):
        c = f.coeffs[n]
        if not c.is_exact_zero():
            acc = series_add(acc, power.scale(c))
        power = series_mul(power, arg_s, D=L)
    coeffs = [acc.coeff(i) for i in range(L)]
    if f.is_exact:
        return IwasawaSeries(p, coeffs, INF)
    v0 = a[0].val
    coeffs = [c + _unknown(p, f.tail + (f.D - i) * v0) if v0 != INF else c + _unknown(p, f.tail)
              for i, c in enumerate(coeffs)]
    return IwasawaSeries(p, coeffs, f.tail)


@dataclass(frozen=True)
class DistinguishedPoly:
    """Monic polynomial a_0 + ... + t^lam with p | a_i for i < lam."""

    p: int
    coeffs: tuple

    def __post_init__(self):
        cs = tuple(self.coeffs)
        if not cs:
            raise ValueError("empty polynomial")
        object.__setattr__(self, "coeffs", cs)
        lead = cs[-1]
        if not (lead.unit == 1 and lead.val == 0):
            raise ValueError("distinguished polynomial must be monic")
        for c in cs[:-1]:
            if c.val < 1:
                raise ValueError("non-leading coefficients must be divisible by p")

    @classmethod
    def from_rats(cls, p: int, values: Sequence) -> "DistinguishedPoly":
        """Coefficients a_0..a_{lam-1} (the leading 1 is appended)."""
        cs = [_as_padic(Fraction(v), p, _EXACT) for v in values]
        return cls(p, tuple(cs) + (PadicNum(p, 1, 0, _EXACT),))

    @classmethod
    def one(cls, p: int) -> "DistinguishedPoly":
        return cls(p, (PadicNum(p, 1, 0, _EXACT),))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def as_series(self) -> IwasawaSeries:
        return IwasawaSeries(self.p, self.coeffs, INF)

    def evaluate(self, t0) -> PadicNum:
        return self.as_series().evaluate(t0)

    __call__ = evaluate

    def __mul__(self, other: "DistinguishedPoly") -> "DistinguishedPoly":
        prod = series_mul(self.as_series(), other.as_series())
        return DistinguishedPoly(self.p, prod.coeffs)

    def __repr__(self):
        return f"DistinguishedPoly({self.as_series()!r})"

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "degree": self.degree,
            "coeffs": [_abs_digits(c) for c in self.coeffs],
            "precs": [None if c.absprec == INF else c.absprec for c in self.coeffs],
        }


def weierstrass_prepare(G: IwasawaSeries, max_rounds: int | None = None):
    """G = p^mu * P * U with P distinguished and U a unit power series.

    Successive approximation: with G/p^mu = B + t^lam C (deg B < lam, C(0) a
    unit), iterate q <- C^{-1}(1 - tau_lam(q B)).  Each round gains one p-adic
    digit because p | B; the fixed point gives P = q G (degree lam) and U = 1/q.
    """
    p = G.p
    nonzero = [c.val for c in G.coeffs if not c.is_zero()]
    if not nonzero:
        raise PrecisionError("series vanishes to working precision")
    mu = int(min(nonzero))
    H = G.scale(Fraction(1, p**mu)) if mu else G
    lam = next((i for i, c in enumerate(H.coeffs) if c.is_unit()), None)
    if lam is None:
        raise PrecisionError("no unit coefficient below the t-adic cutoff")
    if lam == 0:
        return mu, DistinguishedPoly.one(p), H
    B = IwasawaSeries(p, H.coeffs[:lam], INF)
    C = H.shift_down(lam)
    Cinv = series_invert(C)
    q = Cinv
    budget = max_rounds or int(min(H.N, 4 * _EXACT)) + H.D + 4
    for _ in range(budget):
        nxt = series_mul(Cinv, series_sub(IwasawaSeries.one(p), series_mul(q, B).shift_down(lam)), D=C.D)
        nxt = IwasawaSeries(p, nxt.coeffs, 0)
        if nxt == q:
            break
        q = nxt
    # only q_0..q_{lam-1} enter the low coefficients of q*G
    qG = series_mul(q, H, D=lam)
    lowc = list(qG.coeffs[:lam])
    for c in lowc:
        if c.val < 1:
            raise PrecisionError("preparation did not converge to a distinguished polynomial")
    P = DistinguishedPoly(p, tuple(lowc) + (PadicNum(p, 1, 0, _EXACT),))
    U = series_invert(q)
    return mu, P, U


def newton_polygon(P: DistinguishedPoly) -> list[tuple]:
    """Root valuations with multiplicity: [(valuation, count)], valuation ascending.

    Read off the lower convex hull of {(i, ord_p a_i)}; a run of vanishing low
    coefficients gives roots at 0, reported with valuation inf.
    """
    pts = [(i, c.val) for i, c in enumerate(P.coeffs) if not c.is_exact_zero()]
    out = []
    if pts and pts[0][0] > 0:
        out.append((INF, pts[0][0]))
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    segs = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        segs.append((Fraction(y1 - y2) / (x2 - x1) if y1 != INF else INF, x2 - x1))
    segs.sort(key=lambda s: s[0])
    return segs + out


def valuation_at_tj(P: DistinguishedPoly, j: int) -> int:
    """ord_p P((1+p)^j - 1), by the unique-minimum rule or direct evaluation."""
    p = P.p
    if j <= 0:
        raise ValueError("j must be positive")
    e = 0
    jj = j
    while jj % p == 0:
        jj //= p
        e += 1
    vt = e + 1
    terms = [c.val + i * vt for i, c in enumerate(P.coeffs) if not c.is_exact_zero()]
    m = min(terms)
    if terms.count(m) == 1 and all(
        c.is_exact_zero() or not c.is_zero() or c.val + i * vt > m for i, c in enumerate(P.coeffs)
    ):
        return int(m)
    A = int(min(c.absprec for c in P.coeffs)) + 2
    val = P.evaluate(t_coordinate(j, p, A + vt * P.degree))
    if val.is_zero():
        raise PrecisionError("ambiguous minimum and value vanishes to working precision")
    return int(val.val)


def _taylor_shift(coeffs: list[int], r: int) -> list[int]:
    """Coefficients of f(x + r)."""
    c = list(coeffs)
    n = len(c)
    for i in range(n - 1):
        for k in range(n - 2, i - 1, -1):
            c[k] += r * c[k + 1]
    return c


def roots_in_pZp(P: DistinguishedPoly, N: int) -> list[PadicNum]:
    """Roots of P in pZ_p to absolute precision N, repeated by multiplicity.

    Digit-by-digit search: a disk x = r + p^k y (y in Z_p) survives while the
    shifted polynomial, divided by its content, has a root mod p; the number of
    roots inside is the last index where the content is attained.
    """
    p = P.p
    A = int(min(c.absprec for c in P.coeffs))
    mod = p**A
    base = [int(c.residue()) % mod for c in P.coeffs]
    roots: list[PadicNum] = []

    def disk(r: int, k: int):
        shifted = _taylor_shift(base, r)
        h = [(c * p ** (k * i)) % mod for i, c in enumerate(shifted)]
        vals = [_vp(c, p, A) for c in h]
        w = min(vals)
        n = max(i for i, v in enumerate(vals) if v == w)
        return h, w, n

    def rec(r: int, k: int):
        h, w, n = disk(r, k)
        if n == 0:
            return
        if k >= N or w >= A:
            prec = k if w >= A else N
            roots.extend([PadicNum(p, r, 0, prec) if r else PadicNum.zero(p, prec)] * n)
            return
        red = [(c // p**w) % p for c in h]
        for d in range(p):
            if sum(c * pow(d, i, p) for i, c in enumerate(red)) % p == 0:
                rec(r + d * p**k, k + 1)

    rec(0, 1)
    return roots


def _rat_val(r: Fraction, p: int) -> int:
    num, den, v = r.numerator, r.denominator, 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def _vp(x: int, p: int, cap: int) -> int:
    if x == 0:
        return cap
    v = 0
    while x % p == 0 and v < cap:
        x //= p
        v += 1
    return v


@dataclass(frozen=True)
class PseudoBranch:
    """p^mu * num(t) / den(t) on one branch."""

    num: IwasawaSeries
    den: DistinguishedPoly
    mu: int = 0


@dataclass
class Pseudomeasure:
    """Branch residue j mod p-1 -> PseudoBranch.  Missing branches are zero."""

    p: int
    branches: dict = field(default_factory=dict)

    def __setitem__(self, j: int, br: PseudoBranch):
        self.branches[j % (self.p - 1)] = br

    def __getitem__(self, j: int) -> PseudoBranch:
        return self.branches[j % (self.p - 1)]

    def __contains__(self, j: int) -> bool:
        return j % (self.p - 1) in self.branches

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "branches": {
                str(j): {"mu": b.mu, "num": b.num.to_json(), "den": b.den.to_json()}
                for j, b in sorted(self.branches.items())
            },
        }


def mellin_eval(rho: Pseudomeasure, j: int, t0) -> PadicNum:
    """p^mu S(t0) / P(t0) on branch j; PoleError when P(t0) vanishes."""
    p = rho.p
    if j not in rho:
        return PadicNum.zero(p)
    br = rho[j]
    if not isinstance(t0, PadicNum):
        t0 = from_rat(t0, p, absprec=_EXACT) if t0 != 0 else PadicNum.zero(p)
    den = br.den.evaluate(t0)
    if den.is_zero():
        raise PoleError(f"denominator vanishes at t0 = {t0}", location=t0)
    val = br.num.evaluate(t0) / den
    return val * Fraction(p) ** br.mu if br.mu else val


def distribution_values(rho: Pseudomeasure, x: BranchChar, v: int = 1, t0=0, N: int = DEFAULT_N) -> dict:
    """Cell values rho_x(a + pZ_p) for a = 1..p-1.

    Averages the Mellin transform over tame characters omega^i:
    (1/(p-1)) * sum'_i omega(a)^(-i) * M(omega^i x), omitting terms whose
    denominator vanishes.  ``t0`` is the wild coordinate of x (0 for a tame x).
    """
    if v != 1:
        raise ValueError("only tame level v = 1 is supported")
    if x.twist is not None:
        raise ValueError("quadratic twists are not branches of a tame pseudomeasure")
    p = rho.p
    mellin = {}
    for i in range(p - 1):
        try:
            mellin[i] = mellin_eval(rho, i + x.j, t0)
        except PoleError:
            continue
    out = {}
    for a in range(1, p):
        w_inv = BranchChar(p, 1)(a, N).inverse()
        acc = PadicNum.zero(p)
        for i, m in mellin.items():
            acc = acc + (w_inv ** i) * m
        out[a] = acc / (p - 1)
    return out
