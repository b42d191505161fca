"""Capped-precision p-adic numbers and the p-adic special functions used by the
Iwasawa machinery (Teichmuller lift, logarithm, exponent of 1+p).

A :class:`PadicNum` is ``unit * p**val + O(p**(val + prec))``: ``prec`` is the
relative precision. Zero known to absolute precision ``A`` is stored with
``unit = 0, prec = 0, val = A``; an exact zero has ``val = inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import QuadChar, valuation

__all__ = [
    "PadicNum",
    "PrecisionError",
    "BranchChar",
    "from_rat",
    "teichmuller",
    "angle",
    "padic_log",
    "padic_exp",
    "s_exponent",
    "t_coordinate",
    "binomial_coeffs",
]

INF = math.inf


class PrecisionError(ArithmeticError):
    """Raised when an operation would need digits that are not known."""


def _check_prime(p: int) -> None:
    if p < 3 or p % 2 == 0:
        raise ValueError(f"p must be an odd prime, got {p}")


def _strip(p: int, x: int) -> tuple[int, int]:
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return x, v


class PadicNum:
    __slots__ = ("p", "val", "unit", "prec")

    def __init__(self, p: int, unit: int, val: int | float, prec: int | float):
        self.p = p
        if val == INF:
            self.val, self.unit, self.prec = INF, 0, 0
            return
        if prec <= 0 or unit % p**prec == 0:
            self.val, self.unit, self.prec = val + max(prec, 0), 0, 0
            return
        unit %= p**prec
        u, v = _strip(p, unit)
        self.val = val + v
        self.prec = prec - v
        self.unit = u

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, p: int, absprec: int | float = INF) -> "PadicNum":
        return cls(p, 0, absprec, 0)

    @classmethod
    def from_int(cls, x: int, p: int, absprec: int) -> "PadicNum":
        """Integer or rational reduced to absolute precision ``absprec``."""
        return from_rat(x, p, absprec=absprec)

    # -- basic properties ----------------------------------------------------

    @property
    def absprec(self) -> int | float:
        return self.val + self.prec

    def is_zero(self) -> bool:
        return self.unit == 0

    def is_exact_zero(self) -> bool:
        return self.val == INF

    def is_unit(self) -> bool:
        return self.unit != 0 and self.val == 0

    def valuation(self) -> int | float:
        return self.val

    def lift(self) -> Fraction:
        """Rational representative ``unit * p**val``."""
        if self.unit == 0:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.val

    def residue(self) -> int:
        """Integer representative in [0, p**absprec) for integral values."""
        if self.val < 0:
            raise ValueError("not integral")
        if self.unit == 0:
            return 0
        return self.unit * self.p**self.val

    def add_bigoh(self, absprec: int | float) -> "PadicNum":
        """Forget digits at or beyond p**absprec."""
        if absprec >= self.absprec:
            return self
        return PadicNum(self.p, self.unit, self.val, absprec - self.val)

    def digits(self) -> list[int]:
        """Base-p digits of the unit, least significant first (``prec`` of them)."""
        out, u = [], self.unit
        for _ in range(int(self.prec)):
            u, d = divmod(u, self.p)
            out.append(d)
        return out

    # -- coercion -------------------------------------------------------------

    def _coerce(self, other) -> "PadicNum":
        if isinstance(other, PadicNum):
            if other.p != self.p:
                raise ValueError("mismatched primes")
            return other
        if isinstance(other, (int, Fraction)):
            # exact rational: give it as much absolute precision as self can use
            cap = self.absprec if self.absprec != INF else 64
            return from_rat(other, self.p, absprec=cap)
        return NotImplemented

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        a, p = self, self.p
        A = min(a.absprec, b.absprec)
        if A == INF:
            return PadicNum.zero(p)
        if a.val == INF:
            return b
        if b.val == INF:
            return a
        v = min(a.val, b.val)
        if v >= A:
            return PadicNum.zero(p, A)
        x = a.unit * p ** (a.val - v) + b.unit * p ** (b.val - v)
        return PadicNum(p, x, v, A - v)

    __radd__ = __add__

    def __neg__(self):
        if self.unit == 0:
            return self
        return PadicNum(self.p, -self.unit, self.val, self.prec)

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return self + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._scale(Fraction(other))
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        a, p = self, self.p
        if a.val == INF or b.val == INF:
            return PadicNum.zero(p)
        return PadicNum(p, a.unit * b.unit, a.val + b.val, min(a.prec, b.prec))

    __rmul__ = __mul__

    def _scale(self, r: Fraction) -> "PadicNum":
        # multiplication by an exact rational keeps the relative precision
        p = self.p
        if r == 0 or self.val == INF:
            return PadicNum.zero(p)
        v = valuation(r, p)
        num, _ = _strip(p, abs(r.numerator))
        den, _ = _strip(p, r.denominator)
        if r < 0:
            num = -num
        if self.prec == 0:
            return PadicNum.zero(p, self.val + v)
        mod = p**self.prec
        return PadicNum(p, self.unit * num * pow(den, -1, mod), self.val + v, self.prec)

    def inverse(self) -> "PadicNum":
        if self.unit == 0:
            raise PrecisionError("division by a p-adic number that is zero to working precision")
        mod = self.p**self.prec
        return PadicNum(self.p, pow(self.unit, -1, mod), -self.val, self.prec)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self._scale(1 / Fraction(other))
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return self * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return PadicNum(self.p, 1, 0, self.prec if self.unit else 64)
        if self.unit == 0:
            if self.val == INF:
                return self
            return PadicNum.zero(self.p, self.val * n)
        mod = self.p**self.prec
        return PadicNum(self.p, pow(self.unit, n, mod), self.val * n, self.prec)

    # -- comparison -----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, PadicNum):
            return NotImplemented
        return (self.p, self.val, self.unit, self.prec) == (other.p, other.val, other.unit, other.prec)

    def __hash__(self):
        return hash((self.p, self.val, self.unit, self.prec))

    def agrees(self, other, modulus_exp: int) -> bool:
        """True when ``self == other mod p**modulus_exp``.

        Raises :class:`PrecisionError` if either side is not known that far.
        """
        if isinstance(other, (int, Fraction)):
            b = from_rat(other, self.p, absprec=modulus_exp)
        else:
            b = self._coerce(other)
        if min(self.absprec, b.absprec) < modulus_exp:
            raise PrecisionError(
                f"cannot compare mod p^{modulus_exp}: precisions {self.absprec}, {b.absprec}"
            )
        return (self - b).val >= modulus_exp

    # -- printing -------------------------------------------------------------

    def __repr__(self):
        return f"PadicNum({self})"

    def __str__(self):
        p = self.p
        if self.val == INF:
            return "0"
        terms = []
        for i, d in enumerate(self.digits()):
            if d == 0:
                continue
            e = self.val + i
            if e == 0:
                terms.append(str(d))
                continue
            base = str(p) if e == 1 else f"{p}^{e}"
            terms.append(base if d == 1 else f"{d}*{base}")
        terms.append(f"O({p}^{self.absprec})")
        return " + ".join(terms)

    def to_json(self) -> dict:
        return {"p": self.p, "val": None if self.val == INF else self.val,
                "prec": self.prec, "digits": self.digits()}

    @classmethod
    def from_json(cls, obj: dict) -> "PadicNum":
        p = obj["p"]
        if obj["val"] is None:
            return cls.zero(p)
        unit = sum(d * p**i for i, d in enumerate(obj["digits"]))
        return cls(p, unit, obj["val"], obj["prec"])


def from_rat(x: int | Fraction, p: int, prec: int | None = None, absprec: int | None = None) -> PadicNum:
    """p-adic expansion of a rational.

    Give either the relative precision ``prec`` (digits counted from the
    valuation) or the absolute precision ``absprec``; exact zero stays exact.
    """
    _check_prime(p)
    x = Fraction(x)
    if (prec is None) == (absprec is None):
        raise ValueError("give exactly one of prec, absprec")
    if x == 0:
        return PadicNum.zero(p)
    v = valuation(x, p)
    rel = prec if prec is not None else absprec - v
    if rel <= 0:
        return PadicNum.zero(p, v + max(rel, 0) if prec is not None else absprec)
    num, _ = _strip(p, abs(x.numerator))
    den, _ = _strip(p, x.denominator)
    if x < 0:
        num = -num
    mod = p**rel
    return PadicNum(p, num * pow(den, -1, mod), v, rel)


def teichmuller(a: int, p: int, N: int) -> PadicNum:
    """The (p-1)-st root of unity congruent to a mod p, to absolute precision N."""
    _check_prime(p)
    if a % p == 0:
        raise ValueError("Teichmuller lift needs a unit")
    mod = p**N
    x = a % mod
    for _ in range(N):
        y = pow(x, p, mod)
        if y == x:
            break
        x = y
    return PadicNum(p, x, 0, N)


def angle(a: PadicNum | int, p: int | None = None, N: int | None = None) -> PadicNum:
    """<a> = a / omega(a), the principal-unit part of a unit."""
    if not isinstance(a, PadicNum):
        a = from_rat(a, p, absprec=N)
    if not a.is_unit():
        raise ValueError("angle() needs a p-adic unit")
    return a / teichmuller(a.unit, a.p, a.prec)


def _log_sum(X: int, vx: int, p: int, A: int) -> int:
    # sum (-1)^(n+1) X^n / n mod p^A for v_p(X) = vx >= 1
    mod = p**A
    total, n = 0, 1
    while True:
        lg = 0 if n < p else int(math.log(n, p) + 1e-9)
        if n * vx - lg >= A and n > 1:
            break
        on = valuation(n, p)
        n_unit = n // p**on
        term = (pow(X, n, p ** (A + on)) // p**on) * pow(n_unit, -1, mod)
        total += term if n % 2 else -term
        n += 1
    return total % mod


def padic_log(u: PadicNum) -> PadicNum:
    """Iwasawa-free logarithm on principal units (u = 1 mod p)."""
    p = u.p
    if not u.is_unit() or (u.unit - 1) % p:
        raise ValueError("padic_log needs u = 1 mod p")
    A = int(u.absprec)
    x = u - 1
    if x.unit == 0:
        return PadicNum.zero(p, A)
    X = x.unit * p ** int(x.val)
    return PadicNum(p, _log_sum(X, int(x.val), p, A), 0, A)


def padic_exp(x: PadicNum) -> PadicNum:
    """exp on pZ_p (p odd)."""
    p = x.p
    if x.val < 1:
        raise ValueError("padic_exp needs val >= 1")
    A = int(x.absprec)
    if x.unit == 0:
        return from_rat(1, p, absprec=A)
    vx = int(x.val)
    X = x.unit * p**vx
    # stop once n*vx - v_p(n!) >= A
    n, fact_v, terms = 1, 0, []
    while True:
        fact_v += valuation(n, p)
        if n * vx - fact_v >= A:
            break
        terms.append((n, fact_v))
        n += 1
    mod = p**A
    total, fact_unit = 1, 1
    for n, fv in terms:
        fact_unit = fact_unit * (n // p ** valuation(n, p)) % mod
        term = (pow(X, n, p ** (A + fv)) // p**fv) * pow(fact_unit, -1, mod)
        total += term
    return PadicNum(p, total % mod, 0, A)


def s_exponent(a: int | PadicNum, p: int | None = None, N: int = 12) -> PadicNum:
    """s in Z_p with <a> = (1+p)^s, to absolute precision N."""
    if isinstance(a, PadicNum):
        p = a.p
        work = a.add_bigoh(N + 1) if a.absprec > N + 1 else a
    else:
        _check_prime(p)
        work = from_rat(a, p, absprec=N + 1)
    log_a = padic_log(angle(work))
    log_gamma = padic_log(from_rat(1 + p, p, absprec=N + 1))
    return log_a / log_gamma


def t_coordinate(k: int, p: int, N: int) -> PadicNum:
    """(1+p)^k - 1 to absolute precision N; ord_p = ord_p(k) + 1."""
    _check_prime(p)
    if k == 0:
        return PadicNum.zero(p)
    mod = p**N
    return from_rat((pow(1 + p, k, mod) - 1) % mod, p, absprec=N)


def binomial_coeffs(s: PadicNum, D: int) -> list[PadicNum]:
    """[binom(s, n) for n < D]: the coefficients of (1+t)^s."""
    p = s.p
    A = int(s.absprec) if s.absprec != INF else 200
    out = [from_rat(1, p, absprec=A)]
    cur = out[0]
    for n in range(1, D):
        cur = cur * (s - (n - 1)) / n
        out.append(cur)
    return out


@dataclass(frozen=True)
class BranchChar:
    """Tame character omega^j, optionally times a quadratic character of
    conductor prime to p."""

    p: int
    j: int
    twist: QuadChar | None = None

    def __post_init__(self):
        _check_prime(self.p)
        object.__setattr__(self, "j", self.j % (self.p - 1))
        if self.twist is not None and self.twist.conductor % self.p == 0:
            raise ValueError("quadratic twist must have conductor prime to p")

    @property
    def conductor(self) -> int:
        tame = 1 if self.j == 0 else self.p
        return tame * (self.twist.conductor if self.twist else 1)

    def parity(self) -> int:
        """chi(-1) as +1 or -1."""
        sign = -1 if self.j % 2 else 1
        if self.twist is not None:
            sign *= self.twist(-1)
        return sign

    def __call__(self, a: int, N: int = 12) -> PadicNum:
        p = self.p
        tw = self.twist(a) if self.twist is not None else 1
        if tw == 0 or (a % p == 0 and self.j != 0):
            return PadicNum.zero(p)
        if a % p == 0:
            # trivial tame part: omega^0 is the trivial character mod 1
            return from_rat(tw, p, absprec=N)
        return teichmuller(a, p, N) ** self.j * tw
