"""Exact rational arithmetic helpers: Bernoulli numbers, quadratic characters,
integer factorization and divisor sums.

Rationals are plain :class:`fractions.Fraction` values throughout the package.
"""

from __future__ import annotations

import math
import os
import random
import threading
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable

try:
    from gmpy2 import gcd as _gcd, mpz
except ImportError:  # pragma: no cover - pure-Python fallback
    _gcd, mpz = math.gcd, int

__all__ = [
    "bernoulli",
    "bernoulli_poly",
    "zeta_neg",
    "gen_bernoulli_quad",
    "kronecker",
    "QuadChar",
    "Factorization",
    "FactorizationError",
    "factorize",
    "is_probable_prime",
    "divisors",
    "divisor_power_sum",
    "valuation",
    "cache_path",
    "load_bernoulli_cache",
    "save_bernoulli_cache",
]


def valuation(x: int | Fraction, p: int) -> int | float:
    """ord_p of a nonzero rational; ``math.inf`` for zero."""
    x = Fraction(x)
    if x == 0:
        return math.inf
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


# ---------------------------------------------------------------------------
# Bernoulli numbers

_B_LOCK = threading.Lock()
_B_EVEN: list[Fraction] = [Fraction(1)]  # _B_EVEN[i] == B_{2i}
_CACHE_LOADED = False


def cache_path() -> Path:
    return Path(os.environ.get("PADL_CACHE_DIR", ".padlfun-cache")) / "bernoulli.txt"


def load_bernoulli_cache(path: Path | None = None) -> int:
    """Seed the memo from the cache file; returns the number of entries read."""
    global _CACHE_LOADED
    path = path or cache_path()
    _CACHE_LOADED = True
    if not path.exists():
        return 0
    table: dict[int, Fraction] = {}
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line:
            continue
        n_str, val = line.split(" ", 1)
        table[int(n_str)] = Fraction(val)
    with _B_LOCK:
        i = len(_B_EVEN)
        while 2 * i in table:
            _B_EVEN.append(table[2 * i])
            i += 1
    return len(table)


def save_bernoulli_cache(path: Path | None = None) -> Path:
    path = path or cache_path()
    path.parent.mkdir(parents=True, exist_ok=True)
    with _B_LOCK:
        rows = [f"{2 * i} {b.numerator}/{b.denominator}" for i, b in enumerate(_B_EVEN)]
    tmp = path.with_suffix(".tmp")
    tmp.write_text("\n".join(rows) + "\n", encoding="utf-8")
    tmp.replace(path)
    return path


def _extend_even(upto: int) -> None:
    # Tangent numbers T_1..T_m (Brent-Harvey integer recurrence), then
    # B_{2i} = (-1)^(i-1) 2i T_i / (4^i (4^i - 1)).
    m = upto
    T = [0] * (m + 1)
    T[1] = 1
    for k in range(2, m + 1):
        T[k] = (k - 1) * T[k - 1]
    for k in range(2, m + 1):
        for j in range(k, m + 1):
            T[j] = (j - k) * T[j - 1] + (j - k + 2) * T[j]
    start = len(_B_EVEN)
    for i in range(start, m + 1):
        four = 4**i
        b = Fraction((-1) ** (i - 1) * 2 * i * T[i], four * (four - 1))
        _B_EVEN.append(b)


def bernoulli(n: int) -> Fraction:
    """B_n with the convention B_1 = -1/2."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 1:
        return Fraction(-1, 2)
    if n % 2:
        return Fraction(0)
    i = n // 2
    if i >= len(_B_EVEN):
        if not _CACHE_LOADED:
            load_bernoulli_cache()
        with _B_LOCK:
            if i >= len(_B_EVEN):
                # grow geometrically so repeated calls stay cheap
                _extend_even(max(i, 2 * (len(_B_EVEN) - 1), 8))
    return _B_EVEN[i]


def bernoulli_poly(n: int, x: Fraction | int) -> Fraction:
    """Value of the n-th Bernoulli polynomial at x."""
    x = Fraction(x)
    return sum((math.comb(n, i) * bernoulli(i) * x ** (n - i) for i in range(n + 1)), Fraction(0))


def zeta_neg(k: int) -> Fraction:
    """zeta(1 - k) = -B_k / k for k >= 1."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return Fraction(-1, 2)
    return -bernoulli(k) / k


# ---------------------------------------------------------------------------
# Quadratic characters


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D/n)."""
    if n == 0:
        return 1 if D in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if D < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if D % 2 == 0:
            return 0
        if v % 2 and D % 8 in (3, 5):
            result = -result
    # Jacobi symbol (D/n), n odd positive
    a = D % n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _squarefree_decomposition(n: int) -> tuple[int, int]:
    """n = s * r**2 with s squarefree (n > 0)."""
    s, r = 1, 1
    for q, e in factorize(n).factors:
        r *= q ** (e // 2)
        if e % 2:
            s *= q
    return s, r


@dataclass(frozen=True)
class QuadChar:
    """Quadratic character attached to a discriminant D = D0 * f**2.

    Values are the Kronecker symbol of the fundamental part D0, so the
    character is primitive of conductor |D0|.
    """

    D: int
    D0: int
    f: int

    @classmethod
    def from_discriminant(cls, D: int) -> "QuadChar":
        if D == 0:
            raise ValueError("discriminant must be nonzero")
        if D % 4 not in (0, 1):
            raise ValueError(f"{D} is not a discriminant (must be 0 or 1 mod 4)")
        sign = 1 if D > 0 else -1
        s, r = _squarefree_decomposition(abs(D))
        d = sign * s
        if d % 4 == 1:
            D0, f = d, r
        else:
            if r % 2:
                raise ValueError(f"cannot split {D} as fundamental discriminant times a square")
            D0, f = 4 * d, r // 2
        assert D0 * f * f == D
        return cls(D, D0, f)

    @property
    def conductor(self) -> int:
        return abs(self.D0)

    @property
    def is_trivial(self) -> bool:
        return self.D0 == 1

    def __call__(self, n: int) -> int:
        return kronecker(self.D0, n)


def gen_bernoulli_quad(k: int, chi: QuadChar) -> Fraction:
    """Generalized Bernoulli number B_{k,chi}; L(1-k, chi) = -B_{k,chi}/k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    F = chi.conductor
    values = [(a, chi(a)) for a in range(1, F + 1)]
    values = [(a, s) for a, s in values if s]
    total = Fraction(0)
    for i in range(k + 1):
        b = bernoulli(i)
        if b == 0:
            continue
        power_sum = sum(s * a ** (k - i) for a, s in values)
        total += math.comb(k, i) * b * Fraction(F) ** (i - 1) * power_sum
    return total


# ---------------------------------------------------------------------------
# Factorization

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_TRIAL_LIMIT = 10**6


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with the first 13 prime bases (deterministic below 3.3e24)."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent(n: int, rng: random.Random, max_iter: int = 1 << 26) -> int | None:
    """One Pollard-rho run with Brent cycle detection; a proper factor or None."""
    if n % 2 == 0:
        return 2
    n = mpz(n)
    y, c, m = mpz(rng.randrange(1, n)), mpz(rng.randrange(1, n)), 256
    g = r = q = mpz(1)
    x = ys = y
    steps = 0
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = _gcd(q, n)
            k += m
        steps += r
        r *= 2
        if steps > max_iter:
            return None
    if g == n:
        # batch overshot: replay single steps from the last checkpoint
        while True:
            ys = (ys * ys + c) % n
            g = _gcd(abs(x - ys), n)
            if g > 1:
                break
    return int(g) if g != n else None


class FactorizationError(ArithmeticError):
    """Raised when a composite cofactor could not be split."""

    def __init__(self, n: int, partial: "Factorization", cofactor: int):
        super().__init__(f"could not factor {n}: unfactored composite cofactor {cofactor}")
        self.partial = partial
        self.cofactor = cofactor


@dataclass(frozen=True)
class Factorization:
    factors: tuple[tuple[int, int], ...] = ()
    sign: int = 1

    def value(self) -> int:
        out = self.sign
        for q, e in self.factors:
            out *= q**e
        return out

    def __iter__(self):
        return iter(self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    def pari(self) -> str:
        """Render like PARI's factor matrix, e.g. ``[691, 1; 3617, 1]``; ``1`` if empty."""
        if not self.factors:
            return "1"
        return "[" + "; ".join(f"{q}, {e}" for q, e in self.factors) + "]"


def _split(n: int, rng: random.Random, out: dict[int, int], attempts: int = 8) -> int:
    """Fully split n into primes recorded in ``out``; returns an unsplit cofactor (1 on success)."""
    if n == 1:
        return 1
    if is_probable_prime(n):
        out[n] = out.get(n, 0) + 1
        return 1
    r = math.isqrt(n)
    if r * r == n:
        left = _split(r, rng, out, attempts)
        right = _split(r, rng, out, attempts)
        return left * right
    for _ in range(attempts):
        d = _brent(n, rng)
        if d:
            return _split(d, rng, out, attempts) * _split(n // d, rng, out, attempts)
    return n


def factorize(n: int, seed: int = 1) -> Factorization:
    """Complete factorization of a nonzero integer.

    Trial division to 10**6, then Brent's Pollard-rho with Miller-Rabin
    certification. Raises :class:`FactorizationError` instead of returning a
    composite "prime".
    """
    if n == 0:
        raise ValueError("cannot factor 0")
    sign = -1 if n < 0 else 1
    n = abs(n)
    found: dict[int, int] = {}
    for q in (2, 3, 5):
        while n % q == 0:
            found[q] = found.get(q, 0) + 1
            n //= q
    q, step = 7, [4, 2, 4, 2, 4, 6, 2, 6]
    i = 0
    while q * q <= n and q < _TRIAL_LIMIT:
        while n % q == 0:
            found[q] = found.get(q, 0) + 1
            n //= q
        q += step[i]
        i = (i + 1) % 8
    rest = 1
    if n > 1:
        rest = _split(n, random.Random(seed), found)
    fac = Factorization(tuple(sorted(found.items())), sign)
    if rest != 1:
        raise FactorizationError(sign * n, fac, rest)
    return fac


# ---------------------------------------------------------------------------
# Divisors


def divisors(n: int) -> list[int]:
    if n < 1:
        raise ValueError("n must be >= 1")
    divs = [1]
    for q, e in factorize(n).factors:
        divs = [d * q**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def divisor_power_sum(e: int, n: int, omit_p: int | None = None) -> int:
    """sum of d**e over divisors d of n, skipping d divisible by omit_p."""
    return sum(d**e for d in divisors(n) if omit_p is None or d % omit_p)


def product(xs: Iterable[Fraction]) -> Fraction:
    out = Fraction(1)
    for x in xs:
        out *= x
    return out
