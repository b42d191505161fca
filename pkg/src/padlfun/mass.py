"""Mass constants of even unimodular lattices, their denominators, and theta
series of small lattices.

Indexing follows ``mass(k)``: the weight is k and the lattices have rank 2k.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import Factorization, FactorizationError, bernoulli, factorize, valuation, zeta_neg
from .eisenstein import QExpansion, elliptic_eisenstein
from .lambda_algebra import valuation_at_tj
from .measures import default_c, iwasawa_series

__all__ = [
    "MassRow",
    "Lattice",
    "E8_GRAM",
    "mass_constant",
    "mass_constant_zeta",
    "mass_constant_bernoulli",
    "mass_table",
    "format_mass_table",
    "MassValuation",
    "p_regular_mass_valuation",
    "theta_series",
    "short_vectors",
    "theta2_coeff",
    "mass_identity_rank8",
]

AUT_E8 = 696729600


def mass_constant_zeta(k: int) -> Fraction:
    """2^-k zeta(1-k) prod_{i<k} zeta(1-2k+2i)."""
    out = Fraction(1, 2**k) * zeta_neg(k)
    for i in range(1, k):
        out *= zeta_neg(2 * k - 2 * i)
    return out


def mass_constant_bernoulli(k: int) -> Fraction:
    """(-1)^k B_k/(2k) prod_{j<k} B_2j/(4j)."""
    bk = -zeta_neg(k) * k if k == 1 else bernoulli(k)
    out = Fraction((-1) ** k) * bk / (2 * k)
    for j in range(1, k):
        out *= bernoulli(2 * j) / (4 * j)
    return out


def mass_constant(k: int) -> Fraction:
    if k < 1:
        raise ValueError("k must be >= 1")
    a = mass_constant_zeta(k)
    b = mass_constant_bernoulli(k)
    if a != b:
        raise ArithmeticError(f"mass forms disagree at k={k}: {a} vs {b}")
    return a


@dataclass
class MassRow:
    k: int
    mass: Fraction
    factorization: Factorization | None = None
    error: str | None = None

    @property
    def rank(self) -> int:
        return 2 * self.k

    @property
    def reciprocal(self) -> Fraction:
        return 1 / self.mass if self.mass else Fraction(0)

    def to_json(self) -> dict:
        out = {"k": self.k, "rank": self.rank, "mass": str(self.mass), "reciprocal": str(self.reciprocal)}
        if self.factorization is not None:
            out["denominator_factors"] = [list(f) for f in self.factorization.factors]
        if self.error:
            out["error"] = self.error
        return out


def mass_table(max_k: int, with_factorization: bool = True, step: int = 2) -> list[MassRow]:
    """Rows for k = step, 2 step, ..., max_k (the listing runs over even k)."""
    if max_k > 40:
        raise ValueError("max_k is limited to 40")
    rows = []
    for k in range(step, max_k + 1, step):
        m = mass_constant(k)
        row = MassRow(k, m)
        if with_factorization:
            den = (1 / m).denominator
            try:
                row.factorization = factorize(den)
            except FactorizationError as exc:
                row.factorization = exc.partial
                row.error = str(exc)
        rows.append(row)
    return rows


def format_mass_table(rows: list[MassRow], fmt: str = "plain") -> str:
    if fmt == "json":
        return json.dumps({"schema": "padlfun.mass-table/1", "rows": [r.to_json() for r in rows]}, indent=1)
    lines = []
    if fmt == "csv":
        lines.append("k,mass,denominator_factors")
        for r in rows:
            fac = ";".join(f"{q}^{e}" for q, e in r.factorization.factors) if r.factorization is not None else ""
            lines.append(f"{r.k},{r.mass},{fac}")
    else:
        for r in rows:
            lines.append(f"{r.k}\t{r.factorization.pari() if r.factorization is not None else ''}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# p-adic valuation of 1/m_k


@dataclass
class MassValuation:
    k: int
    p: int
    predicted: int
    actual: int
    parts: dict = field(default_factory=dict)

    @property
    def match(self) -> bool:
        return self.predicted == self.actual


def _p_regular_reciprocal(k: int, p: int) -> Fraction:
    """p-regular part of 1/m_k: 2^k prod over j in {k, 2, ..., 2k-2} of 1/(zeta(1-j)(1-p^(j-1)))."""
    out = Fraction(2**k)
    for j in _mass_weights(k):
        out /= zeta_neg(j) * (1 - Fraction(p) ** (j - 1))
    return out


def _mass_weights(k: int) -> list[int]:
    return [k] + list(range(2, 2 * k - 1, 2))


def p_regular_mass_valuation(k: int, p: int, c: int | None = None, D: int = 8, N: int = 6) -> MassValuation:
    """Predict ord_p of the p-regular part of 1/m_k from the Newton polygons of
    the distinguished polynomials of the branches involved, and compare with
    the exact rational.

    Each weight j contributes ord_p(1 - c^j) - mu_j - ord_p P_j(T_j), with
    T_j = (1+p)^(j-1) - 1 the branch variable at weight j.
    """
    if k % 2:
        raise ValueError("k must be even")
    c = default_c(p) if c is None else c
    predicted = 0
    parts = {}
    for j in _mass_weights(k):
        br = iwasawa_series(p, (j - 1) % (p - 1), c, D, N)
        vc = valuation(1 - Fraction(c) ** j, p)
        vP = valuation_at_tj(br.P, j - 1)
        parts[j] = {"ord(1-c^j)": vc, "mu": br.mu, "ordP": vP, "lambda": br.lam}
        predicted += vc - br.mu - vP
    actual = valuation(_p_regular_reciprocal(k, p), p)
    return MassValuation(k, p, predicted, actual, parts)


# ---------------------------------------------------------------------------
# lattices


E8_GRAM = (
    (2, -1, 0, 0, 0, 0, 0, 0),
    (-1, 2, -1, 0, 0, 0, 0, 0),
    (0, -1, 2, -1, 0, 0, 0, -1),
    (0, 0, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, 0),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, 0),
    (0, 0, -1, 0, 0, 0, 0, 2),
)


def _ldl(G) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Exact G = L diag(d) L^T; raises if G is not positive definite."""
    n = len(G)
    L = [[Fraction(0)] * n for _ in range(n)]
    d = [Fraction(0)] * n
    for i in range(n):
        for j in range(i + 1):
            s = Fraction(G[i][j]) - sum(L[i][r] * L[j][r] * d[r] for r in range(j))
            if i == j:
                if s <= 0:
                    raise ValueError("Gram matrix is not positive definite")
                d[i] = s
                L[i][i] = Fraction(1)
            else:
                L[i][j] = s / d[j]
    return d, L


@dataclass(frozen=True)
class Lattice:
    gram: tuple

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if any(len(r) != n for r in g):
            raise ValueError("Gram matrix must be square")
        for i in range(n):
            if g[i][i] % 2:
                raise ValueError("Gram matrix must have even diagonal")
            for j in range(n):
                if g[i][j] != g[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        _ldl(g)

    @property
    def rank(self) -> int:
        return len(self.gram)

    @classmethod
    def e8(cls) -> "Lattice":
        return cls(E8_GRAM)

    @classmethod
    def from_json(cls, obj: dict) -> "Lattice":
        lat = cls(tuple(tuple(r) for r in obj["gram"]))
        if obj.get("rank", lat.rank) != lat.rank:
            raise ValueError("rank does not match the Gram matrix")
        return lat

    def to_json(self) -> dict:
        return {"rank": self.rank, "gram": [list(r) for r in self.gram]}

    def det(self) -> int:
        d, _ = _ldl(self.gram)
        return int(math.prod(d))

    def transform(self, U) -> "Lattice":
        """Gram matrix of the basis change U^T G U."""
        G = np.array(self.gram, dtype=object)
        U = np.array(U, dtype=object)
        return Lattice(tuple(tuple(int(x) for x in row) for row in (U.T @ G @ U)))


@lru_cache(maxsize=16)
def short_vectors(L: Lattice, bound: int) -> tuple:
    """All x with x G x^T <= bound, as (norm, vector) pairs, by depth-first
    enumeration over the exact LDL decomposition (last coordinate first)."""
    n = L.rank
    d, Lm = _ldl(L.gram)
    df = [float(x) for x in d]
    mu = [[float(Lm[j][i]) for j in range(n)] for i in range(n)]  # mu[i][j] = L[j][i]
    eps = 1e-9
    out = []
    x = [0] * n

    def rec(i: int, remaining: float):
        # coordinate y_i = x_i + sum_{j>i} L[j][i] x_j ; contributes d_i y_i^2
        centre = -sum(mu[i][j] * x[j] for j in range(i + 1, n))
        r = math.sqrt(max(remaining, 0.0) / df[i]) + eps
        lo, hi = math.ceil(centre - r), math.floor(centre + r)
        for v in range(lo, hi + 1):
            y = v - centre
            rem = remaining - df[i] * y * y
            if rem < -eps:
                continue
            x[i] = v
            if i == 0:
                q = top - rem
                norm = round(q)
                if abs(q - norm) > 1e-6:
                    raise ArithmeticError("floating enumeration lost integrality")
                if norm <= bound:
                    out.append((norm, tuple(x)))
            else:
                rec(i - 1, rem)
        x[i] = 0

    top = float(bound) + eps
    rec(n - 1, top)
    return tuple(out)


def theta_series(L: Lattice, cutoff: int) -> QExpansion:
    """r_n = #{x : x G x^T = 2n} for n <= cutoff."""
    if cutoff > 20:
        raise ValueError("cutoff is limited to 20")
    counts = [0] * (cutoff + 1)
    for norm, _ in short_vectors(L, 2 * cutoff):
        counts[norm // 2] += 1
    return QExpansion(1, cutoff, {n: Fraction(r) for n, r in enumerate(counts)})


def theta2_coeff(L: Lattice, a: int, b: int, c: int) -> int:
    """Genus-2 theta coefficient: #{(x, y) : x.x = 2a, y.y = 2c, x.y = b}."""
    bound = 2 * max(a, c)
    vecs = short_vectors(L, bound)
    G = np.array(L.gram, dtype=np.int64)
    X = np.array([v for nrm, v in vecs if nrm == 2 * a], dtype=np.int64)
    Y = np.array([v for nrm, v in vecs if nrm == 2 * c], dtype=np.int64)
    if len(X) == 0 or len(Y) == 0:
        return 0
    dots = X @ G @ Y.T
    return int(np.count_nonzero(dots == b))


@dataclass
class IdentityReport:
    ok: bool
    theta: list
    eisenstein: list
    mismatches: list
    mass_times_aut: Fraction


def mass_identity_rank8(cutoff: int = 8, lattice: Lattice | None = None) -> IdentityReport:
    """Check Theta_L / |Aut(E8)| = m_4 E_4 coefficientwise; for E8 this is Theta = E_4."""
    lattice = Lattice.e8() if lattice is None else lattice
    th = theta_series(lattice, cutoff)
    e4 = elliptic_eisenstein(4, cutoff)
    m4 = mass_constant(4)
    lhs = [Fraction(th[n], AUT_E8) for n in range(cutoff + 1)]
    rhs = [m4 * e4[n] for n in range(cutoff + 1)]
    bad = [n for n in range(cutoff + 1) if lhs[n] != rhs[n]]
    return IdentityReport(not bad and m4 * AUT_E8 == 1, [int(th[n]) for n in range(cutoff + 1)],
                          [int(e4[n]) for n in range(cutoff + 1)], bad, m4 * AUT_E8)
