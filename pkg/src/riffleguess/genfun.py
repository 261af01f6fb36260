"""Counting generating functions for one-shuffle play and their exact moments.

D_n(q) counts the 2^n one-shuffle outcomes by number of correct guesses
under the optimal strategy.  It is built from F(m, n; q), the contribution
of a state with two known piles of sizes m and n, and G_n(q), the part of
D_n coming from a first card other than 1.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from .errors import DegenerateDistribution
from .exactnum import QPoly, binom, falling, qpoly_deriv_at1, stirling2

__all__ = [
    "F_closed",
    "F_recursive",
    "G_poly",
    "D_poly",
    "G_deriv_closed",
    "D_deriv_at1",
    "MomentTable",
    "exact_moments",
    "exact_skewness",
    "Skewness",
    "distribution_csv",
]

DEFAULT_RMAX = 12


@lru_cache(maxsize=None)
def F_closed(m: int, n: int) -> QPoly:
    """F(m, n; q) = sum_{i<=n} [C(m+n, i) - C(m+n, i-1)] q^(m+n-i), m >= n."""
    if m < n:
        m, n = n, m
    s = m + n
    coeffs = [0] * (s + 1)
    for i in range(n + 1):
        coeffs[s - i] = binom(s, i) - binom(s, i - 1)
    return QPoly(coeffs)


@lru_cache(maxsize=None)
def F_recursive(m: int, n: int) -> QPoly:
    """F via its defining recurrence: next card from the longer or shorter pile."""
    if m < n:
        m, n = n, m
    if n == 0:
        return QPoly.monomial(m)
    return F_recursive(m - 1, n).shift() + F_recursive(m, n - 1)


@lru_cache(maxsize=None)
def G_poly(n: int) -> QPoly:
    """G_n(q) = q^n + sum_{i=0}^{n-2} F(n-1-i, i; q)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    g = QPoly.monomial(n)
    for i in range(n - 1):
        g = g + F_closed(n - 1 - i, i)
    return g


@lru_cache(maxsize=None)
def D_poly(n: int) -> QPoly:
    """D_n(q) = q D_{n-1}(q) + G_n(q), D_0 = 1."""
    if n < 0:
        raise ValueError("n must be >= 0")
    d = QPoly([1])
    for j in range(1, n + 1):
        d = d.shift() + G_poly(j)
    return d


def G_deriv_closed(r: int, n: int) -> int:
    """G_n^(r)(1) from the parity-split binomial sums (n >= 2)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    k, odd = divmod(n, 2)
    if not odd:
        s = sum(
            (k - i) * (binom(2 * k - 1, i) - binom(2 * k - 1, i - 1)) * falling(2 * k - 1 - i, r)
            for i in range(k)
        )
        return falling(2 * k, r) - falling(2 * k - 1, r) + 2 * s
    # 2 (k + 1/2 - i) = 2k + 1 - 2i keeps the odd case in integers
    s = sum(
        (2 * k + 1 - 2 * i) * (binom(2 * k, i) - binom(2 * k, i - 1)) * falling(2 * k - i, r)
        for i in range(k + 1)
    )
    return falling(2 * k + 1, r) - falling(2 * k, r) + s


def _G_deriv(r: int, n: int) -> int:
    if r == 0:
        return 1 << (n - 1)
    if n == 1:
        return falling(1, r)  # G_1 = q
    return G_deriv_closed(r, n)


def D_deriv_at1(r: int, n: int) -> int:
    """D_n^(r)(1) via D^(r)_n = D^(r)_{n-1} + r D^(r-1)_{n-1} + G^(r)_n."""
    if r < 0 or n < 0:
        raise ValueError("r and n must be >= 0")
    return _D_derivs(r, n)[r]


def _D_derivs(r: int, n: int) -> list[int]:
    """[D_n^(j)(1) for j = 0..r]."""
    cur = [1] + [0] * r  # D_0 = 1
    for m in range(1, n + 1):
        cur = [cur[j] + (j * cur[j - 1] if j else 0) + _G_deriv(j, m) for j in range(r + 1)]
    return cur


@dataclass(frozen=True)
class MomentTable:
    n: int
    factorial: tuple[Fraction, ...]
    raw: tuple[Fraction, ...]
    central: tuple[Fraction, ...]

    @property
    def mean(self) -> Fraction:
        return self.raw[1]

    @property
    def variance(self) -> Fraction:
        return self.central[2]

    def to_dict(self) -> dict:
        def fr(xs):
            return [f"{x.numerator}/{x.denominator}" for x in xs]

        return {
            "n": self.n,
            "factorial": fr(self.factorial),
            "raw": fr(self.raw),
            "central": fr(self.central),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def exact_moments(n: int, r_max: int = DEFAULT_RMAX) -> MomentTable:
    """Factorial, raw and central moments of the correct-guess count X_n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    derivs = _D_derivs(r_max, n)
    total = 1 << n
    fact = tuple(Fraction(d, total) for d in derivs)
    raw = tuple(sum((stirling2(r, i) * fact[i] for i in range(r + 1)), Fraction(0))
                for r in range(r_max + 1))
    mu = raw[1] if r_max >= 1 else Fraction(0)
    central = tuple(
        sum((binom(r, j) * (-mu) ** (r - j) * raw[j] for j in range(r + 1)), Fraction(0))
        for r in range(r_max + 1)
    )
    return MomentTable(n, fact, raw, central)


@dataclass(frozen=True)
class Skewness:
    m2: Fraction
    m3: Fraction
    value: mpmath.mpf

    def __float__(self) -> float:
        return float(self.value)


def exact_skewness(n: int, prec: int = 80) -> Skewness:
    """m3 / m2^(3/2) with exact central moments."""
    if n < 2:
        raise ValueError("n must be >= 2")
    t = exact_moments(n, 3)
    m2, m3 = t.central[2], t.central[3]
    if m2 == 0:
        raise DegenerateDistribution(f"zero variance at n={n}")
    with mpmath.workprec(prec):
        val = mpmath.mpf(m3.numerator) / m3.denominator / (
            mpmath.mpf(m2.numerator) / m2.denominator
        ) ** mpmath.mpf(1.5)
    return Skewness(m2, m3, val)


def distribution_csv(n: int) -> str:
    """CSV of D_n coefficients: correct_guesses,count,probability."""
    d = D_poly(n)
    total = 1 << n
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["correct_guesses", "count", "probability"])
    for i in range(n + 1):
        p = Fraction(d[i], total)
        w.writerow([i, d[i], f"{p.numerator}/{p.denominator}"])
    return buf.getvalue()
