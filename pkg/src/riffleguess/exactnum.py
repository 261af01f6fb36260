"""Exact integer/rational kernel: combinatorial numbers and q-polynomials.

Rationals are :class:`fractions.Fraction` throughout; Python integers are
arbitrary precision so nothing here can overflow.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

__all__ = [
    "Rational",
    "QPoly",
    "binom",
    "falling",
    "bernoulli",
    "stirling2",
    "eulerian",
    "qpoly_deriv_at1",
    "solve_exact",
]

Rational = Fraction


def binom(n: int, k: int) -> int:
    """C(n, k) for n >= 0, and 0 outside 0 <= k <= n."""
    if k < 0 or k > n:
        return 0
    return comb(n, k)


def falling(a: int, r: int) -> int:
    """Falling factorial a(a-1)...(a-r+1); the empty product is 1."""
    out = 1
    for j in range(r):
        out *= a - j
    return out


@lru_cache(maxsize=None)
def _bernoulli_table(k: int) -> tuple[Fraction, ...]:
    # sum_{j=0}^{m} C(m+1, j) B_j = 0 for m >= 1, B_0 = 1  (gives B_1 = -1/2)
    table = [Fraction(1)]
    for m in range(1, k + 1):
        s = sum(comb(m + 1, j) * table[j] for j in range(m))
        table.append(-s / (m + 1))
    return tuple(table)


def bernoulli(k: int) -> Fraction:
    """Bernoulli number B_k with the B_1 = -1/2 convention."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return _bernoulli_table(k)[k]


@lru_cache(maxsize=None)
def stirling2(r: int, i: int) -> int:
    """Stirling number of the second kind {r over i}."""
    if r < 0 or i < 0:
        raise ValueError("arguments must be >= 0")
    if r == 0:
        return 1 if i == 0 else 0
    if i == 0 or i > r:
        return 0
    return i * stirling2(r - 1, i) + stirling2(r - 1, i - 1)


@lru_cache(maxsize=None)
def eulerian(n: int, r: int) -> int:
    """Eulerian number A(n, r): permutations of length n with r descents."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if r < 0 or r >= n:
        return 0
    if n == 1:
        return 1
    return (r + 1) * eulerian(n - 1, r) + (n - r) * eulerian(n - 1, r - 1)


class QPoly:
    """Dense polynomial in q with integer coefficients (index i <-> q^i).

    Immutable; trailing zeros are trimmed so ``QPoly([0])`` is the zero
    polynomial with ``coeffs == ()``.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self._coeffs = tuple(c)

    @classmethod
    def monomial(cls, power: int, coeff: int = 1) -> "QPoly":
        return cls([0] * power + [coeff])

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self._coeffs

    @property
    def degree(self) -> int:
        """Index of the last nonzero coefficient; -1 for the zero polynomial."""
        return len(self._coeffs) - 1

    def __getitem__(self, i: int) -> int:
        return self._coeffs[i] if 0 <= i < len(self._coeffs) else 0

    def __add__(self, other: "QPoly") -> "QPoly":
        a, b = self._coeffs, other._coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] += x
        return QPoly(out)

    def __sub__(self, other: "QPoly") -> "QPoly":
        return self + QPoly(-x for x in other._coeffs)

    def __mul__(self, other: "QPoly | int") -> "QPoly":
        if isinstance(other, int):
            return QPoly(x * other for x in self._coeffs)
        a, b = self._coeffs, other._coeffs
        if not a or not b:
            return QPoly()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return QPoly(out)

    __rmul__ = __mul__

    def shift(self, k: int = 1) -> "QPoly":
        """Multiply by q^k."""
        if not self._coeffs:
            return self
        return QPoly([0] * k + list(self._coeffs))

    def __call__(self, q):
        acc = 0 * q
        for c in reversed(self._coeffs):
            acc = acc * q + c
        return acc

    def __eq__(self, other) -> bool:
        if isinstance(other, QPoly):
            return self._coeffs == other._coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __repr__(self) -> str:
        return f"QPoly({list(self._coeffs)})"

    def __str__(self) -> str:
        parts = []
        for i, c in enumerate(self._coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                mono = "q" if i == 1 else f"q^{i}"
                parts.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(parts) if parts else "0"


def qpoly_deriv_at1(p: QPoly, r: int) -> int:
    """r-th derivative of p at q = 1, as sum_i a_i (i)_r."""
    if r < 0:
        raise ValueError("r must be >= 0")
    return sum(c * falling(i, r) for i, c in enumerate(p.coeffs) if c)


def solve_exact(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction]:
    """Solve a (possibly overdetermined) linear system exactly.

    Raises ValueError if the system is inconsistent or underdetermined.
    """
    m = len(rows)
    ncols = len(rows[0]) if m else 0
    aug = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    if len(pivots) < ncols:
        raise ValueError("underdetermined system")
    if any(aug[i][-1] != 0 for i in range(r, m)):
        raise ValueError("inconsistent system")
    sol = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        sol[c] = aug[i][-1]
    return sol
