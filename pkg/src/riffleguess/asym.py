"""Truncated asymptotic series in half-integer powers of n.

Coefficients live in the ring of rational combinations of
2^(a/2) * pi^(-b/2) (``SymCoeff``), which is closed under everything the
moment expansions need: squaring sqrt(2n/pi) gives 2n/pi, and so on.

A series term is stored under its half-exponent p, meaning coef * n^(p/2).
``cutoff`` is the smallest p whose coefficient is known; everything below
it was discarded.  ``cutoff=None`` marks an exact (finite) expression.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Sequence

import mpmath

from .errors import SeriesError
from .exactnum import bernoulli, binom, falling, solve_exact, stirling2

__all__ = [
    "SymCoeff",
    "AsymSeries",
    "ONE",
    "SQRT2",
    "INV_SQRT_PI",
    "SQRT_2_OVER_PI",
    "INV_PI",
    "DEFAULT_ORDER",
    "MAX_MOMENT",
    "gbinom",
    "log_factorial_series",
    "central_binomial_series",
    "series_from_two_term_recurrence",
    "solve_parity_step2",
    "G_closed_form",
    "G_series",
    "D_series",
    "moment_series",
    "central_moment_series",
    "SkewnessLimit",
    "skewness_limit",
]

DEFAULT_ORDER = 8
MAX_MOMENT = 4


def gbinom(x: Fraction, j: int) -> Fraction:
    """Generalized binomial coefficient C(x, j) for rational x."""
    out = Fraction(1)
    for t in range(j):
        out = out * (x - t) / (t + 1)
    return out


class SymCoeff:
    """Sum of c * 2^(a/2) * pi^(-b/2), normalized so a is 0 or 1."""

    __slots__ = ("_c",)

    def __init__(self, terms: Mapping[tuple[int, int], Fraction] | None = None):
        c: dict[tuple[int, int], Fraction] = {}
        for (a, b), v in (terms or {}).items():
            v = Fraction(v)
            # 2^(a/2) = 2^(a//2) * 2^((a%2)/2)
            a2, ar = divmod(a, 2)
            v = v * Fraction(2) ** a2
            key = (ar, b)
            c[key] = c.get(key, 0) + v
        self._c = {k: v for k, v in sorted(c.items()) if v}

    @classmethod
    def coerce(cls, x) -> "SymCoeff":
        if isinstance(x, SymCoeff):
            return x
        return cls({(0, 0): Fraction(x)})

    @classmethod
    def sqrt2_power(cls, e: int) -> "SymCoeff":
        """2^(e/2)."""
        return cls({(e, 0): 1})

    @property
    def terms(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._c)

    def is_rational(self) -> bool:
        return all(k == (0, 0) for k in self._c)

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise SeriesError(f"{self} is not rational")
        return self._c.get((0, 0), Fraction(0))

    def __bool__(self) -> bool:
        return bool(self._c)

    def __add__(self, other) -> "SymCoeff":
        other = SymCoeff.coerce(other)
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, 0) + v
        return SymCoeff(out)

    __radd__ = __add__

    def __neg__(self) -> "SymCoeff":
        return SymCoeff({k: -v for k, v in self._c.items()})

    def __sub__(self, other) -> "SymCoeff":
        return self + (-SymCoeff.coerce(other))

    def __rsub__(self, other) -> "SymCoeff":
        return SymCoeff.coerce(other) - self

    def __mul__(self, other) -> "SymCoeff":
        if not isinstance(other, SymCoeff):
            f = Fraction(other)
            return SymCoeff({k: v * f for k, v in self._c.items()})
        out: dict[tuple[int, int], Fraction] = {}
        for (a1, b1), v1 in self._c.items():
            for (a2, b2), v2 in other._c.items():
                key = (a1 + a2, b1 + b2)
                out[key] = out.get(key, 0) + v1 * v2
        return SymCoeff(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "SymCoeff":
        return self * (1 / Fraction(other))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = SymCoeff.coerce(other)
        if isinstance(other, SymCoeff):
            return self._c == other._c
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self._c.items()))

    def evaluate(self, prec: int = 100) -> mpmath.mpf:
        with mpmath.workprec(prec):
            s2, pi = mpmath.sqrt(2), mpmath.pi
            acc = mpmath.mpf(0)
            for (a, b), v in self._c.items():
                acc += mpmath.mpf(v.numerator) / v.denominator * s2**a * pi ** (mpmath.mpf(-b) / 2)
            return +acc

    def __float__(self) -> float:
        return float(self.evaluate(64))

    def __repr__(self) -> str:
        return f"SymCoeff({self._c!r})"

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for (a, b), v in self._c.items():
            basis = _basis_str(a, b)
            if not basis:
                parts.append(_frac_str(v))
            elif v == 1:
                parts.append(basis)
            elif v == -1:
                parts.append("-" + basis)
            elif basis.startswith("1/"):
                num = _frac_str(v) if v.denominator == 1 else f"({_frac_str(v)})"
                parts.append(num + basis[1:])
            else:
                parts.append(f"{_frac_str(v)}*{basis}")
        s = " + ".join(parts).replace("+ -", "- ")
        return s


def _frac_str(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _basis_str(a: int, b: int) -> str:
    if b < 0:
        pi_part = "sqrt(pi)" if b == -1 else f"pi^({-b}/2)"
        return f"sqrt(2)*{pi_part}" if a else pi_part
    j, odd = divmod(b, 2)
    inv_pi = "" if j == 0 else ("/pi" if j == 1 else f"/pi^{j}")
    if a and odd:
        return "sqrt(2/pi)" + inv_pi
    if a:
        return "sqrt(2)" + inv_pi if j else "sqrt(2)"
    if odd:
        return "1/sqrt(pi)" + inv_pi
    return ("1" + inv_pi) if j else ""


ONE = SymCoeff({(0, 0): 1})
SQRT2 = SymCoeff({(1, 0): 1})
INV_SQRT_PI = SymCoeff({(0, 1): 1})
SQRT_2_OVER_PI = SymCoeff({(1, 1): 1})
INV_PI = SymCoeff({(0, 2): 1})


def _max_cut(*cuts):
    vals = [c for c in cuts if c is not None]
    return max(vals) if vals else None


class AsymSeries:
    """(2^n if ``pow2`` else 1) * sum_p coef_p * n^(p/2), known down to ``cutoff``."""

    __slots__ = ("terms", "cutoff", "pow2", "dropped_remainder")

    def __init__(
        self,
        terms: Mapping[int, object] | None = None,
        cutoff: int | None = None,
        pow2: bool = False,
        dropped_remainder: bool = False,
    ):
        clean: dict[int, SymCoeff] = {}
        for p, c in (terms or {}).items():
            c = SymCoeff.coerce(c)
            if c and (cutoff is None or p >= cutoff):
                clean[int(p)] = clean.get(int(p), SymCoeff()) + c
        self.terms = {p: clean[p] for p in sorted(clean, reverse=True) if clean[p]}
        self.cutoff = cutoff
        self.pow2 = bool(pow2)
        self.dropped_remainder = dropped_remainder

    @classmethod
    def from_order(cls, terms, K, **kw) -> "AsymSeries":
        return cls(terms, cutoff=_order_to_cut(K), **kw)

    @classmethod
    def polynomial(cls, coeffs: Sequence, pow2: bool = False) -> "AsymSeries":
        """Exact polynomial sum_i coeffs[i] n^i."""
        return cls({2 * i: c for i, c in enumerate(coeffs)}, None, pow2)

    @property
    def order(self) -> Fraction | None:
        """K such that terms below n^(-K) are discarded (None if exact)."""
        return None if self.cutoff is None else Fraction(-self.cutoff, 2)

    @property
    def is_exact(self) -> bool:
        return self.cutoff is None

    def top(self) -> int | None:
        if self.terms:
            return next(iter(self.terms))
        return None if self.cutoff is None else self.cutoff - 1

    def coefficient(self, p: int) -> SymCoeff:
        """Coefficient of n^(p/2)."""
        if self.cutoff is not None and p < self.cutoff:
            raise SeriesError(f"n^({p}/2) lies below the truncation point")
        return self.terms.get(p, SymCoeff())

    def coeff_at(self, power) -> SymCoeff:
        """Coefficient of n^power (power an integer or half-integer)."""
        p = Fraction(power) * 2
        if p.denominator != 1:
            raise ValueError("power must be a multiple of 1/2")
        return self.coefficient(int(p))

    def _replace(self, terms, cutoff, pow2=None, dropped=None) -> "AsymSeries":
        return AsymSeries(
            terms,
            cutoff,
            self.pow2 if pow2 is None else pow2,
            self.dropped_remainder if dropped is None else dropped,
        )

    def truncate(self, K) -> "AsymSeries":
        cut = _max_cut(self.cutoff, _order_to_cut(K))
        return self._replace(self.terms, cut)

    def _coerce(self, other) -> "AsymSeries":
        if isinstance(other, AsymSeries):
            return other
        return AsymSeries({0: SymCoeff.coerce(other)}, None, self.pow2)

    def __add__(self, other) -> "AsymSeries":
        other = self._coerce(other)
        if self.pow2 != other.pow2:
            raise SeriesError("cannot add series with different 2^n prefactors")
        cut = _max_cut(self.cutoff, other.cutoff)
        out = dict(self.terms)
        for p, c in other.terms.items():
            out[p] = out.get(p, SymCoeff()) + c
        return AsymSeries(out, cut, self.pow2, self.dropped_remainder or other.dropped_remainder)

    __radd__ = __add__

    def __neg__(self) -> "AsymSeries":
        return self._replace({p: -c for p, c in self.terms.items()}, self.cutoff)

    def __sub__(self, other) -> "AsymSeries":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "AsymSeries":
        return self._coerce(other) - self

    def scale(self, c) -> "AsymSeries":
        c = SymCoeff.coerce(c)
        return self._replace({p: v * c for p, v in self.terms.items()}, self.cutoff)

    def __mul__(self, other) -> "AsymSeries":
        if not isinstance(other, AsymSeries):
            return self.scale(other)
        if self.pow2 and other.pow2:
            raise SeriesError("product of two 2^n series is not representable")
        pow2 = self.pow2 or other.pow2
        dropped = self.dropped_remainder or other.dropped_remainder
        if (self.is_exact and not self.terms) or (other.is_exact and not other.terms):
            return AsymSeries({}, None, pow2, dropped)
        cuts = []
        if self.cutoff is not None:
            cuts.append(self.cutoff + other.top())
        if other.cutoff is not None:
            cuts.append(other.cutoff + self.top())
        cut = max(cuts) if cuts else None
        out: dict[int, SymCoeff] = {}
        for p, a in self.terms.items():
            for q, b in other.terms.items():
                s = p + q
                if cut is not None and s < cut:
                    continue
                out[s] = out.get(s, SymCoeff()) + a * b
        return AsymSeries(out, cut, pow2, dropped)

    __rmul__ = __mul__

    def __pow__(self, m: int) -> "AsymSeries":
        out = AsymSeries({0: 1}, None, False)
        for _ in range(m):
            out = out * self
        return out

    def times_n_power(self, p: int) -> "AsymSeries":
        """Multiply by n^(p/2)."""
        cut = None if self.cutoff is None else self.cutoff + p
        return self._replace({q + p: c for q, c in self.terms.items()}, cut)

    def without_prefactor(self) -> "AsymSeries":
        """Divide by 2^n."""
        if not self.pow2:
            raise SeriesError("series has no 2^n prefactor")
        return self._replace(self.terms, self.cutoff, pow2=False)

    def rescale(self, j: int) -> "AsymSeries":
        """s(2^j n) as a series in n."""
        out = {p: c * SymCoeff.sqrt2_power(j * p) for p, c in self.terms.items()}
        if self.pow2:
            raise SeriesError("rescaling a 2^n series is not representable")
        return self._replace(out, self.cutoff)

    def shift(self, h: int, K=None) -> "AsymSeries":
        """s(n + h) re-expanded in powers of n.

        Non-polynomial terms expand into infinite series; these are cut at
        the existing truncation point, or at order K for an exact input.
        """
        cut = self.cutoff
        if K is not None:
            cut = _max_cut(cut, _order_to_cut(K))
        out: dict[int, SymCoeff] = {}
        for p, c in self.terms.items():
            finite = p >= 0 and p % 2 == 0
            if not finite and cut is None:
                raise SeriesError("shifting a non-polynomial exact series needs an order K")
            x = Fraction(p, 2)
            j = 0
            while True:
                q = p - 2 * j
                if finite and j > p // 2:
                    break
                if cut is not None and q < cut:
                    break
                g = gbinom(x, j) * Fraction(h) ** j
                if g:
                    out[q] = out.get(q, SymCoeff()) + c * g
                j += 1
        res = self._replace(out, cut)
        if self.pow2:
            res = res.scale(Fraction(2) ** h)
        return res

    def exp(self) -> "AsymSeries":
        """exp(s) for a series with only negative powers."""
        if self.pow2:
            raise SeriesError("exp of a 2^n series")
        top = self.top()
        if top is not None and top >= 0 and self.terms:
            raise SeriesError("exp needs a series that vanishes as n grows")
        if self.cutoff is None and self.terms:
            raise SeriesError("exp of an exact non-polynomial series needs a truncation order")
        cut = self.cutoff
        out = AsymSeries({0: 1}, cut, False)
        term = AsymSeries({0: 1}, None, False)
        j = 1
        while True:
            term = (term * self).scale(Fraction(1, j)).truncate(Fraction(-cut, 2))
            if not term.terms:
                break
            out = out + term
            j += 1
        return AsymSeries(out.terms, cut, False, self.dropped_remainder)

    def evaluate(self, n, prec: int = 100, include_prefactor: bool = False) -> mpmath.mpf:
        with mpmath.workprec(prec):
            nn = mpmath.mpf(n)
            acc = mpmath.mpf(0)
            for p, c in self.terms.items():
                acc += c.evaluate(prec) * nn ** (mpmath.mpf(p) / 2)
            if include_prefactor and self.pow2:
                acc *= mpmath.mpf(2) ** nn
            return +acc

    def __eq__(self, other) -> bool:
        if not isinstance(other, AsymSeries):
            return NotImplemented
        return (self.terms, self.cutoff, self.pow2) == (other.terms, other.cutoff, other.pow2)

    def __repr__(self) -> str:
        return f"AsymSeries({self.pretty()!r}, order={self.order}, pow2={self.pow2})"

    def pretty(self) -> str:
        parts = []
        for p, c in self.terms.items():
            mono = _n_power_str(p)
            coef = str(c)
            if len(c.terms) > 1:
                coef = f"({coef})"
            if mono == "1":
                parts.append(coef)
            elif coef == "1":
                parts.append(mono)
            elif coef == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{coef}*{mono}")
        body = " + ".join(parts).replace("+ -", "- ") if parts else "0"
        if self.cutoff is not None:
            body += " + ..."
        if self.pow2:
            body = f"2^n*({body})"
        return body

    __str__ = pretty

    def to_json_terms(self) -> list[dict]:
        rows = []
        for p, c in self.terms.items():
            for (a, b), v in c.terms.items():
                rows.append({"pow2": a, "powInvPi": b, "nHalfPow": p, "coef": f"{v.numerator}/{v.denominator}"})
        return rows

    def to_dict(self) -> dict:
        return {
            "prefactor": "2^n" if self.pow2 else "none",
            "order": None if self.order is None else str(self.order),
            "dropped_remainder": self.dropped_remainder,
            "terms": self.to_json_terms(),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "AsymSeries":
        terms: dict[int, SymCoeff] = {}
        for row in d["terms"]:
            c = SymCoeff({(row["pow2"], row["powInvPi"]): Fraction(row["coef"])})
            terms[row["nHalfPow"]] = terms.get(row["nHalfPow"], SymCoeff()) + c
        order = d.get("order")
        cut = None if order is None else _order_to_cut(Fraction(order))
        return cls(terms, cut, d.get("prefactor") == "2^n", bool(d.get("dropped_remainder")))


def _n_power_str(p: int) -> str:
    if p == 0:
        return "1"
    if p == 2:
        return "n"
    if p % 2 == 0:
        return f"n^{p // 2}"
    return f"n^({p}/2)"


def _order_to_cut(K) -> int | None:
    if K is None:
        return None
    c = -2 * Fraction(K)
    if c.denominator != 1:
        raise ValueError("order must be a multiple of 1/2")
    return int(c)


# --- central binomial and recurrence constructions ---------------------------


def log_factorial_series(K: int) -> AsymSeries:
    """ln n! - ln(sqrt(2 pi) n^(n+1/2) e^(-n)) = sum_i B_2i / (2i(2i-1) n^(2i-1))."""
    if K < 1:
        raise ValueError("K must be >= 1")
    imax = K // 2 + 1
    terms = {-2 * (2 * i - 1): bernoulli(2 * i) / (2 * i * (2 * i - 1)) for i in range(1, imax + 1)}
    # next omitted term is n^-(2 imax + 1)
    return AsymSeries(terms, cutoff=-2 * (2 * imax + 1) + 1)


@lru_cache(maxsize=None)
def central_binomial_series(K: int) -> AsymSeries:
    """C(2n, n) sqrt(pi n) / 4^n = 1 - 1/(8n) + 1/(128 n^2) + ... to order K."""
    if K < 0:
        raise ValueError("K must be >= 0")
    lf = log_factorial_series(max(K, 1))
    x = lf.rescale(1) - lf.scale(2)
    return x.truncate(K).exp().truncate(K)


def series_from_two_term_recurrence(
    p0: Sequence[int],
    p1: Sequence[int],
    K: int,
    ratio: Fraction = Fraction(4),
    alpha: Fraction = Fraction(-1, 2),
) -> AsymSeries:
    """Normalized series solution of p0(n) f(n) + p1(n) f(n+1) = 0.

    With f(n) = ratio^n n^alpha (1 + a_1/n + a_2/n^2 + ...), returns
    1 + a_1/n + ... + a_K/n^K.  ``p0``/``p1`` list polynomial coefficients
    in n, constant term first.
    """
    ratio, alpha = Fraction(ratio), Fraction(alpha)
    d = max(len(p0), len(p1)) - 1
    p0 = list(p0) + [0] * (d + 1 - len(p0))
    p1 = list(p1) + [0] * (d + 1 - len(p1))
    nlev = K + 2
    # level l collects the coefficient of n^(d - l); column j is a_j
    rows = [[Fraction(0)] * (K + 1) for _ in range(nlev)]
    for j in range(K + 1):
        for e in range(d + 1):
            if p0[e]:
                lev = d - e + j
                if lev < nlev:
                    rows[lev][j] += p0[e]
            if p1[e]:
                i = 0
                while d - e + j + i < nlev:
                    rows[d - e + j + i][j] += ratio * p1[e] * gbinom(alpha - j, i)
                    i += 1
    a = [row[1:] for row in rows]
    b = [-row[0] for row in rows]
    try:
        sol = solve_exact(a, b)
    except ValueError as exc:
        raise SeriesError(f"ansatz cannot satisfy the recurrence: {exc}") from None
    return AsymSeries({0: 1, **{-2 * j: sol[j - 1] for j in range(1, K + 1)}}, cutoff=-2 * K)


def solve_parity_step2(
    rhs: AsymSeries, parity: str, K, remainder: AsymSeries | None = None
) -> AsymSeries:
    """Solve f(n) = f(n-2) + rhs(n) over one parity class of n.

    The ansatz is 2^n times a series in n^(1/2); the polynomial part of the
    series plays the role of (an + b) 2^n and the half-power part that of
    (a0 sqrt(n) + a1/sqrt(n) + ...) 2^n.  Since
    2^n n^x - 2^(n-2) (n-2)^x = (3/4) 2^n n^x + lower powers, the
    coefficients follow top-down.  A ``remainder`` without the 2^n factor
    is exponentially small after dividing by 2^n and is dropped, setting
    ``dropped_remainder``.
    """
    _parity(parity)
    if not rhs.pow2 and rhs.terms:
        raise SeriesError("right-hand side must carry the 2^n prefactor")
    exact_poly = rhs.is_exact and all(p >= 0 and p % 2 == 0 for p in rhs.terms)
    cut = None if exact_poly else _max_cut(rhs.cutoff, _order_to_cut(K))
    residual = {p: c for p, c in rhs.terms.items() if cut is None or p >= cut}
    sol: dict[int, SymCoeff] = {}
    while residual:
        p = max(residual)
        c = residual.pop(p)
        if not c:
            continue
        x = c * Fraction(4, 3)
        sol[p] = x
        finite = p >= 0 and p % 2 == 0
        j = 1
        while True:
            q = p - 2 * j
            if finite and j > p // 2:
                break
            if cut is not None and q < cut:
                break
            # f(n-2) contributes -(1/4) x C(p/2, j) (-2)^j n^(q/2)
            delta = x * (Fraction(-1, 4) * gbinom(Fraction(p, 2), j) * Fraction(-2) ** j)
            residual[q] = residual.get(q, SymCoeff()) - delta
            if not residual[q]:
                del residual[q]
            j += 1
    dropped = rhs.dropped_remainder or bool(remainder is not None and remainder.terms)
    return AsymSeries(sol, cut, True, dropped)


def _parity(parity) -> int:
    if parity in ("odd", 1):
        return 1
    if parity in ("even", 0):
        return 0
    raise ValueError(f"parity must be 'odd' or 'even', not {parity!r}")


# --- moments ----------------------------------------------------------------


def _G_value_k(r: int, par: int, k: int) -> int:
    from .genfun import G_deriv_closed

    return G_deriv_closed(r, 2 * k + par)


@lru_cache(maxsize=None)
def G_closed_form(r: int, parity: str) -> tuple[tuple[Fraction, ...], ...]:
    """Polynomials (A, B, C) in k with G^(r)(1) = A(k) 4^k + B(k) C(2k,k) + C(k).

    n = 2k for even parity and n = 2k+1 for odd.  The coefficients are found
    exactly from values of the binomial sums and confirmed on extra points.
    """
    par = _parity(parity)
    for deg in range(r + 1, r + 6):
        nunk = 3 * (deg + 1)
        ks = range(1, nunk + 8)
        rows, rhs = [], []
        for k in ks:
            f4, fc = 4**k, comb(2 * k, k)
            rows.append([k**i * f4 for i in range(deg + 1)]
                        + [k**i * fc for i in range(deg + 1)]
                        + [k**i for i in range(deg + 1)])
            rhs.append(_G_value_k(r, par, k))
        try:
            sol = solve_exact(rows, rhs)
        except ValueError:
            continue
        polys = [sol[i * (deg + 1):(i + 1) * (deg + 1)] for i in range(3)]
        return tuple(tuple(_trim(p)) for p in polys)
    raise SeriesError(f"no closed form of the expected shape for r={r}")


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _k_poly_in_n(coeffs: Sequence[Fraction], par: int) -> list[Fraction]:
    """Rewrite sum c_i k^i with k = (n - par)/2 as coefficients in n."""
    out = [Fraction(0)] * max(len(coeffs), 1)
    for i, c in enumerate(coeffs):
        # ((n - par)/2)^i
        for e in range(i + 1):
            out[e] += c * comb(i, e) * Fraction(-par) ** (i - e) / Fraction(2) ** i
    return out


def _central_binomial_in_n(par: int, K) -> AsymSeries:
    """C(2k, k) as a 2^n series in n, for n = 2k + par."""
    s = central_binomial_series(K)
    # C(2k,k) = 4^k / sqrt(pi k) * s(k); with k = n/2: 2^n sqrt(2/pi) n^(-1/2) s(n/2)
    t = s.rescale(-1).times_n_power(-1).scale(SQRT_2_OVER_PI)
    if par:
        # k = (n-1)/2: 4^k = 2^n / 2 and the rest is t evaluated at n - 1
        t = t.shift(-1).scale(Fraction(1, 2))
    return AsymSeries(t.terms, t.cutoff, True)


def G_series(r: int, parity: str, K) -> tuple[AsymSeries, AsymSeries]:
    """G^(r)_n(1) as (2^n-series, exact polynomial remainder) for one parity."""
    par = _parity(parity)
    A, B, C = G_closed_form(r, parity)
    An = _k_poly_in_n(A, par)
    Bn = _k_poly_in_n(B, par)
    Cn = _k_poly_in_n(C, par)
    main = AsymSeries.polynomial(An, pow2=True)
    if par:
        main = main.scale(Fraction(1, 2))
    degB = len(_trim(Bn)) - 1
    cb = _central_binomial_in_n(par, Fraction(K) + max(degB, 0) + 2)
    main = main + AsymSeries.polynomial(Bn) * cb
    return main.truncate(K), AsymSeries.polynomial(_trim(Cn))


@lru_cache(maxsize=None)
def D_series(r: int, parity: str, K) -> AsymSeries:
    """D_n^(r)(1) for n of one parity, as 2^n times a series, to order K.

    Two steps of D^(r)_n = D^(r)_{n-1} + r D^(r-1)_{n-1} + G^(r)_n give
    f(n) = f(n-2) + rhs(n) with rhs built from the other parity's series.
    """
    par = _parity(parity)
    if r == 0:
        return AsymSeries({0: 1}, None, True)
    other = "even" if par else "odd"
    g_same, rem_same = G_series(r, parity, K)
    g_other, rem_other = G_series(r, other, K)
    rhs = g_same + g_other.shift(-1)
    rhs = rhs + D_series(r - 1, other, K).shift(-1, K).scale(r)
    rhs = rhs + D_series(r - 1, parity, K).shift(-2, K).scale(r)
    remainder = rem_same + rem_other.shift(-1)
    return solve_parity_step2(rhs.truncate(K), parity, K, remainder)


def moment_series(r: int, parity: str, K=DEFAULT_ORDER) -> AsymSeries:
    """Factorial moment E[(X)_r] as a series in n for one parity of n."""
    if r < 0 or r > MAX_MOMENT:
        raise ValueError(f"r must be in 0..{MAX_MOMENT}")
    if r == 0:
        return AsymSeries({0: 1}, None, False)
    return D_series(r, parity, Fraction(K)).without_prefactor()


def central_moment_series(r: int, parity: str, K=DEFAULT_ORDER) -> AsymSeries:
    """E[(X - mu)^r] as a series in n, via Stirling numbers and binomial expansion."""
    if r < 1 or r > MAX_MOMENT:
        raise ValueError(f"r must be in 1..{MAX_MOMENT}")
    K = Fraction(K)
    Ki = K + r + 1
    fact = [moment_series(i, parity, Ki) for i in range(r + 1)]
    raw = []
    for j in range(r + 1):
        acc = AsymSeries({}, None, False)
        for i in range(j + 1):
            s = stirling2(j, i)
            if s:
                acc = acc + fact[i].scale(s)
        raw.append(acc)
    mu = raw[1]
    out = AsymSeries({}, None, False)
    for j in range(r + 1):
        out = out + (mu.scale(-1) ** (r - j) * raw[j]).scale(binom(r, j))
    out = out.truncate(K)
    if out.cutoff is not None and out.cutoff > _order_to_cut(K):
        raise SeriesError("internal truncation too coarse for the requested order")
    return out


@dataclass(frozen=True)
class SkewnessLimit:
    """Limit of m3 / m2^(3/2): numerator / denominator_base^(3/2)."""

    numerator: SymCoeff
    denominator_base: SymCoeff
    value: mpmath.mpf

    def __float__(self) -> float:
        return float(self.value)

    def __str__(self) -> str:
        return f"({self.numerator}) / ({self.denominator_base})^(3/2) = {mpmath.nstr(self.value, 15)}"


def skewness_limit(parity: str = "even", prec: int = 100) -> SkewnessLimit:
    """Leading coefficients of m3 (n^(3/2)) and m2 (n^1) and their ratio."""
    m2 = central_moment_series(2, parity, 1)
    m3 = central_moment_series(3, parity, 1)
    num = m3.coefficient(3)
    den = m2.coefficient(2)
    with mpmath.workprec(prec):
        val = num.evaluate(prec) / den.evaluate(prec) ** mpmath.mpf(1.5)
    return SkewnessLimit(num, den, val)
