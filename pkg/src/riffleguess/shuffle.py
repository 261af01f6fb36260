"""Gilbert-Shannon-Reeds riffle shuffles: exact deck distributions and sampling.

A permutation is a tuple of the card values 1..n listed from the top of the
deck.  After k shuffles a deck with m rising sequences arises in
C(n + 2^k - m, n) of the 2^(kn) equally likely shuffle histories.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from itertools import combinations
from types import MappingProxyType
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import BudgetExceeded, InfeasibleInput
from .exactnum import binom, eulerian

__all__ = [
    "Permutation",
    "DeckDistribution",
    "ONE_SHUFFLE_LIMIT",
    "enumeration_limit",
    "check_permutation",
    "enumerate_one_shuffle",
    "rising_sequences",
    "inverse_and_runs",
    "multiplicity",
    "iter_k_shuffles",
    "enumerate_k_shuffles",
    "worpitzky_total",
    "sample_gsr",
    "sample_gsr_batch",
]

Permutation = tuple  # tuple[int, ...], top card first

ONE_SHUFFLE_LIMIT = 20
ENV_LIMIT = "RIFFLEGUESS_MAX_N"
_DEFAULT_K_LIMIT = 10


def enumeration_limit() -> int:
    """Largest deck size for n!-scale enumeration (env-overridable)."""
    raw = os.environ.get(ENV_LIMIT)
    return int(raw) if raw else _DEFAULT_K_LIMIT


def _check_budget(n: int, limit: int | None, default: int) -> None:
    limit = default if limit is None else limit
    if n > limit:
        raise BudgetExceeded(f"n={n} exceeds the enumeration limit {limit}")


def check_permutation(p: Sequence[int]) -> Permutation:
    p = tuple(int(c) for c in p)
    if not p or sorted(p) != list(range(1, len(p) + 1)):
        raise ValueError(f"not a permutation of 1..n: {list(p)}")
    return p


@dataclass(frozen=True)
class DeckDistribution:
    """Permutation -> number of shuffle histories producing it."""

    n: int
    k: int
    entries: Mapping[Permutation, int]
    total: int = field(default=0)

    def __post_init__(self):
        ordered = dict(sorted(self.entries.items()))
        object.__setattr__(self, "entries", MappingProxyType(ordered))
        s = sum(ordered.values())
        if self.total and self.total != s:
            raise ValueError(f"total {self.total} != sum of multiplicities {s}")
        object.__setattr__(self, "total", s)

    def probability(self, p: Sequence[int]):
        from fractions import Fraction

        return Fraction(self.entries.get(tuple(p), 0), self.total)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "total": str(self.total),
            "entries": [{"perm": list(p), "mult": str(m)} for p, m in self.entries.items()],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "DeckDistribution":
        entries = {tuple(e["perm"]): int(e["mult"]) for e in d["entries"]}
        return cls(int(d["n"]), int(d["k"]), entries, int(d["total"]))

    @classmethod
    def from_json(cls, s: str) -> "DeckDistribution":
        return cls.from_dict(json.loads(s))


def enumerate_one_shuffle(n: int, limit: int | None = None) -> DeckDistribution:
    """All 2^n (cut, interleaving) outcomes of one riffle shuffle, tallied."""
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_budget(n, limit, ONE_SHUFFLE_LIMIT)
    counts: dict[Permutation, int] = {}
    for t in range(n + 1):
        for top_slots in combinations(range(n), t):
            deck = [0] * n
            slots = set(top_slots)
            nxt_top, nxt_bot = 1, t + 1
            for pos in range(n):
                if pos in slots:
                    deck[pos] = nxt_top
                    nxt_top += 1
                else:
                    deck[pos] = nxt_bot
                    nxt_bot += 1
            key = tuple(deck)
            counts[key] = counts.get(key, 0) + 1
    return DeckDistribution(n, 1, counts)


def _inverse(p: Sequence[int]) -> list[int]:
    inv = [0] * len(p)
    for pos, card in enumerate(p, start=1):
        inv[card - 1] = pos
    return inv


def rising_sequences(p: Sequence[int]) -> int:
    """Number of rising sequences: 1 + descents of the inverse permutation."""
    inv = _inverse(p)
    return 1 + sum(1 for i in range(len(inv) - 1) if inv[i + 1] < inv[i])


def inverse_and_runs(p: Sequence[int]) -> tuple[Permutation, list[Permutation]]:
    """The inverse permutation and its maximal ascending runs."""
    inv = _inverse(p)
    runs: list[Permutation] = []
    start = 0
    for i in range(1, len(inv) + 1):
        if i == len(inv) or inv[i] < inv[i - 1]:
            runs.append(tuple(inv[start:i]))
            start = i
    return tuple(inv), runs


def multiplicity(p: Sequence[int], k: int) -> int:
    """Number of k-shuffle histories that produce deck p."""
    n = len(p)
    m = rising_sequences(p)
    a = 1 << k
    return binom(n + a - m, n) if m <= a else 0


def iter_k_shuffles(
    n: int, k: int, prefix: Sequence[int] = ()
) -> Iterator[tuple[Permutation, int]]:
    """Yield (perm, multiplicity) for decks extending ``prefix``, lexicographically.

    Permutations are built position by position.  Placing card c adds an
    inverse descent exactly when c+1 is already placed, so the descent count
    only grows and zero-weight subtrees (more than 2^k - 1 descents) are cut.
    """
    a = 1 << k
    weight = [binom(n + a - m, n) if m <= a else 0 for m in range(n + 2)]
    placed = [False] * (n + 2)
    deck: list[int] = []
    desc = 0
    for c in prefix:
        if not 1 <= c <= n or placed[c]:
            raise InfeasibleInput(f"invalid revealed prefix {list(prefix)}")
        desc += placed[c + 1]
        placed[c] = True
        deck.append(c)
    if desc + 1 > a:
        return

    def rec(depth: int, desc: int):
        if depth == n:
            yield tuple(deck), weight[desc + 1]
            return
        for c in range(1, n + 1):
            if placed[c]:
                continue
            d = desc + placed[c + 1]
            if d >= a:
                continue
            placed[c] = True
            deck.append(c)
            yield from rec(depth + 1, d)
            deck.pop()
            placed[c] = False

    yield from rec(len(deck), desc)


def enumerate_k_shuffles(n: int, k: int, limit: int | None = None) -> DeckDistribution:
    """Exact deck distribution after k shuffles (positive multiplicities only)."""
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    _check_budget(n, limit, enumeration_limit())
    return DeckDistribution(n, k, dict(iter_k_shuffles(n, k)))


def worpitzky_total(n: int, k: int) -> tuple[int, int]:
    """(2^(kn), sum_m A(n, m-1) C(n + 2^k - m, n)); both count k-shuffle histories."""
    x = 1 << k
    rhs = sum(eulerian(n, m - 1) * binom(n + x - m, n) for m in range(1, min(x, n) + 1))
    return x**n, rhs


def sample_gsr_batch(n: int, k: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``size`` decks after k GSR shuffles; returns an int array (size, n).

    Each shuffle cuts t ~ Binomial(n, 1/2) cards and then drops cards one at
    a time, taking from a pile holding a cards (other pile b) with
    probability a / (a + b).
    """
    decks = np.tile(np.arange(1, n + 1, dtype=np.int64), (size, 1))
    rows = np.arange(size)
    for _ in range(k):
        t = rng.binomial(n, 0.5, size=size)
        i_top = np.zeros(size, dtype=np.int64)
        i_bot = np.zeros(size, dtype=np.int64)
        out = np.empty_like(decks)
        for j in range(n):
            a = t - i_top
            take_top = rng.random(size) * (n - j) < a
            src = np.where(take_top, i_top, t + i_bot)
            out[:, j] = decks[rows, src]
            i_top += take_top
            i_bot += ~take_top
        decks = out
    return decks


def sample_gsr(n: int, k: int, seed: int) -> Permutation:
    """One deck after k GSR shuffles; deterministic in ``seed``."""
    rng = np.random.default_rng(seed)
    return tuple(int(c) for c in sample_gsr_batch(n, k, 1, rng)[0])
