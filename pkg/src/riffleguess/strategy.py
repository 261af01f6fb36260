"""Guessing strategies with complete feedback and their exact evaluation.

For k shuffles the weight of every revealed-prefix state depends only on
the set of cards already shown and the number of inverse descents they
have produced, so the whole game tree collapses onto (bitmask, descents)
states and is memoized on those.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .errors import BudgetExceeded, InfeasibleInput, UnreachableDeck
from .exactnum import binom
from .shuffle import enumeration_limit, rising_sequences

__all__ = [
    "GuessState",
    "NextCardPmf",
    "correct_guesses_one_shuffle",
    "first_card_pmf",
    "next_from_split",
    "bayes_next_pmf",
    "bayes_guess",
    "correct_guesses_bayes",
    "find_min_counterexample",
    "expected_correct",
    "harmonic_expectation",
    "shuffles_needed",
]


@dataclass
class GuessState:
    """Player's knowledge during one-shuffle play.

    While the revealed cards are exactly 1..j in order the deck could still
    be the identity, and the next guess is j+1.  Once a card breaks that
    run the remaining cards split into two known increasing piles.
    """

    n: int
    revealed: list[int] = field(default_factory=list)
    low: list[int] | None = None
    high: list[int] | None = None

    @property
    def split(self) -> tuple[int, int] | None:
        if self.low is None:
            return None
        return len(self.low), len(self.high)

    def guess(self) -> int:
        if self.low is None:
            return len(self.revealed) + 1
        a, b = len(self.low), len(self.high)
        # tie -> lower card, and every low card is below every high card
        return self.low[0] if a >= b and a else self.high[0]

    def reveal(self, card: int) -> None:
        if self.low is None:
            j = len(self.revealed)
            if card != j + 1:
                self.low = list(range(j + 1, card))
                self.high = list(range(card + 1, self.n + 1))
        elif self.low and self.low[0] == card:
            self.low.pop(0)
        elif self.high and self.high[0] == card:
            self.high.pop(0)
        else:
            raise UnreachableDeck(f"card {card} heads neither pile")
        self.revealed.append(card)


def correct_guesses_one_shuffle(deck: Sequence[int]) -> int:
    """Correct guesses when the optimal one-shuffle strategy plays ``deck``."""
    deck = tuple(deck)
    if rising_sequences(deck) > 2:
        raise UnreachableDeck(f"{list(deck)} has more than two rising sequences")
    state = GuessState(len(deck))
    correct = 0
    for card in deck:
        correct += state.guess() == card
        state.reveal(card)
    return correct


@dataclass(frozen=True)
class NextCardPmf:
    """Exact conditional distribution of the next card.

    ``weights`` are shuffle-history counts; ``denominator_weight`` is their
    total, so each probability is weights[c] / denominator_weight.
    """

    weights: Mapping[int, int]
    denominator_weight: int
    n: int = 0
    k: int | None = None
    revealed: tuple[int, ...] = ()

    @property
    def entries(self) -> dict[int, Fraction]:
        return {c: Fraction(w, self.denominator_weight) for c, w in self.weights.items()}

    def __getitem__(self, card: int) -> Fraction:
        return Fraction(self.weights.get(card, 0), self.denominator_weight)

    @property
    def argmax(self) -> int:
        """Most probable card, lowest card on ties."""
        best = max(self.weights.values())
        return min(c for c, w in self.weights.items() if w == best)

    def to_dict(self) -> dict:
        d = self.denominator_weight
        entries = []
        for c, w in sorted(self.weights.items()):
            p = Fraction(w, d)
            entries.append(
                {"card": c, "weight": str(w), "prob": f"{p.numerator}/{p.denominator}",
                 "ratio": f"{w}/{d}"}
            )
        return {
            "n": self.n,
            "k": self.k,
            "revealed": list(self.revealed),
            "denominator_weight": str(d),
            "argmax": self.argmax,
            "entries": entries,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def first_card_pmf(n: int) -> NextCardPmf:
    """Top-card distribution after one shuffle (weights out of 2^n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    # card 1 is on top whenever the cut pile drops first, plus the empty cut
    weights = {m: binom(n - 1, m - 1) for m in range(2, n + 1)}
    weights[1] = (1 << (n - 1)) + 1
    weights = dict(sorted(weights.items()))
    return NextCardPmf(weights, 1 << n, n, 1, ())


def next_from_split(a: int, b: int) -> Fraction:
    """Probability the next card heads the length-a pile."""
    if a < 0 or b < 0 or a + b < 1:
        raise ValueError("need a, b >= 0 and a + b >= 1")
    return Fraction(a, a + b)


@lru_cache(maxsize=None)
def _subtree(n: int, a: int, mask: int, desc: int) -> tuple[int, int]:
    """(total weight, sum over descendant states of the best child weight).

    ``mask`` bit c is set when card c is placed; ``desc`` counts inverse
    descents so far.  The second component is the weighted number of correct
    Bayes-greedy guesses in the subtree.
    """
    full = (1 << (n + 1)) - 2
    if mask == full:
        return binom(n + a - desc - 1, n), 0
    total = best = value = 0
    for c in range(1, n + 1):
        bit = 1 << c
        if mask & bit:
            continue
        d = desc + bool(mask & (bit << 1))
        if d >= a:
            continue
        w, v = _subtree(n, a, mask | bit, d)
        total += w
        value += v
        best = max(best, w)
    return total, value + best


def _state(n: int, revealed: Sequence[int]) -> tuple[int, int]:
    mask = desc = 0
    for c in revealed:
        if not 1 <= c <= n or mask & (1 << c):
            raise InfeasibleInput(f"invalid revealed prefix {list(revealed)}")
        desc += bool(mask & (1 << (c + 1)))
        mask |= 1 << c
    return mask, desc


def _check(n: int, k: int, limit: int | None) -> None:
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    limit = enumeration_limit() if limit is None else limit
    if n > limit:
        raise BudgetExceeded(f"n={n} exceeds the enumeration limit {limit}")


def _child_weights(n: int, a: int, mask: int, desc: int) -> dict[int, int]:
    out = {}
    for c in range(1, n + 1):
        bit = 1 << c
        if mask & bit:
            continue
        d = desc + bool(mask & (bit << 1))
        out[c] = _subtree(n, a, mask | bit, d)[0] if d < a else 0
    return out


def bayes_next_pmf(
    n: int, k: int, revealed: Sequence[int] = (), limit: int | None = None
) -> NextCardPmf:
    """Exact next-card distribution after k shuffles given the revealed prefix."""
    _check(n, k, limit)
    revealed = tuple(revealed)
    if len(revealed) >= n:
        raise InfeasibleInput("no cards left to guess")
    a = 1 << k
    mask, desc = _state(n, revealed)
    weights = _child_weights(n, a, mask, desc) if desc < a else {}
    total = sum(weights.values())
    if total == 0:
        raise InfeasibleInput(f"prefix {list(revealed)} cannot occur after {k} shuffles")
    return NextCardPmf(weights, total, n, k, revealed)


@lru_cache(maxsize=None)
def _best(n: int, a: int, mask: int, desc: int) -> int:
    w = _child_weights(n, a, mask, desc)
    top = max(w.values())
    return min(c for c, x in w.items() if x == top)


def bayes_guess(n: int, k: int, revealed: Sequence[int]) -> int:
    """Bayes-greedy guess (lowest card on ties) for a feasible prefix."""
    mask, desc = _state(n, revealed)
    return _best(n, 1 << k, mask, desc)


def correct_guesses_bayes(deck: Sequence[int], k: int) -> int:
    """Correct guesses of the Bayes-greedy player on a given deck."""
    n = len(deck)
    a = 1 << k
    mask = desc = correct = 0
    for c in deck:
        correct += _best(n, a, mask, desc) == c
        desc += bool(mask & (1 << (c + 1)))
        mask |= 1 << c
        if desc >= a:
            raise InfeasibleInput(f"{list(deck)} cannot occur after {k} shuffles")
    return correct


def _longer_pile_guess(n: int, first: int) -> int:
    a, b = first - 1, n - first
    return 1 if a >= b and a else first + 1


def find_min_counterexample(k: int, n_max: int, limit: int | None = None):
    """First single-card state where the longer-pile guess is not Bayes-optimal.

    Returns (n, [first card], longer-pile guess, Bayes guess) or None.  A
    state counts only when the longer-pile card is strictly less likely than
    the Bayes argmax.
    """
    for n in range(2, n_max + 1):
        _check(n, k, limit)
        for first in range(1, n + 1):
            pmf = bayes_next_pmf(n, k, (first,), limit)
            greedy = _longer_pile_guess(n, first)
            if pmf.weights[greedy] < max(pmf.weights.values()):
                return n, [first], greedy, pmf.argmax
    return None


def expected_correct(n: int, k: int, limit: int | None = None) -> Fraction:
    """Expected correct guesses of the Bayes-greedy player after k shuffles."""
    _check(n, k, limit)
    a = 1 << k
    total, value = _subtree(n, a, 0, 0)
    assert total == a**n
    return Fraction(value, total)


def harmonic_expectation(n: int) -> Fraction:
    """Expected correct guesses for a uniformly random deck: H_n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return sum((Fraction(1, i) for i in range(1, n + 1)), Fraction(0))


def shuffles_needed(
    n: int, threshold: Fraction, k_max: int = 64, limit: int | None = None
) -> int:
    """Smallest k with |e_k - H_n| / H_n < threshold."""
    threshold = Fraction(threshold)
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    h = harmonic_expectation(n)
    for k in range(k_max + 1):
        if abs(expected_correct(n, k, limit) - h) / h < threshold:
            return k
    raise BudgetExceeded(f"relative residual not below {threshold} by k={k_max}")
