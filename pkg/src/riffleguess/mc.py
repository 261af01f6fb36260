"""Monte Carlo play against sampled GSR decks, checked against exact values."""
from __future__ import annotations

import csv
import io
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np
from scipy import stats

from .genfun import D_poly
from .shuffle import enumeration_limit, iter_k_shuffles, sample_gsr_batch
from .errors import BudgetExceeded
from .strategy import correct_guesses_bayes

__all__ = [
    "Histogram",
    "Summary",
    "CHUNK",
    "play_one_shuffle_batch",
    "run_simulation",
    "summarize",
    "exact_distribution",
    "chi_square",
]

# Trials are drawn in fixed-size chunks with their own derived seeds, so the
# merged counts do not depend on how chunks are spread over workers.
CHUNK = 1 << 16


@dataclass(frozen=True)
class Histogram:
    n: int
    k: int
    trials: int
    seed: int
    counts: Mapping[int, int]

    def pmf(self) -> dict[int, Fraction]:
        return {v: Fraction(c, self.trials) for v, c in sorted(self.counts.items())}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["value", "count", "probability"])
        for v in range(self.n + 1):
            c = self.counts.get(v, 0)
            p = Fraction(c, self.trials)
            w.writerow([v, c, f"{p.numerator}/{p.denominator}"])
        return buf.getvalue()


@dataclass(frozen=True)
class Summary:
    mean: float
    variance: float
    skewness: float
    stderr: float


def play_one_shuffle_batch(decks: np.ndarray) -> np.ndarray:
    """Correct-guess counts of the optimal one-shuffle strategy, row-wise."""
    size, n = decks.shape
    correct = np.zeros(size, dtype=np.int64)
    split = np.zeros(size, dtype=bool)
    lo = np.zeros(size, dtype=np.int64)
    lo_end = np.zeros(size, dtype=np.int64)
    hi = np.zeros(size, dtype=np.int64)
    hi_end = np.full(size, n + 1, dtype=np.int64)
    for i in range(n):
        card = decks[:, i]
        a = lo_end - lo
        b = hi_end - hi
        guess = np.where(split, np.where((a >= b) & (a > 0), lo, hi), i + 1)
        correct += guess == card
        breaks = ~split & (card != i + 1)
        from_lo = split & (a > 0) & (card == lo)
        from_hi = split & ~from_lo
        lo = np.where(breaks, i + 1, lo + from_lo)
        lo_end = np.where(breaks, card, lo_end)
        hi = np.where(breaks, card + 1, hi + from_hi)
        split |= breaks
    return correct


def _run_chunk(args) -> Counter:
    n, k, size, seed_seq = args
    rng = np.random.default_rng(seed_seq)
    decks = sample_gsr_batch(n, k, size, rng)
    if k == 1:
        scores = play_one_shuffle_batch(decks)
        return Counter(dict(zip(*np.unique(scores, return_counts=True))))
    return Counter(correct_guesses_bayes(tuple(int(c) for c in row), k) for row in decks)


def run_simulation(
    n: int, k: int, trials: int, seed: int, workers: int = 1, limit: int | None = None
) -> Histogram:
    """Histogram of correct guesses over ``trials`` sampled decks."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    if k != 1:
        lim = enumeration_limit() if limit is None else limit
        if n > lim:
            raise BudgetExceeded(f"n={n} exceeds the Bayes-play limit {lim}")
    nchunks = -(-trials // CHUNK)
    children = np.random.SeedSequence(seed).spawn(nchunks)
    jobs = [(n, k, min(CHUNK, trials - i * CHUNK), children[i]) for i in range(nchunks)]
    total: Counter = Counter()
    if workers > 1 and nchunks > 1:
        with ProcessPoolExecutor(workers) as pool:
            for c in pool.map(_run_chunk, jobs):
                total.update(c)
    else:
        for job in jobs:
            total.update(_run_chunk(job))
    counts = {int(v): int(c) for v, c in sorted(total.items())}
    return Histogram(n, k, trials, seed, counts)


def summarize(h: Histogram) -> Summary:
    """Sample mean, variance (n-1 denominator), skewness and stderr of the mean."""
    if h.trials < 2:
        raise ValueError("need at least two trials")
    t = h.trials
    mean = sum(v * c for v, c in h.counts.items()) / t
    m2 = sum(c * (v - mean) ** 2 for v, c in h.counts.items()) / t
    m3 = sum(c * (v - mean) ** 3 for v, c in h.counts.items()) / t
    var = m2 * t / (t - 1)
    skew = m3 / m2**1.5 if m2 > 0 else 0.0
    return Summary(mean, var, skew, math.sqrt(var / t))


def exact_distribution(n: int, k: int) -> dict[int, Fraction]:
    """Exact law of the number of correct guesses for the simulated player."""
    if k == 1:
        d = D_poly(n)
        return {i: Fraction(d[i], 1 << n) for i in range(n + 1) if d[i]}
    tally: Counter = Counter()
    for deck, mult in iter_k_shuffles(n, k):
        tally[correct_guesses_bayes(deck, k)] += mult
    total = 1 << (k * n)
    return {v: Fraction(c, total) for v, c in sorted(tally.items())}


def chi_square(h: Histogram, expected: Mapping[int, Fraction]) -> tuple[float, float]:
    """Pearson statistic and p-value of the histogram against an exact pmf."""
    support = sorted(v for v, p in expected.items() if p > 0)
    extra = set(h.counts) - set(support)
    if extra:
        # an observation the exact law forbids
        return math.inf, 0.0
    obs = np.array([h.counts.get(v, 0) for v in support], dtype=float)
    exp = np.array([float(expected[v]) * h.trials for v in support])
    if len(support) < 2:
        return 0.0, 1.0
    res = stats.chisquare(obs, exp)
    return float(res.statistic), float(res.pvalue)
