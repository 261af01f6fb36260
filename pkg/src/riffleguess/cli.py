"""Command-line interface.

Exit codes: 0 ok, 1 usage error, 2 enumeration budget exceeded,
3 infeasible input.  Probabilities are printed as exact fractions except in
``--format pretty``, which appends a decimal approximation.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import asym, genfun, mc, shuffle, strategy
from .errors import BudgetExceeded, InfeasibleInput, RiffleGuessError

EXIT_USAGE, EXIT_BUDGET, EXIT_INFEASIBLE = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def parse_threshold(text: str) -> Fraction:
    """'5%', '1/20' or '0.05' -> exact Fraction."""
    text = text.strip()
    try:
        if text.endswith("%"):
            value = Fraction(text[:-1]) / 100
        else:
            value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad threshold {text!r}") from None
    if value <= 0:
        raise UsageError("threshold must be positive")
    return value


def parse_revealed(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"bad card list {text!r}") from None


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _approx(x: Fraction) -> str:
    return f"{_frac(x)} ({float(x):.6g})"


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="riffleguess", description="Card guessing after riffle shuffles.")
    p.add_argument("--limit", type=int, default=None,
                   help=f"enumeration budget override (default from ${shuffle.ENV_LIMIT} or 10)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def fmt(sp, choices=("json", "pretty"), default="json"):
        sp.add_argument("--format", choices=choices, default=default)

    sp = sub.add_parser("enumerate", help="exact deck distribution after k shuffles")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, default=1)
    fmt(sp)

    sp = sub.add_parser("genfun", help="coefficients of D_n(q)")
    sp.add_argument("--n", type=int, required=True)
    fmt(sp, ("json", "csv", "pretty"))

    sp = sub.add_parser("moments", help="exact factorial/raw/central moments")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--rmax", type=int, default=genfun.DEFAULT_RMAX)
    fmt(sp)

    sp = sub.add_parser("series", help="asymptotic moment series")
    sp.add_argument("--moment", type=int, required=True)
    sp.add_argument("--parity", choices=("odd", "even"), required=True)
    sp.add_argument("--order", type=Fraction, default=Fraction(asym.DEFAULT_ORDER))
    sp.add_argument("--central", action="store_true")
    fmt(sp)

    sp = sub.add_parser("guess", help="Bayes next-card distribution")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--revealed", default="")
    fmt(sp)

    sp = sub.add_parser("counterexample", help="smallest first-card counterexample")
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--nmax", type=int, required=True)
    fmt(sp)

    sp = sub.add_parser("randomness", help="shuffles needed to approach a random deck")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--threshold", default="5%")
    sp.add_argument("--kmax", type=int, default=64)
    fmt(sp)

    sp = sub.add_parser("simulate", help="Monte Carlo histogram of correct guesses")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    fmt(sp, ("csv", "json", "pretty"), "csv")
    return p


def _cmd_enumerate(a) -> str:
    if a.k == 1 and a.limit is None:
        dist = shuffle.enumerate_one_shuffle(a.n)
    else:
        dist = shuffle.enumerate_k_shuffles(a.n, a.k, a.limit)
    if a.format == "pretty":
        lines = [f"n={dist.n} k={dist.k} total={dist.total}"]
        lines += [f"{list(p)}  {m}  ({m / dist.total:.6g})" for p, m in dist.entries.items()]
        return "\n".join(lines) + "\n"
    return _dump(dist.to_dict())


def _cmd_genfun(a) -> str:
    d = genfun.D_poly(a.n)
    coeffs = [d[i] for i in range(a.n + 1)]
    if a.format == "csv":
        return genfun.distribution_csv(a.n)
    if a.format == "pretty":
        return f"D_{a.n}(q) = {d}\n"
    return _dump({"n": a.n, "total": str(1 << a.n), "coefficients": [str(c) for c in coeffs]})


def _cmd_moments(a) -> str:
    t = genfun.exact_moments(a.n, a.rmax)
    if a.format == "pretty":
        lines = [f"n = {a.n}"]
        for r in range(a.rmax + 1):
            lines.append(f"r={r}: factorial {_approx(t.factorial[r])}; raw {_approx(t.raw[r])}; "
                         f"central {_approx(t.central[r])}")
        return "\n".join(lines) + "\n"
    return _dump(t.to_dict())


def _cmd_series(a) -> str:
    if a.central:
        s = asym.central_moment_series(a.moment, a.parity, a.order)
        label = f"E[(X-mu)^{a.moment}]"
    else:
        s = asym.moment_series(a.moment, a.parity, a.order)
        label = f"E[(X)_{a.moment}]"
    if a.format == "pretty":
        return f"{label} ({a.parity} n) = {s.pretty()}\n"
    return _dump({"moment": a.moment, "parity": a.parity, "central": a.central,
                  "pretty": s.pretty(), **s.to_dict()})


def _cmd_guess(a) -> str:
    pmf = strategy.bayes_next_pmf(a.n, a.k, parse_revealed(a.revealed), a.limit)
    if a.format == "pretty":
        lines = [f"n={a.n} k={a.k} revealed={list(pmf.revealed)} total weight {pmf.denominator_weight}"]
        for c, w in sorted(pmf.weights.items()):
            lines.append(f"card {c}: {w}/{pmf.denominator_weight} ({w / pmf.denominator_weight:.6g})")
        lines.append(f"best guess: {pmf.argmax}")
        return "\n".join(lines) + "\n"
    return _dump(pmf.to_dict())


def _cmd_counterexample(a) -> str:
    found = strategy.find_min_counterexample(a.k, a.nmax, a.limit)
    if a.format == "pretty":
        if found is None:
            return "none\n"
        n, rev, g, b = found
        return f"n={n} revealed={rev}: longer-pile guess {g}, Bayes guess {b}\n"
    if found is None:
        return _dump({"k": a.k, "nmax": a.nmax, "counterexample": None})
    n, rev, g, b = found
    pmf = strategy.bayes_next_pmf(n, a.k, rev, a.limit)
    return _dump({"k": a.k, "nmax": a.nmax, "counterexample": {
        "n": n, "revealed": rev, "greedy_card": g, "bayes_card": b,
        "greedy_ratio": f"{pmf.weights[g]}/{pmf.denominator_weight}",
        "bayes_ratio": f"{pmf.weights[b]}/{pmf.denominator_weight}"}})


def _cmd_randomness(a) -> str:
    thr = parse_threshold(a.threshold)
    h = strategy.harmonic_expectation(a.n)
    need = strategy.shuffles_needed(a.n, thr, a.kmax, a.limit)
    rows = []
    for k in range(need + 1):
        e = strategy.expected_correct(a.n, k, a.limit)
        rows.append((k, e, abs(e - h) / h))
    if a.format == "pretty":
        lines = [f"n={a.n} H_n={_approx(h)} threshold={_approx(thr)}"]
        lines += [f"k={k}: e_k={_approx(e)} residual={_approx(r)}" for k, e, r in rows]
        lines.append(f"shuffles needed: {need}")
        return "\n".join(lines) + "\n"
    return _dump({"n": a.n, "H_n": _frac(h), "threshold": _frac(thr),
                  "e_k": [{"k": k, "e": _frac(e), "residual": _frac(r)} for k, e, r in rows],
                  "shuffles_needed": need})


def _cmd_simulate(a) -> str:
    if a.workers < 1:
        raise UsageError("--workers must be >= 1")
    h = mc.run_simulation(a.n, a.k, a.trials, a.seed, a.workers, a.limit)
    s = mc.summarize(h) if a.trials >= 2 else None
    summary = None if s is None else {"mean": s.mean, "variance": s.variance,
                                      "skewness": s.skewness, "stderr": s.stderr}
    if a.format == "json":
        return _dump({"n": h.n, "k": h.k, "trials": h.trials, "seed": h.seed,
                      "counts": {str(v): c for v, c in sorted(h.counts.items())},
                      "summary": summary})
    if a.format == "pretty":
        lines = [f"n={h.n} k={h.k} trials={h.trials} seed={h.seed}"]
        lines += [f"{v}: {c}" for v, c in sorted(h.counts.items())]
        if summary:
            lines.append("mean={mean:.6f} variance={variance:.6f} skewness={skewness:.6f} "
                         "stderr={stderr:.6f}".format(**summary))
        return "\n".join(lines) + "\n"
    if summary:
        print(f"# n={h.n} k={h.k} trials={h.trials} seed={h.seed} mean={s.mean:.6f} "
              f"variance={s.variance:.6f} skewness={s.skewness:.6f}", file=sys.stderr)
    return h.to_csv()


_COMMANDS = {
    "enumerate": _cmd_enumerate,
    "genfun": _cmd_genfun,
    "moments": _cmd_moments,
    "series": _cmd_series,
    "guess": _cmd_guess,
    "counterexample": _cmd_counterexample,
    "randomness": _cmd_randomness,
    "simulate": _cmd_simulate,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        out = _COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InfeasibleInput as exc:
        print(f"infeasible input: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ValueError, RiffleGuessError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
