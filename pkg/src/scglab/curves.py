"""Running-time curves and their empirical growth verdicts.

Verdicts come from a fixed rule over finitely many sizes and are labelled
EMPIRICAL: they describe the measured points and prove nothing about
asymptotics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .compiler import run_compiled
from .engine import Bounds
from .tm import TuringMachine, Verdict, simulate

LINEAR = "bounded-by-linear"
NLOGN = "consistent-with-nlogn"
SUPERLINEAR = "superlinear"


def constant_words(symbol: str) -> Callable:
    return lambda n, rng: (symbol,) * n


def uniform_words(alphabet: Sequence[str]) -> Callable:
    alphabet = list(alphabet)
    return lambda n, rng: tuple(alphabet[i] for i in rng.integers(len(alphabet), size=n))


@dataclass(frozen=True)
class CurveRow:
    n: int
    t: float

    @property
    def t_over_n(self) -> float:
        return self.t / self.n

    @property
    def t_over_nlogn(self) -> float:
        return self.t / (self.n * math.log2(self.n))


def non_increasing(values: Sequence[float], epsilon: float) -> bool:
    """Each value is at most ``1 + epsilon`` times its predecessor."""
    return all(b <= a * (1 + epsilon) for a, b in zip(values, values[1:]))


def classify(rows: Sequence[CurveRow], epsilon: float = 0.05) -> str:
    """Growth verdict from the upper half of the sizes (at least two points)."""
    top = rows[min(len(rows) // 2, len(rows) - 2):]
    if non_increasing([r.t_over_n for r in top], epsilon):
        return LINEAR
    if non_increasing([r.t_over_nlogn for r in top], epsilon):
        return NLOGN
    return SUPERLINEAR


@dataclass
class CurveReport:
    subject: str
    metric: str
    rows: list
    verdict: str
    epsilon: float
    seed: Optional[int]

    def csv(self) -> str:
        out = ["n,t,t_over_n,t_over_nlogn"]
        out += [f"{r.n},{r.t:.6g},{r.t_over_n:.6g},{r.t_over_nlogn:.6g}" for r in self.rows]
        return "\n".join(out) + "\n"

    def table(self) -> str:
        lines = [f"# subject: {self.subject}  metric: {self.metric}  seed: {self.seed}",
                 f"{'n':>6} {'t':>12} {'t/n':>10} {'t/(n log2 n)':>14}"]
        lines += [f"{r.n:>6} {r.t:>12.6g} {r.t_over_n:>10.4f} {r.t_over_nlogn:>14.4f}" for r in self.rows]
        lines.append(f"verdict: {self.verdict} (EMPIRICAL, eps={self.epsilon:g})")
        return "\n".join(lines) + "\n"


def _cost(subject, word, max_steps) -> float:
    if isinstance(subject, TuringMachine):
        r = simulate(subject, word, max_steps)
        if r.verdict is Verdict.STEP_LIMIT:
            raise RuntimeError(f"step cap {max_steps} reached at n={len(word)}")
        return r.steps
    run = run_compiled(subject, word, Bounds(max_steps=max_steps))
    if run.outcome.status != "fixpoint":
        raise RuntimeError(f"derivation ended with {run.outcome.status} at n={len(word)}")
    return run.outcome.stats.applications + run.outcome.stats.scan_work


def curve_bench(subject, input_generator: Optional[Callable] = None, sizes: Sequence[int] = (8, 16, 32, 64, 128, 256),
                repetitions: int = 1, seed: Optional[int] = 0, epsilon: float = 0.05,
                max_steps: float = 10_000_000) -> CurveReport:
    """Mean cost per size and a growth verdict.

    ``subject`` is a TuringMachine (cost = steps) or a CompiledGrammar
    (cost = rule applications + scan work).  ``input_generator(n, rng)``
    returns a word of length ``n``; the default draws uniformly from the
    machine's alphabet.  The generator gets one numpy Generator seeded with
    ``seed``, so reports are reproducible.
    """
    sizes = sorted(set(int(n) for n in sizes))
    if len(sizes) < 2:
        raise ValueError("curve_bench needs at least two distinct sizes")
    if sizes[0] < 2:
        raise ValueError("sizes must be >= 2 so that n log2 n > 0")
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    tm = subject if isinstance(subject, TuringMachine) else subject.tm
    gen = input_generator or uniform_words(tm.alphabet)
    rng = np.random.default_rng(seed)
    rows = []
    for n in sizes:
        costs = [_cost(subject, gen(n, rng), max_steps) for _ in range(repetitions)]
        rows.append(CurveRow(n, float(np.mean(costs))))
    kind = "tm" if isinstance(subject, TuringMachine) else "scg"
    metric = "steps" if kind == "tm" else "applications+scan_work"
    return CurveReport(kind, metric, rows, classify(rows, epsilon), epsilon, seed)
