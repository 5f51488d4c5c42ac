"""Crossing-sequence analysis: square replay, NFA extraction and brute-force checks.

A crossing sequence is a tuple of ``(state, direction)`` pairs for one
boundary, where ``direction`` is +1 for a rightward crossing and -1 for a
leftward one.  Directions alternate and start with +1.  Boundary ``b`` sits
between squares ``b`` and ``b + 1``; square 0 holds LB and has no left
boundary.

The extracted automaton is an acceptor.  Its states pair a crossing
sequence with a bit recording whether the accepting halt has already been
placed on a square to the left.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .cohorts import LB, RB
from .errors import CapacityExceeded
from .tm import TuringMachine, Verdict, all_words, simulate

LEFTMOST, INTERIOR, RIGHTMOST = "leftmost", "interior", "rightmost"
FORWARD, BACKWARD = 1, -1


def _well_formed(seq) -> bool:
    return all(d == (FORWARD if i % 2 == 0 else BACKWARD) for i, (_, d) in enumerate(seq))


def replay_square(left, right, initial_symbol: str, tm: TuringMachine, position_kind: str = INTERIOR,
                  halting: Optional[bool] = None) -> bool:
    """Replay every visit to one square and check both boundary sequences.

    ``left`` is the crossing sequence of the boundary to the left of the
    square and ``right`` that of the boundary to its right.  With
    ``halting=True`` the last visit must end in a halt, with ``False`` it
    must not, and ``None`` allows either.
    """
    left, right = tuple(left), tuple(right)
    if not (_well_formed(left) and _well_formed(right)):
        return False
    sym = initial_symbol
    pl = pr = 0
    if position_kind == LEFTMOST:
        if left:
            return False
        state = tm.start
    else:
        if not left:
            return not right and halting is not True
        state = left[0][0]
        pl = 1
    while True:
        seen = set()
        while True:
            t = tm.delta(state, sym)
            if t is None:
                return pl == len(left) and pr == len(right) and halting is not False
            if (state, sym) in seen:
                return False
            seen.add((state, sym))
            if t.move == BACKWARD and position_kind == LEFTMOST:
                return False
            if t.move == FORWARD and t.write == RB:
                return False
            sym, state = t.write, t.dst
            if t.move:
                break
        if t.move == BACKWARD:
            if pl >= len(left) or left[pl] != (state, BACKWARD):
                return False
            pl += 1
            if pl == len(left):
                return pr == len(right) and halting is not True
            state = left[pl][0]
            pl += 1
        else:
            if pr >= len(right) or right[pr] != (state, FORWARD):
                return False
            pr += 1
            if pr == len(right):
                return pl == len(left) and halting is not True
            state = right[pr][0]
            pr += 1


def square_successors(left, symbol: str, tm: TuringMachine, position_kind: str, k: int):
    """Every right-hand crossing sequence of length <= k consistent with ``left``.

    Yields ``(right, halt_state)`` where ``halt_state`` is None unless the
    square is where the run halts.  Returning states on the right are
    guessed, so the same ``left`` can have many successors.
    """
    left = tuple(left)
    if position_kind == LEFTMOST:
        if left:
            return
        start = tm.start
        pl = 0
    else:
        if not left:
            yield (), None
            return
        start = left[0][0]
        pl = 1
    yield from _continue(left, pl, (), start, symbol, tm, position_kind, k)


def _continue(left, pl, built, state, sym, tm, kind, k):
    seen = set()
    while True:
        t = tm.delta(state, sym)
        if t is None:
            if pl == len(left):
                yield built, state
            return
        if (state, sym) in seen:
            return
        seen.add((state, sym))
        if t.move == BACKWARD and kind == LEFTMOST:
            return
        if t.move == FORWARD and t.write == RB:
            return
        sym, state = t.write, t.dst
        if t.move:
            break
    if t.move == BACKWARD:
        if pl >= len(left) or left[pl] != (state, BACKWARD):
            return
        pl += 1
        if pl == len(left):
            yield built, None
            return
        yield from _continue(left, pl + 1, built, left[pl][0], sym, tm, kind, k)
        return
    if len(built) + 1 > k:
        return
    built = built + ((state, FORWARD),)
    if pl == len(left):
        yield built, None
    if len(built) + 1 > k:
        return
    for q in tm.states:
        yield from _continue(left, pl, built + ((q, BACKWARD),), q, sym, tm, kind, k)


def format_crossing(seq) -> str:
    return "[" + " ".join(f"{q}{'>' if d == FORWARD else '<'}" for q, d in seq) + "]"


@dataclass
class ExtractedNfa:
    """Acceptor whose states are ``(crossing sequence, halted)`` pairs."""

    k: int
    tm: TuringMachine
    states: list
    initial: frozenset
    finals: frozenset
    delta: dict = field(default_factory=dict)  # (state index, symbol) -> frozenset of indices

    @property
    def state_count(self) -> int:
        return len(self.states)

    @property
    def transition_count(self) -> int:
        return sum(len(v) for v in self.delta.values())

    @property
    def ceiling(self) -> int:
        """Number of possible crossing sequences of length <= k, times two for the halt bit."""
        q = len(self.tm.states)
        return 2 * sum(q ** j for j in range(self.k + 1))

    def accepts(self, word) -> bool:
        current = set(self.initial)
        for a in self.tm.word(word):
            nxt = set()
            for s in current:
                nxt |= self.delta.get((s, a), frozenset())
            current = nxt
            if not current:
                return False
        return bool(current & self.finals)

    def without_final(self, index: Optional[int] = None) -> "ExtractedNfa":
        """Mutant with one final state dropped (the lowest-numbered one by default)."""
        if not self.finals:
            raise ValueError("automaton has no final states")
        drop = min(self.finals) if index is None else index
        return ExtractedNfa(self.k, self.tm, self.states, self.initial, self.finals - {drop}, self.delta)

    def name(self, i: int) -> str:
        seq, bit = self.states[i]
        return f"{format_crossing(seq)}/{bit}"

    def export(self) -> str:
        lines = ["initial: " + " ".join(self.name(i) for i in sorted(self.initial)),
                 "final: " + " ".join(self.name(i) for i in sorted(self.finals))]
        for (i, a), targets in sorted(self.delta.items()):
            lines += [f"{self.name(i)} -{a}-> {self.name(j)}" for j in sorted(targets)]
        return "\n".join(lines) + "\n"

    def summary(self) -> str:
        q, o = len(self.tm.states), len(self.tm.alphabet)
        return (f"k={self.k} states={self.state_count} transitions={self.transition_count} "
                f"ceiling={self.ceiling} (|Q|={q}, |Omega|={o}, |Omega|*log2|Q|={o * math.log2(max(q, 2)):.2f})")


def _right_region(tm: TuringMachine, roots, k: int):
    """Least fixpoints over the RB squares right of the input.

    ``r0`` holds the sequences from which the rest of the tape can be
    replayed without halting, ``r1`` those where it contains exactly one
    accepting halt.  The empty sequence (squares never reached) is in r0.
    """
    succ = {}
    todo = list(roots)
    while todo:
        s = todo.pop()
        if s in succ:
            continue
        succ[s] = list(square_successors(s, RB, tm, RIGHTMOST, k))
        todo.extend(r for r, _ in succ[s] if r not in succ)
    r0, r1 = {()}, set()
    changed = True
    while changed:
        changed = False
        for s, outs in succ.items():
            if s not in r0 and any(h is None and r in r0 for r, h in outs):
                r0.add(s)
                changed = True
            if s not in r1 and any((h is None and r in r1) or (h in tm.finals and r in r0) for r, h in outs):
                r1.add(s)
                changed = True
    return r0, r1


def extract_nfa(tm: TuringMachine, k: int, max_states: int = 50_000) -> ExtractedNfa:
    """Build the crossing-sequence automaton of ``tm`` for sequences of length <= k.

    Only states reachable from the initial ones are built.  The result
    accepts a word iff some assignment of crossing sequences of length <= k
    to its boundaries replays consistently with exactly one halt, in a final
    state.  Raises CapacityExceeded past ``max_states``.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    index: dict = {}
    states: list = []

    def intern(s):
        if s not in index:
            if len(states) >= max_states:
                raise CapacityExceeded(f"more than {max_states} automaton states for k={k}")
            index[s] = len(states)
            states.append(s)
            todo.append(s)
        return index[s]

    todo: list = []
    initial = set()
    for right, h in square_successors((), LB, tm, LEFTMOST, k):
        if h is None:
            initial.add(intern((right, 0)))
        elif h in tm.finals:
            initial.add(intern((right, 1)))
    delta = {}
    while todo:
        seq, bit = todo.pop()
        i = index[(seq, bit)]
        for a in tm.alphabet:
            targets = set()
            for right, h in square_successors(seq, a, tm, INTERIOR, k):
                if h is None:
                    targets.add(intern((right, bit)))
                elif h in tm.finals and not bit:
                    targets.add(intern((right, 1)))
            if targets:
                delta[(i, a)] = frozenset(targets)
    r0, r1 = _right_region(tm, {seq for seq, _ in states}, k)
    finals = frozenset(i for i, (seq, bit) in enumerate(states)
                       if (bit and seq in r0) or (not bit and seq in r1))
    return ExtractedNfa(k, tm, states, frozenset(initial), finals, delta)


class TmAcceptor:
    """Wraps a machine so it can stand in for an automaton in equivalence_check."""

    def __init__(self, tm: TuringMachine, max_steps: float = 10_000):
        self.tm, self.max_steps = tm, max_steps

    def accepts(self, word) -> bool:
        return simulate(self.tm, word, self.max_steps).verdict is Verdict.ACCEPTED


@dataclass
class EquivalenceRow:
    word: tuple
    tm: Verdict
    nfa: bool

    @property
    def inconclusive(self) -> bool:
        return self.tm is Verdict.STEP_LIMIT

    @property
    def agree(self) -> Optional[bool]:
        if self.inconclusive:
            return None
        return (self.tm is Verdict.ACCEPTED) == self.nfa


@dataclass
class EquivalenceReport:
    rows: list

    @property
    def disagreements(self) -> list:
        return [r for r in self.rows if r.agree is False]

    @property
    def inconclusive(self) -> list:
        return [r for r in self.rows if r.inconclusive]

    @property
    def equivalent(self) -> bool:
        return not self.disagreements and not self.inconclusive

    def csv(self) -> str:
        out = ["input,tm,nfa,agree"]
        for r in self.rows:
            agree = "inconclusive" if r.agree is None else str(r.agree).lower()
            out.append(f"{''.join(r.word)},{r.tm.value},{'accept' if r.nfa else 'reject'},{agree}")
        return "\n".join(out) + "\n"

    def table(self) -> str:
        bad = self.disagreements + self.inconclusive
        lines = [f"{'input':<12} {'tm':<18} {'nfa':<7} agree"]
        for r in bad:
            lines.append(f"{''.join(r.word) or 'ε':<12} {r.tm.value:<18} {'accept' if r.nfa else 'reject':<7} "
                         f"{'?' if r.agree is None else r.agree}")
        verdict = "EQUIVALENT (desk scale)" if self.equivalent else \
            f"NOT EQUIVALENT: {len(self.disagreements)} disagreements, {len(self.inconclusive)} inconclusive"
        lines.append(f"{verdict} over {len(self.rows)} inputs")
        return "\n".join(lines) + "\n"


def equivalence_check(tm: TuringMachine, nfa, max_len: int, max_steps: float = 10_000) -> EquivalenceReport:
    """Compare ``tm`` and anything with an ``accepts`` method on every word up to ``max_len``."""
    rows = [EquivalenceRow(w, simulate(tm, w, max_steps).verdict, nfa.accepts(w))
            for w in all_words(tm.alphabet, max_len)]
    return EquivalenceReport(rows)


@dataclass
class WeightRow:
    word: tuple
    verdict: Verdict
    steps: int
    tape_length: int
    bound: float
    reason: str = ""

    @property
    def violation(self) -> bool:
        return self.verdict is Verdict.CONTRACT_VIOLATION

    @property
    def within_bound(self) -> bool:
        return self.steps <= self.bound


@dataclass
class WeightReport:
    weight: float
    rows: list

    @property
    def disabled(self) -> bool:
        return math.isinf(self.weight)

    @property
    def violations(self) -> list:
        return [r for r in self.rows if r.violation]

    @property
    def completed(self) -> list:
        return [r for r in self.rows if r.verdict.halted]

    @property
    def bound_failures(self) -> list:
        return [r for r in self.rows if not r.violation and not r.within_bound]

    def table(self) -> str:
        if self.disabled:
            return "weight mode disabled (w=inf)\n"
        lines = [f"{'input':<12} {'verdict':<18} {'steps':>6} {'len':>4} {'bound':>6}  note"]
        for r in self.rows:
            note = r.reason if r.violation else ("ok" if r.within_bound else "BOUND FAILED")
            lines.append(f"{''.join(r.word) or 'ε':<12} {r.verdict.value:<18} {r.steps:>6} "
                         f"{r.tape_length:>4} {r.bound:>6}  {note}")
        lines.append(f"w={self.weight}: {len(self.completed)} completed, {len(self.violations)} weight violations, "
                     f"{len(self.bound_failures)} bound failures")
        return "\n".join(lines) + "\n"


def weight_mode_check(tm: TuringMachine, w: float, inputs: Iterable, max_steps: float = 10_000) -> WeightReport:
    """Run every input with square weight ``w`` and test steps <= w * (tape length + 2).

    The tape length is the largest number of non-boundary symbols the
    stored tape held during the run.  Runs that exhaust a weight are
    reported as violations and are exempt from the bound.
    """
    if math.isinf(w):
        return WeightReport(w, [])
    rows = []
    for x in inputs:
        r = simulate(tm, x, max_steps, weight=w)
        ell = r.max_tape_length - 2
        rows.append(WeightRow(tm.word(x), r.verdict, r.steps, ell, w * (ell + 2), r.reason))
    return WeightReport(w, rows)
