"""One-tape deterministic Turing machines with a boundary-marked tape.

The tape starts as ``LB x RB`` followed by infinitely many ``RB`` squares
and the head starts on the ``LB`` square.  The simulator enforces the tape
contract: ``LB`` is never overwritten or written, the head never moves left
of ``LB`` or past the first ``RB`` unless that ``RB`` was overwritten, and
``RB`` is only written over the last tape symbol.  The stored tape is
always ``LB w RB``: it grows when the first ``RB`` is overwritten and
shrinks when ``RB`` is written over the last symbol.

Machine file format::

    states: q0 q1
    alphabet: A B
    start: q0
    final: q1
    q0 LB -> q1 LB 1
    q1 A -> q1 B 1
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .cohorts import LB, RB
from .errors import InvalidMachine, ParseError

BOUNDARY_SYMBOLS = (LB, RB)


class Verdict(enum.Enum):
    ACCEPTED = "accepted"
    REJECTED = "rejected"
    STEP_LIMIT = "step_limit"
    CONTRACT_VIOLATION = "contract_violation"

    @property
    def halted(self) -> bool:
        return self in (Verdict.ACCEPTED, Verdict.REJECTED)


@dataclass(frozen=True)
class Transition:
    src: str
    read: str
    write: str
    move: int
    dst: str

    def __post_init__(self):
        if self.move not in (-1, 0, 1):
            raise InvalidMachine(f"move must be -1, 0 or 1: {self}")
        if (self.read == LB) != (self.write == LB):
            raise InvalidMachine(f"LB is read-only and cannot be written elsewhere: {self}")

    def __str__(self):
        return f"{self.src} {self.read} -> {self.dst} {self.write} {self.move}"


@dataclass(frozen=True)
class TuringMachine:
    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    transitions: tuple[Transition, ...]
    start: str
    finals: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(dict.fromkeys(self.states)))
        object.__setattr__(self, "alphabet", tuple(dict.fromkeys(self.alphabet)))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        object.__setattr__(self, "finals", frozenset(self.finals))
        if set(self.alphabet) & set(BOUNDARY_SYMBOLS):
            raise InvalidMachine("LB and RB cannot be tape alphabet symbols")
        qs = set(self.states)
        if self.start not in qs:
            raise InvalidMachine(f"start state {self.start!r} is not a state")
        if not self.finals <= qs:
            raise InvalidMachine(f"final states {sorted(self.finals - qs)} are not states")
        symbols = set(self.alphabet) | set(BOUNDARY_SYMBOLS)
        table = {}
        for t in self.transitions:
            if t.src not in qs or t.dst not in qs:
                raise InvalidMachine(f"unknown state in {t}")
            if t.read not in symbols or t.write not in symbols:
                raise InvalidMachine(f"unknown symbol in {t}")
            if (t.src, t.read) in table:
                raise InvalidMachine(f"two transitions for ({t.src}, {t.read})")
            table[(t.src, t.read)] = t
        object.__setattr__(self, "_table", table)

    @classmethod
    def build(cls, transitions: Iterable, start: str = "q0", finals: Iterable[str] = (),
              alphabet: Iterable[str] = (), states: Iterable[str] = ()) -> "TuringMachine":
        """Convenience constructor from ``(src, read, write, move, dst)`` tuples.

        States and tape symbols not given explicitly are collected from the
        transitions.
        """
        ts = tuple(t if isinstance(t, Transition) else Transition(*t) for t in transitions)
        qs = list(states) + [start] + [q for t in ts for q in (t.src, t.dst)] + list(finals)
        syms = list(alphabet) + [a for t in ts for a in (t.read, t.write) if a not in BOUNDARY_SYMBOLS]
        return cls(tuple(qs), tuple(syms), ts, start, frozenset(finals))

    def delta(self, state: str, symbol: str) -> Optional[Transition]:
        return self._table.get((state, symbol))

    @property
    def symbols(self) -> tuple[str, ...]:
        return self.alphabet + BOUNDARY_SYMBOLS

    def with_finals(self, finals: Iterable[str]) -> "TuringMachine":
        return TuringMachine(self.states, self.alphabet, self.transitions, self.start, frozenset(finals))

    def word(self, x) -> tuple[str, ...]:
        """Coerce an input to a tuple of tape symbols.

        Strings are split on whitespace when they contain any, otherwise
        into characters.
        """
        if isinstance(x, str):
            x = x.split() if any(ch.isspace() for ch in x) else list(x)
        w = tuple(x)
        bad = [a for a in w if a not in self.alphabet]
        if bad:
            raise ValueError(f"symbols {bad} are not in the tape alphabet")
        return w


@dataclass(frozen=True)
class TmConfiguration:
    state: str
    head: int
    tape: tuple[str, ...]


@dataclass
class CrossingRecord:
    """Per-boundary crossing sequences.

    Boundary ``b`` lies between squares ``b`` and ``b + 1``.  Each entry is
    ``(state, direction)`` with direction ``+1`` for a rightward crossing
    and ``-1`` for a leftward one; ``state`` is the state entered by the
    crossing move.
    """

    sequences: dict = field(default_factory=dict)

    def add(self, boundary: int, state: str, direction: int):
        self.sequences.setdefault(boundary, []).append((state, direction))

    def at(self, boundary: int) -> tuple:
        return tuple(self.sequences.get(boundary, ()))

    @property
    def max_length(self) -> int:
        return max((len(v) for v in self.sequences.values()), default=0)

    def alternates(self) -> bool:
        """Directions alternate on every boundary and start rightward."""
        for seq in self.sequences.values():
            for i, (_, d) in enumerate(seq):
                if d != (1 if i % 2 == 0 else -1):
                    return False
        return True

    def __eq__(self, other):
        if not isinstance(other, CrossingRecord):
            return NotImplemented
        return {b: list(v) for b, v in self.sequences.items() if v} == \
            {b: list(v) for b, v in other.sequences.items() if v}


@dataclass
class TmRunResult:
    verdict: Verdict
    final_tape: tuple[str, ...]
    steps: int
    state: str
    head: int
    tape: tuple[str, ...]
    crossings: CrossingRecord
    max_tape_length: int
    reason: str = ""
    trace: Optional[list] = None

    @property
    def accepted(self) -> bool:
        return self.verdict is Verdict.ACCEPTED

    @property
    def tape_string(self) -> str:
        sep = "" if all(len(a) == 1 for a in self.final_tape) else " "
        return sep.join(self.final_tape)


def simulate(tm: TuringMachine, word, max_steps: float = 10_000, weight: float = math.inf,
             record_trace: bool = False) -> TmRunResult:
    """Run ``tm`` on ``word`` until it halts, hits ``max_steps`` or breaks the contract.

    With a finite ``weight`` every square starts with that weight and every
    step decrements the weight of the square the head lands on (a ``move``
    of 0 lands on the same square).  Landing on a square of weight 0 is a
    contract violation, so a run makes at most ``weight`` times as many
    steps as there are squares.
    """
    w = tm.word(word)
    tape = [LB, *w, RB]
    head = 0
    state = tm.start
    steps = 0
    crossings = CrossingRecord()
    trace = [] if record_trace else None
    weights = {}
    max_len = len(tape)
    verdict = None
    reason = ""
    table = tm._table

    while True:
        if trace is not None:
            trace.append(TmConfiguration(state, head, tuple(tape)))
        sym = tape[head]
        t = table.get((state, sym))
        if t is None:
            verdict = Verdict.ACCEPTED if state in tm.finals else Verdict.REJECTED
            break
        if steps >= max_steps:
            verdict = Verdict.STEP_LIMIT
            break

        last = len(tape) - 1
        truncate = extend = False
        if t.write == RB and sym != RB:
            if head != last - 1:
                verdict, reason = Verdict.CONTRACT_VIOLATION, f"RB written between tape symbols at square {head}"
                break
            truncate = True
        elif sym == RB and t.write != RB:
            extend = True
        new_head = head + t.move
        new_last = head if truncate else last + 1 if extend else last
        if new_head < 0:
            verdict, reason = Verdict.CONTRACT_VIOLATION, "moved left of LB"
            break
        if new_head > new_last:
            verdict, reason = Verdict.CONTRACT_VIOLATION, f"moved past the first RB at square {head}"
            break
        if weight < math.inf:
            left = weights.get(new_head, weight)
            if left <= 0:
                verdict, reason = Verdict.CONTRACT_VIOLATION, f"weight of square {new_head} exhausted"
                break
            weights[new_head] = left - 1

        tape[head] = t.write
        if truncate:
            del tape[head + 1:]
        elif extend:
            tape.append(RB)
            max_len = max(max_len, len(tape))
        if t.move:
            crossings.add(min(head, new_head), t.dst, t.move)
        head = new_head
        state = t.dst
        steps += 1

    final = tuple(a for a in tape if a not in BOUNDARY_SYMBOLS)
    return TmRunResult(verdict, final, steps, state, head, tuple(tape), crossings, max_len, reason, trace)


def record_crossings(trace: Sequence[TmConfiguration]) -> CrossingRecord:
    """Rebuild crossing sequences from a configuration trace."""
    rec = CrossingRecord()
    for before, after in zip(trace, trace[1:]):
        d = after.head - before.head
        if d:
            rec.add(min(before.head, after.head), after.state, d)
    return rec


def all_words(alphabet: Sequence[str], max_len: int, min_len: int = 0):
    """Every word over ``alphabet`` of length ``min_len..max_len``, shortest first."""
    for n in range(min_len, max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


@dataclass
class CrossingBoundReport:
    """Empirical crossing-sequence lengths; says nothing about unseen inputs."""

    rows: list  # (word, verdict, k)

    @property
    def global_k(self) -> int:
        return max((k for _, _, k in self.rows), default=0)

    @property
    def all_halted(self) -> bool:
        return all(v.halted for _, v, _ in self.rows)

    def table(self) -> str:
        lines = ["# EMPIRICAL: maximum crossing-sequence length per input"]
        lines.append(f"{'input':<16} {'verdict':<20} k")
        for word, verdict, k in self.rows:
            lines.append(f"{''.join(word) or 'ε':<16} {verdict.value:<20} {k}")
        lines.append(f"global k = {self.global_k}")
        return "\n".join(lines) + "\n"


def max_crossing_bound(tm: TuringMachine, inputs: Iterable, max_steps: float = 10_000) -> CrossingBoundReport:
    rows = []
    for x in inputs:
        r = simulate(tm, x, max_steps)
        rows.append((tm.word(x), r.verdict, r.crossings.max_length))
    return CrossingBoundReport(rows)


def _header(line: str, key: str, lineno: int) -> list[str]:
    name, _, rest = line.partition(":")
    if name.strip() != key:
        raise ParseError(lineno, f"expected '{key}:'")
    return rest.split()


def parse_tm(text: str) -> TuringMachine:
    headers = {}
    transitions = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key = line.partition(":")[0].strip()
        if "->" not in line and key in ("states", "alphabet", "start", "final"):
            if key in headers:
                raise ParseError(lineno, f"duplicate '{key}:' line")
            headers[key] = _header(line, key, lineno)
            continue
        lhs, arrow, rhs = line.partition("->")
        left, right = lhs.split(), rhs.split()
        if not arrow or len(left) != 2 or len(right) != 3:
            raise ParseError(lineno, "expected 'q A -> r B d'")
        try:
            move = int(right[2])
        except ValueError:
            raise ParseError(lineno, f"bad move {right[2]!r}") from None
        try:
            transitions.append(Transition(left[0], left[1], right[1], move, right[0]))
        except InvalidMachine as exc:
            raise ParseError(lineno, str(exc)) from None
    for key in ("states", "alphabet", "start"):
        if key not in headers:
            raise ParseError(0, f"missing '{key}:' line")
    if len(headers["start"]) != 1:
        raise ParseError(0, "'start:' takes exactly one state")
    try:
        return TuringMachine(tuple(headers["states"]), tuple(headers["alphabet"]), tuple(transitions),
                             headers["start"][0], frozenset(headers.get("final", ())))
    except InvalidMachine as exc:
        raise ParseError(0, str(exc)) from None


def format_tm(tm: TuringMachine) -> str:
    lines = [
        "states: " + " ".join(tm.states),
        "alphabet: " + " ".join(tm.alphabet),
        f"start: {tm.start}",
        "final: " + " ".join(q for q in tm.states if q in tm.finals),
    ]
    lines.extend(str(t) for t in tm.transitions)
    return "\n".join(lines) + "\n"
