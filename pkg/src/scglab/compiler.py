"""Compile one-tape Turing machines into nonmonotonic constraint grammars.

Every tape square is a singleton cohort.  The head position carries a
state marker ``Q.<state>`` in its cohort.  One machine transition becomes
three rule applications: mark the destination cohort with a transition
marker ``T.<state>.<symbol>``, rewrite the source cohort, then turn the
transition marker into the new state marker.  Overwriting the first RB
inserts a cohort and writing RB over the last symbol removes one.

Only three transition shapes compile directly; ``normalize_tm`` rewrites
the rest through fresh intermediate states.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .cohorts import LB, RB, Cohort, CohortString, FeatureAlphabet
from .engine import Bounds, DerivationOutcome, derive
from .errors import InvalidMachine
from .rules import Grammar, addcohort, cond, remcohort, replace
from .tm import Transition, TuringMachine, Verdict, simulate

INTERIOR = "interior"
EXTENSION = "extension"
RETRACTION = "retraction"


def transition_shape(t: Transition) -> Optional[str]:
    """Which compilable shape ``t`` has, or None.

    interior: moves left or right, never writes RB over a tape symbol and
    never overwrites RB (reading RB and keeping it while moving left is
    allowed); extension: ``(RB, A, 0)``; retraction: ``(A, RB, -1)``.
    """
    a, b, d = t.read, t.write, t.move
    if a == RB and b != RB:
        return EXTENSION if d == 0 else None
    if b == RB and a != RB:
        return RETRACTION if d == -1 else None
    if a == RB:
        return INTERIOR if d == -1 else None
    if a == LB and d == -1:
        return None
    return INTERIOR if d != 0 else None


def normalize_tm(tm: TuringMachine) -> TuringMachine:
    """An equivalent machine whose transitions all have a compilable shape.

    Same verdict and final tape on every input; runs get longer by one step
    per split transition fired.  Transitions that can never fire without
    breaking the tape contract raise ``InvalidMachine``.
    """
    if all(transition_shape(t) for t in tm.transitions):
        return tm
    states = list(tm.states)
    taken = set(states)
    omega = tuple(tm.alphabet)
    out = []

    def fresh(base):
        i = 0
        while f"{base}~{i}" in taken:
            i += 1
        name = f"{base}~{i}"
        taken.add(name)
        states.append(name)
        return name

    for t in tm.transitions:
        if transition_shape(t):
            out.append(t)
            continue
        q, a, b, d, r = t.src, t.read, t.write, t.move, t.dst
        if (a == LB and d == -1) or (b == RB and d == 1):
            raise InvalidMachine(f"transition always breaks the tape contract: {t}")
        p = fresh(q)
        if a == RB and b != RB:
            # overwrite RB in place, then make the move
            out += [Transition(q, a, b, 0, p), Transition(p, b, b, d, r)]
        elif b == RB and a != RB:
            # (A, RB, 0): retract, then step back onto the new RB
            out.append(Transition(q, a, RB, -1, p))
            out += [Transition(p, c, c, 1, r) for c in omega + (LB,)]
        else:
            # stay in place: step away and come back
            away = -1 if a == RB else 1
            out.append(Transition(q, a, b, away, p))
            back = omega + ((LB,) if away == -1 else (RB,))
            out += [Transition(p, c, c, -away, r) for c in back]
    return TuringMachine(tuple(states), omega, tuple(out), tm.start, tm.finals)


def state_marker(q: str) -> str:
    return f"Q.{q}"


def transition_marker(q: str, a: str) -> str:
    return f"T.{q}.{a}"


@dataclass(frozen=True)
class CompiledGrammar:
    grammar: Grammar
    tm: TuringMachine
    normalized_tm: TuringMachine
    provenance: tuple  # rule index -> (Transition, template step 1..3)
    state_markers: dict = field(compare=False)

    def provenance_text(self) -> str:
        return "".join(f"{i}\t{t}\t{step}\n" for i, (t, step) in enumerate(self.provenance))

    def without_rule(self, index: int) -> "CompiledGrammar":
        """Copy with one rule deleted, for mutation tests."""
        keep = [i for i in range(len(self.grammar.rules)) if i != index]
        g = Grammar(self.grammar.alphabet, tuple(self.grammar.rules[i] for i in keep))
        return CompiledGrammar(g, self.tm, self.normalized_tm,
                               tuple(self.provenance[i] for i in keep), self.state_markers)


def compile_tm(tm: TuringMachine) -> CompiledGrammar:
    """Emit the three-rule templates for every normalized transition.

    All step-2 rules come first, then step-1, then step-3 rules; inside each
    group rules follow transition order.  At most one marker pair exists at
    a time, so at most one template step is ever applicable and the
    grammar's first-rule strategy replays the machine deterministically.
    """
    ntm = normalize_tm(tm)
    omega = tuple(ntm.alphabet)
    every = omega + (LB, RB)
    groups = {1: [], 2: [], 3: []}

    for t in ntm.transitions:
        q, a, b, d, r = t.src, t.read, t.write, t.move, t.dst
        Q, R, T = state_marker(q), state_marker(r), transition_marker(q, a)
        shape = transition_shape(t)
        if shape == INTERIOR:
            for c in every:
                groups[1].append((replace({c}, {T, c}, cond(-d, {Q, a})), t))
            groups[2].append((replace({Q, a}, {b}, cond(d, {T})), t))
            for c in every:
                groups[3].append((replace({T, c}, {R, c}, cond(-d, {Q}, negated=True)), t))
        elif shape == EXTENSION:
            groups[1].append((addcohort({T, b}, cond(1, {Q, RB})), t))
            groups[2].append((replace({Q, RB}, {RB}, cond(-1, {T, b})), t))
            groups[3].append((replace({T, b}, {R, b}, cond(1, {Q, RB}, negated=True)), t))
        else:
            for c in omega + (LB,):
                groups[1].append((replace({c}, {T, c}, cond(1, {Q, a}), cond(2, {RB})), t))
            # the transition marker sits on the left neighbour, hence offset -1
            groups[2].append((remcohort({Q, a}, cond(-1, {T})), t))
            for c in omega + (LB,):
                groups[3].append((replace({T, c}, {R, c}, cond(1, {Q, a}, negated=True)), t))

    ordered = [(rule, t, step) for step in (2, 1, 3) for rule, t in groups[step]]
    markers = {q: state_marker(q) for q in ntm.states}
    tmarkers = {transition_marker(t.src, t.read) for t in ntm.transitions}
    names = list(every) + list(markers.values()) + sorted(tmarkers)
    if len(set(names)) != len(names):
        raise InvalidMachine("marker names collide with tape symbols or each other")
    alphabet = FeatureAlphabet(tuple(names))
    grammar = Grammar(alphabet, tuple(rule for rule, _, _ in ordered))
    provenance = tuple((t, step) for _, t, step in ordered)
    return CompiledGrammar(grammar, tm, ntm, provenance, markers)


def encode_input(x, tm: TuringMachine) -> CohortString:
    """``[{LB, Q.q0}] [{a} for a in x] [{RB}]``; the head starts on LB."""
    w = tm.word(x)
    cohorts = [Cohort.of([LB, state_marker(tm.start)])]
    cohorts += [Cohort.of([a]) for a in w]
    cohorts.append(Cohort.of([RB]))
    return CohortString.from_cohorts(cohorts)


def decode_tape(s: CohortString, alphabet: Iterable[str]) -> tuple[str, ...]:
    omega = set(alphabet)
    out = []
    for c in s:
        out.extend(sorted(tag for tag in c.tags if tag in omega))
    return tuple(out)


@dataclass
class CompiledRun:
    accepted: Optional[bool]  # None unless the derivation reached a fixpoint
    tape: tuple[str, ...]
    outcome: DerivationOutcome

    @property
    def verdict(self) -> str:
        if self.accepted is None:
            return self.outcome.status
        return "accepted" if self.accepted else "rejected"


def run_compiled(cg: CompiledGrammar, x, bounds: Bounds = Bounds(), want_trace: bool = False) -> CompiledRun:
    s0 = encode_input(x, cg.tm)
    out = derive(cg.grammar, s0, bounds, detect_loops=False, want_trace=want_trace)
    tape = decode_tape(out.final, cg.tm.alphabet)
    accepted = None
    if out.status == "fixpoint":
        finals = {state_marker(q) for q in cg.tm.finals}
        accepted = any(c.tags & finals for c in out.final)
    return CompiledRun(accepted, tape, out)


@dataclass
class DifferentialRow:
    word: tuple
    tm_verdict: Verdict
    tm_tape: tuple
    normalized_steps: Optional[int]
    scg_verdict: Optional[str]
    scg_tape: Optional[tuple]
    applications: Optional[int]
    status: str  # agree | mismatch | inconclusive
    note: str = ""


@dataclass
class DifferentialReport:
    rows: list

    @property
    def mismatches(self) -> list:
        return [r for r in self.rows if r.status == "mismatch"]

    @property
    def inconclusive(self) -> list:
        return [r for r in self.rows if r.status == "inconclusive"]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def csv(self) -> str:
        lines = ["input,tm,tm_tape,norm_steps,scg,scg_tape,applications,status"]
        for r in self.rows:
            lines.append(",".join([
                " ".join(r.word), r.tm_verdict.value, " ".join(r.tm_tape),
                "" if r.normalized_steps is None else str(r.normalized_steps),
                r.scg_verdict or "", " ".join(r.scg_tape or ()),
                "" if r.applications is None else str(r.applications), r.status]))
        return "\n".join(lines) + "\n"

    def table(self, only_problems: bool = False) -> str:
        lines = [f"{'input':<12} {'tm':<19} {'scg':<15} {'steps':>6} {'apps':>6}  status"]
        for r in self.rows:
            if only_problems and r.status == "agree":
                continue
            lines.append(f"{''.join(r.word) or 'ε':<12} {r.tm_verdict.value:<19} {r.scg_verdict or '-':<15} "
                         f"{'-' if r.normalized_steps is None else r.normalized_steps:>6} "
                         f"{'-' if r.applications is None else r.applications:>6}  {r.status} {r.note}".rstrip())
        lines.append(f"rows={len(self.rows)} mismatches={len(self.mismatches)} inconclusive={len(self.inconclusive)}")
        return "\n".join(lines) + "\n"


def differential_check(tm: TuringMachine, inputs: Iterable, max_steps: int = 10_000,
                       compiled: Optional[CompiledGrammar] = None) -> DifferentialReport:
    """Compare direct simulation with the compiled grammar on every input.

    A halting row agrees when verdict and final tape match and the grammar
    used exactly three rule applications per normalized machine step.
    Rows where the machine hits ``max_steps`` or breaks the tape contract
    are inconclusive; a grammar that halts on a capped row is a mismatch.
    """
    cg = compiled if compiled is not None else compile_tm(tm)
    ntm = cg.normalized_tm
    rows = []
    for x in inputs:
        w = tm.word(x)
        r = simulate(tm, w, max_steps)
        if r.verdict is Verdict.CONTRACT_VIOLATION:
            rows.append(DifferentialRow(w, r.verdict, r.final_tape, None, None, None, None,
                                        "inconclusive", r.reason))
            continue
        if r.verdict is Verdict.STEP_LIMIT:
            run = run_compiled(cg, w, Bounds(max_steps=3 * max_steps))
            status = "mismatch" if run.accepted is not None else "inconclusive"
            rows.append(DifferentialRow(w, r.verdict, r.final_tape, None, run.verdict, run.tape,
                                        run.outcome.stats.applications, status, "step cap"))
            continue
        rn = simulate(ntm, w, 2 * max_steps)
        run = run_compiled(cg, w, Bounds(max_steps=6 * max_steps + 3))
        apps = run.outcome.stats.applications
        problems = []
        if (rn.verdict, rn.final_tape) != (r.verdict, r.final_tape):
            problems.append("normalization changed the run")
        if run.accepted is None:
            problems.append(f"derivation ended in {run.outcome.status}")
        elif run.accepted != r.accepted:
            problems.append("verdict differs")
        if run.tape != r.final_tape:
            problems.append("tape differs")
        if apps != 3 * rn.steps:
            problems.append(f"{apps} applications for {rn.steps} steps")
        rows.append(DifferentialRow(w, r.verdict, r.final_tape, rn.steps, run.verdict, run.tape, apps,
                                    "mismatch" if problems else "agree", "; ".join(problems)))
    return DifferentialReport(rows)

