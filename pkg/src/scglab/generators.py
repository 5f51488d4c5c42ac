"""Seeded random machines, grammars and cohort strings for property checks."""

from __future__ import annotations

import numpy as np

from .cohorts import LB, RB, Cohort, CohortString
from .rules import ADDCOHORT, DELETE, REMCOHORT, REPLACE, SELECT, ContextCondition, Grammar, Rule
from .tm import Transition, TuringMachine, all_words, simulate

TAGS = ("A", "B", "C")


def _rng(seed_or_rng):
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return np.random.default_rng(seed_or_rng)


def _pick(rng, items):
    return items[int(rng.integers(len(items)))]


def _random_transition(rng, q, x, states, omega, p_rb_write):
    if x == LB:
        write, moves = LB, (1, 1, 0)
    elif x == RB:
        write = _pick(rng, omega + (RB,))
        moves = (-1, 0) if write == RB else (-1, 0, 1)
    else:
        write = RB if rng.random() < p_rb_write else _pick(rng, omega)
        moves = (-1, 0) if write == RB else (-1, 0, 1)
    return Transition(q, x, write, _pick(rng, moves), _pick(rng, states))


def random_machine(seed, max_states: int = 4, max_symbols: int = 3, p_defined: float = 0.6,
                   p_rb_write: float = 0.15, probe_len: int = 4, probe_steps: int = 400,
                   max_tries: int = 10_000) -> TuringMachine:
    """A random deterministic machine that respects the tape contract.

    Candidates are drawn until one halts without contract violations on
    every input up to ``probe_len`` within ``probe_steps`` steps and is not
    trivial (some run takes at least four steps).  Deterministic per seed.
    """
    rng = _rng(seed)
    for _ in range(max_tries):
        nq = int(rng.integers(2, max_states + 1))
        ns = int(rng.integers(1, max_symbols + 1))
        states = tuple(f"q{i}" for i in range(nq))
        omega = TAGS[:ns]
        ts = []
        for q in states:
            for x in omega + (LB, RB):
                if (q, x) == ("q0", LB) or rng.random() < p_defined:
                    ts.append(_random_transition(rng, q, x, states, omega, p_rb_write))
        finals = frozenset(q for q in states if rng.random() < 0.5)
        tm = TuringMachine(states, omega, tuple(ts), "q0", finals)
        longest = 0
        for w in all_words(omega, probe_len):
            r = simulate(tm, w, probe_steps)
            if not r.verdict.halted:
                break
            longest = max(longest, r.steps)
        else:
            if longest >= 4:
                return tm
    raise RuntimeError("no acceptable random machine found")


def random_cohort_string(seed, tags=TAGS, min_len: int = 0, max_len: int = 5,
                         max_readings: int = 3, boundaries: bool = True) -> CohortString:
    rng = _rng(seed)
    n = int(rng.integers(min_len, max_len + 1))
    cohorts = []
    for _ in range(n):
        k = int(rng.integers(1, max_readings + 1))
        readings = {_random_reading(rng, tags) for _ in range(k)}
        cohorts.append(Cohort(frozenset(readings)))
    if boundaries:
        cohorts = [Cohort.of(LB)] + cohorts + [Cohort.of(RB)]
    return CohortString.from_cohorts(cohorts)


def _random_reading(rng, tags, max_size: int = 2):
    size = int(rng.integers(1, max_size + 1))
    return frozenset(rng.choice(list(tags), size=size, replace=False).tolist())


def _random_condition(rng, tags, max_offset):
    pattern_tags = tuple(tags) + (LB, RB)
    return ContextCondition(int(rng.integers(-max_offset, max_offset + 1)),
                            _random_reading(rng, pattern_tags, 1),
                            bool(rng.random() < 0.3))


def random_rule(rng, tags=TAGS, kinds=(REPLACE, ADDCOHORT, REMCOHORT, SELECT, DELETE),
                max_offset: int = 2, max_conditions: int = 2) -> Rule:
    kind = _pick(rng, kinds)
    conds = tuple(_random_condition(rng, tags, max_offset)
                  for _ in range(int(rng.integers(1, max_conditions + 1))))
    target = _random_reading(rng, tags, 1 if kind != ADDCOHORT else 2)
    new = _random_reading(rng, tags) if kind == REPLACE else None
    return Rule(kind, target, conds, new)


def random_grammar(seed, tags=TAGS, min_rules: int = 1, max_rules: int = 6, **kw) -> Grammar:
    rng = _rng(seed)
    n = int(rng.integers(min_rules, max_rules + 1))
    return Grammar.from_rules([random_rule(rng, tags, **kw) for _ in range(n)])


def random_terminating_grammar(seed, tags=TAGS, max_rules: int = 6) -> Grammar:
    """Grammars that always reach a fixpoint.

    SELECT, DELETE and REMCOHORT only shrink the string, and REPLACE rules
    only rewrite a single tag into a later tag of ``tags``, so every cohort
    absorbs a bounded number of rewrites.
    """
    rng = _rng(seed)
    rules = []
    for _ in range(int(rng.integers(2, max_rules + 1))):
        kind = _pick(rng, (REPLACE, SELECT, DELETE, REMCOHORT))
        conds = (_random_condition(rng, tags, 2),)
        if kind == REPLACE:
            i = int(rng.integers(len(tags) - 1))
            j = int(rng.integers(i + 1, len(tags)))
            rules.append(Rule(REPLACE, {tags[i]}, conds, {tags[j]}))
        else:
            rules.append(Rule(kind, _random_reading(rng, tags, 1), conds))
    return Grammar.from_rules(rules)


def random_looping_grammar(seed, tags=TAGS) -> Grammar:
    """A REPLACE cycle over two or more tags; diverges on any string carrying a cycle tag."""
    rng = _rng(seed)
    k = int(rng.integers(2, len(tags) + 1))
    cycle = list(rng.permutation(list(tags))[:k])
    rules = [Rule(REPLACE, {a}, (ContextCondition(0, frozenset({a})),), {b})
             for a, b in zip(cycle, cycle[1:] + cycle[:1])]
    return Grammar.from_rules(rules)
