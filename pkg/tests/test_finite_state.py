import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scglab.cohorts import LB, RB
from scglab.errors import CapacityExceeded
from scglab.finite_state import (INTERIOR, LEFTMOST, RIGHTMOST, TmAcceptor, equivalence_check, extract_nfa,
                                 replay_square, square_successors, weight_mode_check)
from scglab.generators import random_machine
from scglab.machines import copy_machine, eraser, figure_cs_machine, right_sweeper, two_pass_sweeper
from scglab.tm import TuringMachine, Verdict, all_words, max_crossing_bound, simulate

F, B = 1, -1


def test_replay_one_visit():
    sw = right_sweeper()
    assert replay_square([("q1", F)], [("q1", F)], "A", sw, INTERIOR)
    assert not replay_square([("q1", F)], [("q0", F)], "A", sw, INTERIOR)


def test_replay_unvisited_square():
    assert replay_square([], [], "A", right_sweeper(), INTERIOR)
    assert not replay_square([], [], "A", right_sweeper(), INTERIOR, halting=True)
    assert not replay_square([], [("q1", F)], "A", right_sweeper(), INTERIOR)


def test_replay_leftmost_and_halting_square():
    sw = right_sweeper()
    assert replay_square([], [("q1", F)], LB, sw, LEFTMOST)
    assert not replay_square([("q0", F)], [("q1", F)], LB, sw, LEFTMOST)
    # the sweeper halts on the first RB square
    assert replay_square([("q1", F)], [], RB, sw, RIGHTMOST, halting=True)
    assert not replay_square([("q1", F)], [], RB, sw, RIGHTMOST, halting=False)


def test_replay_rejects_malformed_sequences():
    assert not replay_square([("q1", B)], [], "A", right_sweeper(), INTERIOR)


def test_replay_of_the_classic_picture():
    tm = figure_cs_machine()
    # square 3 holds R: entered in q3, left rightwards in q4, ...
    left = (("q3", F), ("q6", B), ("q9", F))
    right = (("q4", F), ("q5", B), ("q10", F))
    assert replay_square(left, right, "R", tm, INTERIOR)
    assert not replay_square(left, right, "D", tm, INTERIOR)


def test_replay_rejects_moving_right_off_rb():
    tm = TuringMachine.build([("q0", LB, LB, 1, "q1"), ("q1", RB, RB, 1, "q1")], alphabet=["A"])
    assert not replay_square([("q1", F)], [("q1", F)], RB, tm, RIGHTMOST)


def _squares(r, w):
    tape = (LB,) + tuple(w) + (RB,)
    last = max([r.head] + [b + 1 for b in r.crossings.sequences])
    for sq in range(last + 1):
        kind = LEFTMOST if sq == 0 else INTERIOR if sq <= len(w) else RIGHTMOST
        yield sq, (tape[sq] if sq < len(tape) else RB), kind


@settings(max_examples=200)
@given(st.integers(0, 400), st.data())
def test_recorded_runs_replay_consistently(seed, data):
    tm = random_machine(seed)
    w = data.draw(st.lists(st.sampled_from(tm.alphabet), max_size=6))
    r = simulate(tm, w)
    if not r.verdict.halted:
        return
    for sq, symbol, kind in _squares(r, w):
        left = r.crossings.at(sq - 1) if sq else ()
        right = r.crossings.at(sq)
        assert replay_square(left, right, symbol, tm, kind, halting=(sq == r.head))
        succ = set(square_successors(left, symbol, tm, kind, max(len(right), 1)))
        assert (right, r.state if sq == r.head else None) in succ


@settings(max_examples=100)
@given(st.integers(0, 400), st.integers(0, 3))
def test_successors_agree_with_replay(seed, k):
    tm = random_machine(seed)
    for a in tm.alphabet:
        for q in tm.states:
            left = ((q, F),)
            for right, h in square_successors(left, a, tm, INTERIOR, k):
                assert len(right) <= k
                assert replay_square(left, right, a, tm, INTERIOR, halting=h is not None)


def test_extract_sweeper():
    tm = right_sweeper()
    nfa = extract_nfa(tm, 1)
    assert nfa.state_count <= nfa.ceiling
    assert all(len(seq) <= 1 for seq, _ in nfa.states)
    for w in all_words("AB", 6):
        assert nfa.accepts(w) == simulate(tm, w).accepted


def test_extract_k0_only_sees_square_zero():
    tm = right_sweeper()
    nfa = extract_nfa(tm, 0)
    assert not any(nfa.accepts(w) for w in all_words("AB", 3))
    halts_at_lb = TuringMachine.build([], finals=["q0"], alphabet=["A"])
    nfa = extract_nfa(halts_at_lb, 0)
    assert all(nfa.accepts(w) for w in all_words("A", 4))
    assert {seq for seq, _ in nfa.states} == {()}


def test_extract_two_pass():
    tm = two_pass_sweeper()
    nfa = extract_nfa(tm, 2)
    rep = equivalence_check(tm, nfa, 6)
    assert not rep.disagreements and not rep.inconclusive
    assert nfa.state_count <= nfa.ceiling


def test_k_too_small_loses_acceptance():
    tm = two_pass_sweeper()
    nfa = extract_nfa(tm, 1)
    assert not any(nfa.accepts(w) for w in all_words("AB", 3))


def test_extract_capacity():
    with pytest.raises(CapacityExceeded):
        extract_nfa(copy_machine(), 6, max_states=5)


def test_eraser_extracts():
    tm = eraser()
    k = max_crossing_bound(tm, all_words("AB", 5)).global_k
    assert not equivalence_check(tm, extract_nfa(tm, k), 6).disagreements


@pytest.mark.parametrize("seed", range(12))
def test_extract_random_machines(seed):
    tm = random_machine(seed)
    k = max_crossing_bound(tm, all_words(tm.alphabet, 5)).global_k
    nfa = extract_nfa(tm, k)
    assert nfa.state_count <= nfa.ceiling
    assert not equivalence_check(tm, nfa, 5).disagreements


def test_mutant_disagrees():
    tm = right_sweeper()
    nfa = extract_nfa(tm, 1)
    assert len(nfa.finals) >= 1
    for f in nfa.finals:
        assert equivalence_check(tm, nfa.without_final(f), 5).disagreements


def test_equivalence_empty_length():
    rep = equivalence_check(right_sweeper(), extract_nfa(right_sweeper(), 1), 0)
    assert [r.word for r in rep.rows] == [()]


def test_machine_against_itself():
    for tm in (right_sweeper(), two_pass_sweeper(), copy_machine()):
        assert not equivalence_check(tm, TmAcceptor(tm), 4).disagreements


def test_equivalence_csv_and_table():
    rep = equivalence_check(right_sweeper(), extract_nfa(right_sweeper(), 1), 1)
    assert rep.csv().splitlines() == ["input,tm,nfa,agree", ",accepted,accept,true",
                                      "A,accepted,accept,true", "B,accepted,accept,true"]
    assert "EQUIVALENT (desk scale)" in rep.table()


def test_step_capped_rows_are_inconclusive():
    tm = TuringMachine.build([("q0", LB, LB, 0, "q0")], alphabet=["A"])
    rep = equivalence_check(tm, extract_nfa(tm, 1), 1, max_steps=20)
    assert len(rep.inconclusive) == 2 and not rep.disagreements and not rep.equivalent


def test_export_format():
    text = extract_nfa(right_sweeper(), 1).export()
    assert text.splitlines() == ["initial: [q1>]/0", "final: [q1>]/0 []/1", "[q1>]/0 -A-> [q1>]/0",
                                 "[q1>]/0 -B-> []/1", "[]/1 -A-> []/1", "[]/1 -B-> []/1"]


def test_weight_mode():
    rep = weight_mode_check(right_sweeper(), 1, all_words("AB", 5))
    assert not rep.violations and len(rep.completed) == len(rep.rows) == 63
    assert not rep.bound_failures
    rep = weight_mode_check(two_pass_sweeper(), 1, all_words("AB", 3))
    assert len(rep.violations) == len(rep.rows) - 1  # the empty input makes no return trip over a symbol
    rep = weight_mode_check(two_pass_sweeper(), 2, all_words("AB", 5))
    assert not rep.violations and not rep.bound_failures
    assert weight_mode_check(right_sweeper(), math.inf, ["A"]).disabled
    assert "disabled" in weight_mode_check(right_sweeper(), math.inf, ["A"]).table()


@settings(max_examples=100)
@given(st.integers(0, 400), st.integers(1, 3))
def test_weight_bound_holds_on_random_machines(seed, w):
    tm = random_machine(seed)
    rep = weight_mode_check(tm, w, all_words(tm.alphabet, 3), max_steps=5_000)
    assert not rep.bound_failures
    assert all(r.verdict is not Verdict.STEP_LIMIT for r in rep.rows)
