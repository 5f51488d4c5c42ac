"""Hand-written machines used by the tests, demos and benchmarks."""

from .cohorts import LB, RB
from .tm import TuringMachine


def right_sweeper(accepting: bool = True) -> TuringMachine:
    """Leave LB, rewrite every A as B while moving right, halt at the first B or RB.

    One crossing per boundary; ``|x| + 1`` steps on inputs made of A's.
    """
    return TuringMachine.build(
        [("q0", LB, LB, 1, "q1"), ("q1", "A", "B", 1, "q1")],
        finals=["q1"] if accepting else [], alphabet=["A", "B"],
    )


def two_pass_sweeper() -> TuringMachine:
    """Swap A and B on a rightward pass, then walk back to LB.

    The return pass remembers the last symbol it crossed, so the machine
    accepts exactly the inputs that are empty or start with B.  Every
    boundary is crossed twice and a run takes ``2|x| + 2`` steps.
    """
    ts = [("q0", LB, LB, 1, "q1"),
          ("q1", "A", "B", 1, "q1"), ("q1", "B", "A", 1, "q1"),
          ("q1", RB, RB, -1, "qa")]
    for q in ("qa", "qb"):
        ts += [(q, "A", "A", -1, "qa"), (q, "B", "B", -1, "qb")]
    return TuringMachine.build(ts, finals=["qa"], alphabet=["A", "B"])


def copy_machine() -> TuringMachine:
    """Unary copy by shuttling: each A is marked X and answered by a C appended at the end.

    Accepts everything; ``AA`` becomes ``XXCC``.  Running time is quadratic
    and crossing sequences grow with the input, so no fixed k bounds
    them.  Uses RB extension with a left move and a stay-in-place
    transition on RB, both of which need normalization before compilation.
    """
    ts = [("q0", LB, LB, 1, "seek"),
          ("seek", "X", "X", 1, "seek"),
          ("seek", "A", "X", 1, "end"),
          ("seek", "C", "C", 0, "done"),
          ("seek", RB, RB, 0, "done"),
          ("end", "A", "A", 1, "end"),
          ("end", "C", "C", 1, "end"),
          ("end", RB, "C", -1, "back")]
    for a in ("A", "X", "C"):
        ts.append(("back", a, a, -1, "back"))
    ts.append(("back", LB, LB, 1, "seek"))
    return TuringMachine.build(ts, finals=["done"], alphabet=["A", "X", "C"])


shuttle_machine = copy_machine


def eraser() -> TuringMachine:
    """Walk to RB, then erase the tape right to left by writing RB over the last symbol.

    Ends on LB with an empty tape; the final stay-in-place on LB is split
    during normalization.
    """
    ts = [("q0", LB, LB, 1, "go"),
          ("go", "A", "A", 1, "go"), ("go", "B", "B", 1, "go"),
          ("go", RB, RB, -1, "cut"),
          ("cut", "A", RB, -1, "cut"), ("cut", "B", RB, -1, "cut"),
          ("cut", LB, LB, 0, "done")]
    return TuringMachine.build(ts, finals=["done"], alphabet=["A", "B"])


def figure_cs_machine() -> TuringMachine:
    """A machine whose run on ``WORDING`` visits states q0..q11 as in the classic picture.

    Right to D, back to W, then right again: the boundary between O and R
    (squares 2 and 3) is crossed in q3, q6 and q9.
    """
    path = [("q0", LB, 1), ("q1", "W", 1), ("q2", "O", 1), ("q3", "R", 1), ("q4", "D", -1),
            ("q5", "R", -1), ("q6", "O", -1), ("q7", "W", 1), ("q8", "O", 1), ("q9", "R", 1),
            ("q10", "D", 1), ("q11", "I", 1)]
    ts = [(q, a, a, d, f"q{i + 1}") for i, (q, a, d) in enumerate(path)]
    return TuringMachine.build(ts, finals=["q12"], alphabet=list("WORDING"))


def self_loop() -> TuringMachine:
    return TuringMachine.build([("q0", LB, LB, 0, "q0")], alphabet=["A"])


def rb_misuse() -> TuringMachine:
    """Writes RB over the first symbol, breaking the tape contract on inputs of length >= 2."""
    return TuringMachine.build([("q0", LB, LB, 1, "q1"), ("q1", "A", RB, -1, "q2")],
                               finals=["q2"], alphabet=["A"])


HAND_MACHINES = {
    "right_sweeper": right_sweeper,
    "two_pass_sweeper": two_pass_sweeper,
    "copy_machine": copy_machine,
    "eraser": eraser,
}
