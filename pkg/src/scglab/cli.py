"""``scglab`` command line.

Data goes to stdout and diagnostics to stderr.  Exit codes:

    0  fixpoint / accepted / check passed
    1  usage, file or parse error
    2  loop detected
    3  resource bound exceeded
    4  step limit reached
    5  machine rejected
    6  tape contract violation
    7  differential check found mismatches
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import __version__
from .cohorts import parse_cohort_stream, serialize_cohort_stream
from .compiler import CompiledGrammar, compile_tm, differential_check, encode_input, normalize_tm
from .curves import constant_words, curve_bench
from .engine import Bounds, derive
from .errors import ScgLabError
from .finite_state import equivalence_check, extract_nfa, weight_mode_check
from .generators import random_machine
from .rules import format_grammar, parse_grammar
from .tm import Verdict, all_words, format_tm, max_crossing_bound, parse_tm, simulate

EXIT_OK, EXIT_USAGE, EXIT_LOOP, EXIT_BOUND, EXIT_STEPS = 0, 1, 2, 3, 4
EXIT_REJECT, EXIT_CONTRACT, EXIT_MISMATCH = 5, 6, 7

STATUS_EXIT = {"fixpoint": EXIT_OK, "loop": EXIT_LOOP, "bound_exceeded": EXIT_BOUND, "step_limit": EXIT_STEPS}
VERDICT_EXIT = {Verdict.ACCEPTED: EXIT_OK, Verdict.REJECTED: EXIT_REJECT,
                Verdict.STEP_LIMIT: EXIT_STEPS, Verdict.CONTRACT_VIOLATION: EXIT_CONTRACT}
VERDICT_WORD = {Verdict.ACCEPTED: "ACCEPT", Verdict.REJECTED: "REJECT",
                Verdict.STEP_LIMIT: "STEP_LIMIT", Verdict.CONTRACT_VIOLATION: "CONTRACT_VIOLATION"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _amount(text: str) -> float:
    """Non-negative number; ``inf`` is allowed."""
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if x < 0 or math.isnan(x):
        raise argparse.ArgumentTypeError(f"must be >= 0: {text!r}")
    return x if math.isinf(x) else (int(x) if x == int(x) else x)


def _count(text: str) -> int:
    try:
        x = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if x < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text!r}")
    return x


def _sizes(text: str) -> list:
    try:
        return [int(s) for s in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list: {text!r}")


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}")


def _write(path, text: str):
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}")


def _load_tm(path):
    return parse_tm(_read(path))


def _show(word) -> str:
    if not word:
        return "ε"
    return "".join(word) if all(len(a) == 1 for a in word) else " ".join(word)


def cmd_run(args, out) -> int:
    g = parse_grammar(_read(args.grammar))
    s0 = parse_cohort_stream(_read(args.cohorts), g.alphabet, strict=not args.lenient)
    bounds = Bounds(args.fertility, args.volume, args.distance, args.max_steps)
    res = derive(g, s0, bounds, detect_loops=args.detect_loops, want_trace=args.trace)
    if args.trace:
        for i, e in enumerate(res.trace, 1):
            out.write(f"# trace {i}: rule {e.rule} [{g.rules[e.rule]}] at {e.site} -> {e.string}\n")
    out.write(serialize_cohort_stream(res.final))
    st = res.stats
    out.write(f"# status: {res.status}\n")
    if res.status == "loop":
        out.write(f"# loop: first seen after {res.result.first_seen} applications, period {res.result.period}\n")
    elif res.status == "bound_exceeded":
        out.write(f"# bound exceeded: {res.result.bound} at position {res.result.site}\n")
    out.write(f"# final: {res.final}\n")
    out.write(f"# applications: {st.applications}\n")
    out.write(f"# max gap insertions: {st.max_gap_insertions}\n")
    out.write(f"# max cohort ops: {st.max_cohort_ops}\n")
    out.write(f"# scan work: {st.scan_work}\n")
    if args.detect_loops:
        out.write(f"# distinct strings: {st.distinct_strings_seen}\n")
    return STATUS_EXIT[res.status]


def cmd_tm(args, out) -> int:
    tm = _load_tm(args.tm)
    r = simulate(tm, args.input, args.max_steps, weight=args.weight, record_trace=args.trace)
    if args.trace:
        for i, c in enumerate(r.trace):
            out.write(f"# trace {i}: {c.state} head={c.head} {' '.join(c.tape)}\n")
    line = f"{VERDICT_WORD[r.verdict]} {_show(r.final_tape)} steps={r.steps}"
    out.write(line + (f" ({r.reason})" if r.reason else "") + "\n")
    if args.crossings:
        out.write(f"# k={r.crossings.max_length}\n")
        for b in sorted(r.crossings.sequences):
            seq = " ".join(f"{q}{'>' if d > 0 else '<'}" for q, d in r.crossings.at(b))
            out.write(f"# boundary {b}: {seq}\n")
    return VERDICT_EXIT[r.verdict]


def cmd_compile(args, out) -> int:
    tm = _load_tm(args.tm)
    cg = compile_tm(tm)
    text = format_grammar(cg.grammar)
    if args.out:
        _write(args.out, text)
        _write(str(args.out) + ".provenance", cg.provenance_text())
    else:
        out.write(text)
    msg = f"rules: {len(cg.grammar.rules)}"
    (sys.stderr if not args.out else out).write(msg + "\n")
    return EXIT_OK


def _differential(tm, args, grammar=None):
    if grammar is not None:
        cg = CompiledGrammar(grammar, tm, normalize_tm(tm), (), {})
    else:
        cg = compile_tm(tm)
    if args.drop_rule is not None:
        if args.drop_rule >= len(cg.grammar.rules):
            raise UsageError(f"--drop-rule {args.drop_rule}: grammar has {len(cg.grammar.rules)} rules")
        cg = cg.without_rule(args.drop_rule)
    return differential_check(tm, all_words(tm.alphabet, args.max_len), args.max_steps, compiled=cg)


def cmd_check(args, out) -> int:
    if args.random is None and args.tm is None:
        raise UsageError("check needs a machine file or --random N")
    if args.random is not None and (args.tm is not None or args.grammar is not None):
        raise UsageError("--random cannot be combined with a machine file or --grammar")
    failed = False
    if args.random is not None:
        for i in range(args.random):
            tm = random_machine(args.seed * 100_003 + i)
            rep = _differential(tm, args)
            failed |= not rep.ok
            out.write(f"# machine {i}: rows={len(rep.rows)} mismatches={len(rep.mismatches)} "
                      f"inconclusive={len(rep.inconclusive)}\n")
            if not rep.ok or args.verbose:
                out.write("".join(f"#   {line}\n" for line in format_tm(tm).splitlines()))
                out.write(rep.csv() if args.csv else rep.table(only_problems=True))
    else:
        tm = _load_tm(args.tm)
        grammar = parse_grammar(_read(args.grammar)) if args.grammar else None
        rep = _differential(tm, args, grammar)
        failed = not rep.ok
        out.write(rep.csv() if args.csv else rep.table(only_problems=not args.verbose))
    return EXIT_MISMATCH if failed else EXIT_OK


def cmd_analyze(args, out) -> int:
    tm = _load_tm(args.tm)
    inputs = list(all_words(tm.alphabet, args.max_len))
    if args.crossings:
        out.write(max_crossing_bound(tm, inputs, args.max_steps).table())
        return EXIT_OK
    if args.weights is not None:
        rep = weight_mode_check(tm, args.weights, inputs, args.max_steps)
        out.write(rep.table())
        return EXIT_OK
    nfa = extract_nfa(tm, args.k, max_states=args.max_states)
    out.write(f"# {nfa.summary()}\n")
    if args.export:
        _write(args.export, nfa.export())
    rep = equivalence_check(tm, nfa, args.max_len, args.max_steps)
    out.write(rep.csv() if args.csv else rep.table())
    return EXIT_OK if not rep.disagreements else EXIT_MISMATCH


def cmd_bench(args, out) -> int:
    if len(set(args.sizes)) < 2:
        raise UsageError("--sizes needs at least two distinct sizes")
    tm = _load_tm(args.subject)
    subject = compile_tm(tm) if args.compiled else tm
    gen = constant_words(args.symbol) if args.symbol else None
    if args.symbol and args.symbol not in tm.alphabet:
        raise UsageError(f"--symbol {args.symbol!r} is not in the tape alphabet")
    rep = curve_bench(subject, gen, args.sizes, args.reps, args.seed, args.epsilon)
    if args.csv:
        out.write(rep.csv())
        sys.stderr.write(f"verdict: {rep.verdict} (EMPIRICAL)\n")
    else:
        out.write(rep.table())
    return EXIT_OK


def cmd_encode(args, out) -> int:
    tm = _load_tm(args.tm)
    out.write(serialize_cohort_stream(encode_input(args.input, tm)))
    return EXIT_OK


def _bounds_flags(p):
    p.add_argument("-f", "--fertility", type=_amount, default=math.inf, help="insertions per original gap")
    p.add_argument("-v", "--volume", type=_amount, default=math.inf, help="operations per cohort (>= 1)")
    p.add_argument("-m", "--distance", type=_amount, default=math.inf, help="max jump between targets")
    p.add_argument("--max-steps", type=_amount, default=100_000)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="scglab", description="Sequential constraint grammars and one-tape Turing machines.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="derive a cohort stream with a grammar")
    p.add_argument("grammar")
    p.add_argument("cohorts")
    _bounds_flags(p)
    p.add_argument("--detect-loops", action="store_true")
    p.add_argument("--trace", action="store_true")
    p.add_argument("--lenient", action="store_true", help="drop undeclared tags instead of failing")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("tm", help="simulate a machine on one input")
    p.add_argument("tm")
    p.add_argument("--input", default="")
    p.add_argument("--max-steps", type=_amount, default=10_000)
    p.add_argument("-w", "--weight", type=_amount, default=math.inf)
    p.add_argument("--trace", action="store_true")
    p.add_argument("--crossings", action="store_true")
    p.set_defaults(func=cmd_tm)

    p = sub.add_parser("compile", help="compile a machine into a grammar")
    p.add_argument("tm")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("check", help="differential check of a machine against its compiled grammar")
    p.add_argument("tm", nargs="?")
    p.add_argument("--max-len", type=_count, default=4)
    p.add_argument("--max-steps", type=_count, default=10_000)
    p.add_argument("--grammar", help="use this grammar instead of compiling")
    p.add_argument("--drop-rule", type=_count, help="delete one rule before checking")
    p.add_argument("--random", type=_count, metavar="N", help="check N seeded random machines")
    p.add_argument("--seed", type=_count, default=0)
    p.add_argument("--csv", action="store_true")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("analyze", help="crossing sequences, NFA extraction or weight checks")
    p.add_argument("tm")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--crossings", action="store_true")
    mode.add_argument("--k", type=_count)
    mode.add_argument("--weights", type=_amount, metavar="W")
    p.add_argument("--max-len", type=_count, default=5)
    p.add_argument("--max-steps", type=_count, default=10_000)
    p.add_argument("--max-states", type=_count, default=50_000)
    p.add_argument("--export", help="write the automaton in line format")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("bench", help="running-time curve")
    p.add_argument("subject", help="machine file")
    p.add_argument("--sizes", type=_sizes, default=[8, 16, 32, 64, 128, 256])
    p.add_argument("--reps", type=_count, default=1)
    p.add_argument("--seed", type=_count, default=0)
    p.add_argument("--epsilon", type=_amount, default=0.05)
    p.add_argument("--symbol", help="use constant inputs of this symbol instead of random words")
    p.add_argument("--compiled", action="store_true", help="benchmark the compiled grammar")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("encode", help="print the cohort stream for a machine input")
    p.add_argument("tm")
    p.add_argument("--input", default="")
    p.set_defaults(func=cmd_encode)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (UsageError, ScgLabError, ValueError) as exc:
        sys.stderr.write(f"scglab {args.command}: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
