"""Sequential constraint grammars, one-tape Turing machines and the reduction between them."""

__version__ = "0.1.0"

from .cohorts import (LB, RB, Cohort, CohortString, FeatureAlphabet, apply_lexicon, parse_alphabet,
                      parse_cohort_stream, parse_lexicon, serialize_cohort_stream)
from .compiler import (CompiledGrammar, compile_tm, decode_tape, differential_check, encode_input,
                       normalize_tm, run_compiled)
from .curves import CurveReport, curve_bench
from .engine import Bounds, RunStats, check_application_bound, derive, find_application, step
from .errors import (BoundExceededError, CapacityExceeded, EmptyCohort, InvalidMachine, ParseError,
                     ScgLabError, UndeclaredFeature, UnknownToken)
from .finite_state import ExtractedNfa, equivalence_check, extract_nfa, replay_square, weight_mode_check
from .rules import (ContextCondition, Grammar, Rule, addcohort, cond, delete, format_grammar, parse_grammar,
                    remcohort, replace, select)
from .tm import (CrossingRecord, Transition, TuringMachine, Verdict, format_tm, max_crossing_bound, parse_tm,
                 simulate)
