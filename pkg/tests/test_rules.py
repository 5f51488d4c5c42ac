import pytest
from hypothesis import given
from hypothesis import strategies as st

from scglab.cohorts import FeatureAlphabet
from scglab.errors import ParseError, UndeclaredFeature
from scglab.generators import random_grammar
from scglab.rules import (ADDCOHORT, REMCOHORT, REPLACE, Grammar, Rule, addcohort, cond, format_grammar,
                          parse_grammar, parse_rule, replace, select)


def test_parse_replace():
    r = parse_rule("REPLACE (Q.q A) (B) (1 T.q.A)")
    assert r.kind == REPLACE
    assert r.target == {"Q.q", "A"} and r.new == {"B"}
    assert r.conditions == (cond(1, "T.q.A"),)


def test_parse_negated_and_multiple_conditions():
    r = parse_rule("SELECT (N) (-1 DET) (2 NOT V ADJ)")
    assert r.conditions == (cond(-1, "DET"), cond(2, "V ADJ", negated=True))


def test_inscohort_is_an_alias():
    assert parse_rule("INSCOHORT (X) (1 RB)") == parse_rule("ADDCOHORT (X) (1 RB)")
    assert parse_rule("INSCOHORT (X) (1 RB)").kind == ADDCOHORT


def test_format_is_canonical():
    assert str(parse_rule("REMCOHORT  (A Q.q)(-1 T.q.A)")) == "REMCOHORT (A Q.q) (-1 T.q.A)"
    assert str(select("N", cond(2, "V", True))) == "SELECT (N) (2 NOT V)"
    assert str(replace("A", "B", cond(0, "A"))) == "REPLACE (A) (B) (0 A)"


@pytest.mark.parametrize("line", [
    "REPLACE (A) (0 A)",          # missing new reading
    "SELECT (A)",                 # no condition
    "FOO (A) (0 A)",
    "SELECT (A) (x A)",           # offset not a number
    "SELECT (A) (1)",             # condition without tags
    "SELECT () (1 A)",
    "SELECT (A) (1 A",
    "ADDCOHORT (X) (Y) (1 RB)",
])
def test_parse_errors(line):
    with pytest.raises(ParseError):
        parse_rule(line)


def test_grammar_file_with_features(data_dir):
    g = parse_grammar((data_dir / "toy.g").read_text())
    assert len(g.rules) == 3
    assert [r.index for r in g.rules] == [0, 1, 2]
    assert "ADJ" in g.alphabet


def test_grammar_rejects_undeclared_tags():
    with pytest.raises(UndeclaredFeature):
        parse_grammar("FEATURES A\nSELECT (B) (1 A)\n")


def test_features_line_must_come_first():
    with pytest.raises(ParseError):
        parse_grammar("SELECT (A) (1 A)\nFEATURES A\n")


def test_alphabet_inferred_without_header():
    g = parse_grammar("REPLACE (A) (B) (0 A)\n")
    assert set(g.alphabet.features) == {"LB", "RB", "A", "B"}


def test_rule_validation():
    with pytest.raises(ValueError):
        Rule(REPLACE, frozenset({"A"}), (cond(0, "A"),))
    with pytest.raises(ValueError):
        Rule(REMCOHORT, frozenset({"A"}), ())
    with pytest.raises(ValueError):
        Rule(REMCOHORT, frozenset({"A"}), (cond(0, "A"),), frozenset({"B"}))


def test_max_offset():
    g = Grammar.from_rules([addcohort("X", cond(1, "RB")), select("A", cond(-3, "B"))])
    assert g.max_offset == 3


@given(st.integers(0, 10_000))
def test_grammar_text_round_trip(seed):
    g = random_grammar(seed)
    back = parse_grammar(format_grammar(g))
    assert back.rules == g.rules
    assert back.alphabet == g.alphabet


def test_empty_grammar_formats():
    g = Grammar(FeatureAlphabet.of("A"), ())
    assert format_grammar(g) == "FEATURES LB RB A\n"
    assert parse_grammar(format_grammar(g)).rules == ()
