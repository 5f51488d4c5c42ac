"""Rules, context conditions and the grammar file format.

A grammar file is an optional ``FEATURES`` line followed by one rule per
line::

    FEATURES A B DET N
    REPLACE (A) (B) (1 RB)
    SELECT (N) (-1 DET)
    ADDCOHORT (X) (1 Q.q RB)
    REMCOHORT (X) (-1 NOT A) (0 X)

``INSCOHORT`` is read as ``ADDCOHORT``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable

from .cohorts import FeatureAlphabet, check_feature_name
from .errors import ParseError, UndeclaredFeature

REPLACE = "REPLACE"
ADDCOHORT = "ADDCOHORT"
REMCOHORT = "REMCOHORT"
SELECT = "SELECT"
DELETE = "DELETE"
KINDS = (REPLACE, ADDCOHORT, REMCOHORT, SELECT, DELETE)
ALIASES = {"INSCOHORT": ADDCOHORT}


@dataclass(frozen=True)
class ContextCondition:
    """``(offset tags)`` or ``(offset NOT tags)``, relative to the target."""

    offset: int
    pattern: frozenset
    negated: bool = False

    def __post_init__(self):
        object.__setattr__(self, "pattern", frozenset(self.pattern))
        if not self.pattern:
            raise ValueError("condition pattern must not be empty")

    def __str__(self):
        neg = "NOT " if self.negated else ""
        return f"({self.offset} {neg}{' '.join(sorted(self.pattern))})"


def cond(offset: int, tags: str | Iterable[str], negated: bool = False) -> ContextCondition:
    if isinstance(tags, str):
        tags = tags.split()
    return ContextCondition(offset, frozenset(tags), negated)


@dataclass(frozen=True)
class Rule:
    """One NM-SCG rule.

    ``target`` is the old pattern for REPLACE, the pattern to match for
    REMCOHORT/SELECT/DELETE, and the concrete inserted reading for
    ADDCOHORT.  ``new`` is only set for REPLACE.
    """

    kind: str
    target: frozenset
    conditions: tuple[ContextCondition, ...]
    new: frozenset | None = None
    index: int = field(default=-1, compare=False)

    def __post_init__(self):
        kind = ALIASES.get(self.kind, self.kind)
        if kind not in KINDS:
            raise ValueError(f"unknown rule kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "target", frozenset(self.target))
        object.__setattr__(self, "conditions", tuple(self.conditions))
        if not self.target:
            raise ValueError("rule target must not be empty")
        if not self.conditions:
            raise ValueError("a rule needs at least one condition")
        if (kind == REPLACE) != (self.new is not None):
            raise ValueError("REPLACE, and only REPLACE, takes a new reading")
        if self.new is not None:
            object.__setattr__(self, "new", frozenset(self.new))
            if not self.new:
                raise ValueError("REPLACE needs a non-empty new reading")

    @property
    def features(self) -> frozenset:
        out = set(self.target) | set(self.new or ())
        for c in self.conditions:
            out |= c.pattern
        return frozenset(out)

    def __str__(self):
        parts = [self.kind, "(" + " ".join(sorted(self.target)) + ")"]
        if self.new is not None:
            parts.append("(" + " ".join(sorted(self.new)) + ")")
        parts.extend(str(c) for c in self.conditions)
        return " ".join(parts)


def replace(old, new, *conditions) -> Rule:
    return Rule(REPLACE, _tags(old), conditions, new=_tags(new))


def addcohort(targ, *conditions) -> Rule:
    return Rule(ADDCOHORT, _tags(targ), conditions)


def remcohort(targ, *conditions) -> Rule:
    return Rule(REMCOHORT, _tags(targ), conditions)


def select(targ, *conditions) -> Rule:
    return Rule(SELECT, _tags(targ), conditions)


def delete(targ, *conditions) -> Rule:
    return Rule(DELETE, _tags(targ), conditions)


def _tags(x):
    return frozenset(x.split()) if isinstance(x, str) else frozenset(x)


@dataclass(frozen=True)
class Grammar:
    alphabet: FeatureAlphabet
    rules: tuple[Rule, ...]

    def __post_init__(self):
        rules = tuple(Rule(r.kind, r.target, r.conditions, r.new, i) for i, r in enumerate(self.rules))
        object.__setattr__(self, "rules", rules)
        for r in rules:
            for tag in r.features:
                if tag not in self.alphabet:
                    raise UndeclaredFeature(tag)

    @classmethod
    def from_rules(cls, rules: Iterable[Rule], alphabet: FeatureAlphabet | None = None) -> "Grammar":
        """Build a grammar; without an alphabet, declare every tag the rules use."""
        rules = tuple(rules)
        if alphabet is None:
            names = sorted(set().union(*(r.features for r in rules))) if rules else []
            alphabet = FeatureAlphabet(tuple(names))
        return cls(alphabet, rules)

    def __len__(self):
        return len(self.rules)

    @property
    def max_offset(self) -> int:
        return max((abs(c.offset) for r in self.rules for c in r.conditions), default=0)


_GROUP = re.compile(r"\s*\(([^()]*)\)")
_INT = re.compile(r"[+-]?\d+$")


def _parse_tags(body: str, lineno: int) -> frozenset:
    tags = body.split()
    if not tags:
        raise ParseError(lineno, "empty pattern")
    return frozenset(check_feature_name(t, lineno) for t in tags)


def _parse_condition(body: str, lineno: int) -> ContextCondition:
    words = body.split()
    if not words or not _INT.match(words[0]):
        raise ParseError(lineno, f"condition must start with an offset: ({body})")
    negated = len(words) > 1 and words[1] == "NOT"
    rest = words[2:] if negated else words[1:]
    if not rest:
        raise ParseError(lineno, f"condition without tags: ({body})")
    return ContextCondition(int(words[0]), frozenset(check_feature_name(t, lineno) for t in rest), negated)


def parse_rule(line: str, lineno: int = 0) -> Rule:
    keyword, _, rest = line.strip().partition(" ")
    kind = ALIASES.get(keyword, keyword)
    if kind not in KINDS:
        raise ParseError(lineno, f"unknown rule keyword {keyword!r}")
    groups = []
    pos = 0
    rest = rest.rstrip().rstrip(";")
    while pos < len(rest):
        m = _GROUP.match(rest, pos)
        if not m:
            raise ParseError(lineno, f"expected '(' at column {len(keyword) + 1 + pos}")
        groups.append(m.group(1))
        pos = m.end()
        while pos < len(rest) and rest[pos].isspace():
            pos += 1
    npat = 2 if kind == REPLACE else 1
    if len(groups) < npat + 1:
        raise ParseError(lineno, f"{kind} needs {npat} pattern(s) and at least one condition")
    target = _parse_tags(groups[0], lineno)
    new = _parse_tags(groups[1], lineno) if kind == REPLACE else None
    conditions = tuple(_parse_condition(g, lineno) for g in groups[npat:])
    return Rule(kind, target, conditions, new=new)


def parse_grammar(text: str) -> Grammar:
    alphabet = None
    rules = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.split()[0] == "FEATURES":
            if alphabet is not None or rules:
                raise ParseError(lineno, "FEATURES must be the first line")
            alphabet = FeatureAlphabet(tuple(check_feature_name(w, lineno) for w in line.split()[1:]))
            continue
        rule = parse_rule(line, lineno)
        if alphabet is not None:
            for tag in rule.features:
                if tag not in alphabet:
                    raise UndeclaredFeature(tag, lineno)
        rules.append(rule)
    return Grammar.from_rules(rules, alphabet)


def format_grammar(g: Grammar, header: bool = True) -> str:
    lines = []
    if header:
        lines.append("FEATURES " + " ".join(g.alphabet.features))
    lines.extend(str(r) for r in g.rules)
    return "".join(line + "\n" for line in lines)
