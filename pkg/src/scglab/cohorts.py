"""Features, readings, cohorts and cohort strings, plus their text formats.

A reading is a non-empty frozenset of feature names and a cohort is a
non-empty set of readings.  Sentences are sequences of cohorts.  Every
object here is immutable; derivations build new strings instead of
editing old ones.

Cohort-stream format: one cohort per line, readings separated by ``|``,
tags separated by spaces.  Blank lines are ignored and ``#`` starts a
comment line::

    # a two-reading cohort between the boundaries
    LB
    A B | A C
    RB
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import EmptyCohort, ParseError, UndeclaredFeature, UnknownToken

LB = "LB"
RB = "RB"
BOUNDARIES = (LB, RB)

_RESERVED = set('()|"')

Reading = frozenset  # frozenset[str]


def check_feature_name(name: str, line: int = 0) -> str:
    if not name or any(ch.isspace() or ch in _RESERVED for ch in name):
        raise ParseError(line, f"invalid feature name {name!r}")
    return name


def reading(tags: Iterable[str] | str) -> frozenset:
    """Build a reading from an iterable of tags or a space separated string."""
    if isinstance(tags, str):
        tags = tags.split()
    r = frozenset(tags)
    if not r:
        raise EmptyCohort(0, "empty reading")
    return r


@dataclass(frozen=True)
class FeatureAlphabet:
    """The declared features; LB and RB are always members."""

    features: tuple[str, ...]

    def __post_init__(self):
        names = list(dict.fromkeys(BOUNDARIES + tuple(self.features)))
        for name in names:
            check_feature_name(name)
        object.__setattr__(self, "features", tuple(names))
        object.__setattr__(self, "_members", frozenset(names))

    @classmethod
    def of(cls, names: Iterable[str] | str = ()) -> "FeatureAlphabet":
        if isinstance(names, str):
            names = names.split()
        return cls(tuple(names))

    @property
    def k(self) -> int:
        return len(self.features)

    def __contains__(self, name) -> bool:
        return name in self._members

    def __iter__(self):
        return iter(self.features)

    def __len__(self) -> int:
        return len(self.features)

    def union(self, names: Iterable[str]) -> "FeatureAlphabet":
        return FeatureAlphabet(self.features + tuple(names))


@dataclass(frozen=True)
class Cohort:
    """A non-empty set of readings.

    ``id`` identifies the cohort inside one derivation (volume accounting)
    and takes no part in equality or hashing.
    """

    readings: frozenset
    id: int = field(default=-1, compare=False)

    def __post_init__(self):
        rs = frozenset(frozenset(r) for r in self.readings)
        if not rs or any(not r for r in rs):
            raise EmptyCohort(0)
        object.__setattr__(self, "readings", rs)

    @classmethod
    def of(cls, *readings, id: int = -1) -> "Cohort":
        """``Cohort.of("A B", "A C")`` is the cohort ``A B | A C``."""
        return cls(frozenset(reading(r) for r in readings), id)

    def contains(self, pattern: frozenset) -> bool:
        """True when some reading carries every tag of ``pattern``."""
        return any(pattern <= r for r in self.readings)

    @property
    def tags(self) -> frozenset:
        return frozenset().union(*self.readings)

    def sorted_readings(self) -> list[tuple[str, ...]]:
        return sorted(tuple(sorted(r)) for r in self.readings)

    def with_id(self, new_id: int) -> "Cohort":
        return Cohort(self.readings, new_id)

    def __str__(self):
        return " | ".join(" ".join(r) for r in self.sorted_readings())


@dataclass(frozen=True)
class Original:
    index: int


@dataclass(frozen=True)
class Inserted:
    gap: int


@dataclass(frozen=True)
class CohortString:
    """A sequence of cohorts with per-cohort origin bookkeeping.

    ``origins[i]`` is ``Original(j)`` for the j-th cohort of the input
    sentence or ``Inserted(g)`` for a cohort inserted into original gap g.
    Equality looks at cohort contents only.
    """

    cohorts: tuple[Cohort, ...] = ()
    origins: tuple = field(default=None, compare=False)
    original_length: int = field(default=None, compare=False)

    def __post_init__(self):
        cohorts = tuple(self.cohorts)
        object.__setattr__(self, "cohorts", cohorts)
        if self.origins is None:
            object.__setattr__(self, "origins", tuple(Original(i) for i in range(len(cohorts))))
        elif len(self.origins) != len(cohorts):
            raise ValueError("origins and cohorts differ in length")
        if self.original_length is None:
            n = sum(isinstance(o, Original) for o in self.origins)
            object.__setattr__(self, "original_length", n)

    @classmethod
    def from_cohorts(cls, cohorts: Iterable[Cohort]) -> "CohortString":
        """Fresh input string: ids 0..n-1 and every origin Original."""
        return cls(tuple(c.with_id(i) for i, c in enumerate(cohorts)))

    @classmethod
    def of(cls, *lines: str) -> "CohortString":
        """``CohortString.of("LB", "A B | A C", "RB")``."""
        return cls.from_cohorts(Cohort.of(*(part for part in line.split("|"))) for line in lines)

    def __len__(self):
        return len(self.cohorts)

    def __getitem__(self, i):
        return self.cohorts[i]

    def __iter__(self):
        return iter(self.cohorts)

    def key(self) -> str:
        """Canonical text, used for loop detection and golden output."""
        return serialize_cohort_stream(self)

    def __str__(self):
        return "[" + ", ".join("{" + str(c) + "}" for c in self.cohorts) + "]"


def serialize_cohort_stream(s: CohortString | Iterable[Cohort]) -> str:
    lines = [str(c) for c in s]
    return "".join(line + "\n" for line in lines)


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def _parse_cohort(body: str, lineno: int, alphabet, strict: bool) -> Cohort:
    readings = []
    for part in body.split("|"):
        tags = part.split()
        if not tags:
            raise EmptyCohort(lineno, "empty reading")
        kept = []
        for tag in tags:
            check_feature_name(tag, lineno)
            if alphabet is not None and tag not in alphabet:
                if strict:
                    raise UndeclaredFeature(tag, lineno)
                continue
            kept.append(tag)
        if kept:
            readings.append(frozenset(kept))
    if not readings:
        raise EmptyCohort(lineno, "no declared tags left in cohort")
    return Cohort(frozenset(readings))


def parse_cohort_stream(text: str, alphabet: FeatureAlphabet | None = None,
                        strict: bool = True) -> CohortString:
    """Parse the cohort-stream format.

    With ``alphabet=None`` any well-formed tag is accepted.  Otherwise an
    undeclared tag raises ``UndeclaredFeature``, or is silently dropped
    when ``strict`` is false.
    """
    cohorts = [_parse_cohort(line, lineno, alphabet, strict) for lineno, line in _content_lines(text)]
    return CohortString.from_cohorts(cohorts)


def parse_alphabet(text: str) -> FeatureAlphabet:
    """``FEATURES A B C`` (names may continue on following lines)."""
    names = []
    seen_header = False
    for lineno, line in _content_lines(text):
        words = line.split()
        if not seen_header:
            if words[0] != "FEATURES":
                raise ParseError(lineno, "alphabet file must start with FEATURES")
            seen_header = True
            words = words[1:]
        names.extend(check_feature_name(w, lineno) for w in words)
    if not seen_header:
        raise ParseError(0, "missing FEATURES line")
    return FeatureAlphabet(tuple(names))


LexiconTable = Mapping  # token -> Cohort


def parse_lexicon(text: str, alphabet: FeatureAlphabet | None = None,
                  strict: bool = True) -> dict[str, Cohort]:
    """Lines of the form ``token := tag ... | tag ...``."""
    table = {}
    for lineno, line in _content_lines(text):
        token, sep, body = line.partition(":=")
        token = token.strip()
        if not sep or not token or len(token.split()) != 1:
            raise ParseError(lineno, "expected 'token := readings'")
        if token in table:
            raise ParseError(lineno, f"duplicate lexicon entry {token!r}")
        table[token] = _parse_cohort(body, lineno, alphabet, strict)
    return table


def apply_lexicon(tokens: Sequence[str], lex: LexiconTable) -> CohortString:
    cohorts = []
    for i, token in enumerate(tokens):
        try:
            cohorts.append(lex[token])
        except KeyError:
            raise UnknownToken(token, i) from None
    return CohortString.from_cohorts(cohorts)
