"""Sequential derivation for nonmonotonic constraint grammars.

One derivation step picks the first rule in grammar order that has an
applicable site and applies it at its leftmost site.  Iterating the step
until nothing applies gives the fixpoint that the grammar relates to its
input.  Resource counters (fertility per original gap, volume per cohort,
distance between consecutive sites) are kept in ``RunStats`` and can be
enforced through ``Bounds``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .cohorts import Cohort, CohortString, Inserted, Original
from .errors import BoundExceededError
from .rules import ADDCOHORT, DELETE, REMCOHORT, REPLACE, SELECT, ContextCondition, Grammar

INF = math.inf


@dataclass(frozen=True)
class Bounds:
    """Resource limits; ``math.inf`` disables a limit."""

    fertility: float = INF
    volume: float = INF
    distance: float = INF
    max_steps: float = INF

    def __post_init__(self):
        for name in ("fertility", "volume", "distance", "max_steps"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.volume < 1:
            raise ValueError("volume must be >= 1")


@dataclass
class RunStats:
    applications: int = 0
    per_rule: Counter = field(default_factory=Counter)
    per_gap_insertions: Counter = field(default_factory=Counter)
    per_cohort_ops: Counter = field(default_factory=Counter)
    # per-cohort count of neighbouring rewrites inside the grammar's context radius
    context_updates: Counter = field(default_factory=Counter)
    last_target_position: Optional[int] = None
    scan_work: int = 0
    distinct_strings_seen: int = 0
    max_length: int = 0
    next_id: Optional[int] = None

    @property
    def max_cohort_ops(self) -> int:
        return max(self.per_cohort_ops.values(), default=0)

    @property
    def max_gap_insertions(self) -> int:
        return max(self.per_gap_insertions.values(), default=0)


@dataclass(frozen=True)
class TraceEntry:
    rule: int
    site: int
    string: CohortString


@dataclass(frozen=True)
class Fixpoint:
    final: CohortString
    status = "fixpoint"


@dataclass(frozen=True)
class Loop:
    final: CohortString
    first_seen: int
    period: int
    status = "loop"


@dataclass(frozen=True)
class BoundExceeded:
    final: CohortString
    bound: str
    site: int
    status = "bound_exceeded"


@dataclass(frozen=True)
class StepLimit:
    final: CohortString
    status = "step_limit"


@dataclass
class DerivationOutcome:
    result: object
    stats: RunStats
    trace: Optional[list] = None

    @property
    def status(self) -> str:
        return self.result.status

    @property
    def final(self) -> CohortString:
        return self.result.final


def condition_holds(s: CohortString, target: int, c: ContextCondition) -> bool:
    """Evaluate one context condition for the cohort at ``target``.

    An absent location contains nothing: positive tests fail there and
    negated tests succeed.
    """
    p = target + c.offset
    if 0 <= p < len(s):
        return s[p].contains(c.pattern) != c.negated
    return c.negated


def _cohort_tags(c: Cohort) -> frozenset:
    tags = c.__dict__.get("_tags")
    if tags is None:
        tags = c.tags
        c.__dict__["_tags"] = tags
    return tags


class _Matcher:
    """Per-grammar lookup tables.

    Every rule is keyed on one feature that must be present somewhere in
    the string for the rule to apply; the key is the feature that occurs in
    the fewest rules, which picks out state markers in compiled grammars.
    """

    def __init__(self, g: Grammar):
        self.rules = g.rules
        self.radius = g.max_offset
        freq = Counter(tag for r in g.rules for tag in r.features)
        self.anchors = []
        self.keyed = {}
        self.unkeyed = []
        self.static_ok = []
        for r in g.rules:
            anchors = []
            ok = True
            if r.kind != ADDCOHORT:
                anchors.append((0, r.target))
            for c in r.conditions:
                if r.kind == ADDCOHORT and c.offset == 0:
                    ok = ok and ((c.pattern <= r.target) != c.negated)
                elif not c.negated:
                    anchors.append((c.offset, c.pattern))
            self.anchors.append(anchors)
            self.static_ok.append(ok)
            if not ok:
                continue
            if anchors:
                key = min((tag for _, pat in anchors for tag in pat), key=lambda t: (freq[t], t))
                self.keyed.setdefault(key, []).append(r.index)
            else:
                self.unkeyed.append(r.index)
        self._candidates = {}

    def candidates(self, present: frozenset) -> list:
        out = self._candidates.get(present)
        if out is None:
            idx = set(self.unkeyed)
            for tag in present:
                idx.update(self.keyed.get(tag, ()))
            out = sorted(idx)
            self._candidates[present] = out
        return out


def _matcher(g: Grammar) -> _Matcher:
    m = g.__dict__.get("_matcher")
    if m is None:
        m = _Matcher(g)
        g.__dict__["_matcher"] = m
    return m


class _Scan:
    """Feature positions of one string, with memoised pattern lookups."""

    def __init__(self, s: CohortString):
        self.s = s
        index = {}
        for i, c in enumerate(s.cohorts):
            for tag in _cohort_tags(c):
                index.setdefault(tag, []).append(i)
        self.index = index
        self.present = frozenset(index)
        self._memo = {}
        self.work = 0

    def positions(self, pattern: frozenset) -> list:
        hit = self._memo.get(pattern)
        if hit is not None:
            return hit
        lists = sorted((self.index.get(t, ()) for t in pattern), key=len)
        if not lists[0]:
            hit = []
        else:
            common = set(lists[0])
            for other in lists[1:]:
                common.intersection_update(other)
                if not common:
                    break
            cohorts = self.s.cohorts
            hit = sorted(p for p in common if cohorts[p].contains(pattern))
        self._memo[pattern] = hit
        return hit


def _holds_at(s: CohortString, conditions, target: int) -> bool:
    n = len(s)
    cohorts = s.cohorts
    for c in conditions:
        p = target + c.offset
        if 0 <= p < n:
            if cohorts[p].contains(c.pattern) == c.negated:
                return False
        elif not c.negated:
            return False
    return True


def _holds_at_gap(s: CohortString, rule, gap: int) -> bool:
    n = len(s)
    cohorts = s.cohorts
    for c in rule.conditions:
        if c.offset == 0:
            continue  # checked statically against the inserted reading
        p = gap + c.offset - 1 if c.offset > 0 else gap + c.offset
        if 0 <= p < n:
            if cohorts[p].contains(c.pattern) == c.negated:
                return False
        elif not c.negated:
            return False
    return True


def _effective(rule, cohort: Cohort) -> bool:
    """False when applying the rule to this cohort would be a no-op or empty it."""
    if rule.kind == REPLACE:
        return cohort.readings != frozenset((rule.new,))
    if rule.kind in (SELECT, DELETE):
        matching = sum(1 for r in cohort.readings if rule.target <= r)
        return 0 < matching < len(cohort.readings)
    return True


def _rule_site(rule, anchors, scan: _Scan) -> Optional[int]:
    s = scan.s
    n = len(s)
    is_add = rule.kind == ADDCOHORT
    if anchors:
        best = None
        for offset, pattern in anchors:
            pos = scan.positions(pattern)
            if best is None or len(pos) < len(best[1]):
                best = (offset, pos)
            if not pos:
                return None
        offset, pos = best
        if is_add:
            shift = 1 - offset if offset > 0 else -offset
            sites = sorted({p + shift for p in pos if 0 <= p + shift <= n})
        else:
            sites = sorted({p - offset for p in pos if 0 <= p - offset < n})
    else:
        sites = range(n + 1) if is_add else range(n)
    for site in sites:
        scan.work += 1
        if is_add:
            if _holds_at_gap(s, rule, site):
                return site
        else:
            cohort = s.cohorts[site]
            if (cohort.contains(rule.target) and _holds_at(s, rule.conditions, site)
                    and _effective(rule, cohort)):
                return site
    return None


def _find(g: Grammar, s: CohortString):
    m = _matcher(g)
    scan = _Scan(s)
    for ri in m.candidates(scan.present):
        site = _rule_site(m.rules[ri], m.anchors[ri], scan)
        if site is not None:
            return (ri, site), scan.work
    return None, scan.work


def find_application(g: Grammar, s: CohortString) -> Optional[tuple[int, int]]:
    """First rule (grammar order) with an applicable site, and its leftmost site.

    For ADDCOHORT the site is an insertion gap in ``0..len(s)``; offsets in
    its conditions are measured from the inserted cohort.
    """
    return _find(g, s)[0]


def _original_gap(s: CohortString, gap: int) -> int:
    for o in s.origins[gap:]:
        if isinstance(o, Original):
            return o.index
    return s.original_length


def _apply(rule, site: int, s: CohortString, bounds: Bounds, stats: RunStats):
    cohorts = list(s.cohorts)
    origins = list(s.origins)
    if stats.next_id is None:
        stats.next_id = max((c.id for c in cohorts), default=-1) + 1

    if stats.last_target_position is not None and abs(site - stats.last_target_position) > bounds.distance:
        raise BoundExceededError("distance", site, f"moved {abs(site - stats.last_target_position)}")

    gap = None
    if rule.kind == ADDCOHORT:
        gap = _original_gap(s, site)
        # a gap after the last original cohort is outside every budget
        if bounds.fertility < INF and (gap >= s.original_length
                                       or stats.per_gap_insertions[gap] + 1 > bounds.fertility):
            raise BoundExceededError("fertility", site, f"original gap {gap}")
        cid = stats.next_id
        new_ops = 1
    else:
        cid = cohorts[site].id
        new_ops = stats.per_cohort_ops[cid] + 1
    if new_ops > bounds.volume:
        raise BoundExceededError("volume", site, f"cohort {cid}")

    if rule.kind == ADDCOHORT:
        cohorts.insert(site, Cohort(frozenset((rule.target,)), cid))
        origins.insert(site, Inserted(gap))
        stats.next_id += 1
        stats.per_gap_insertions[gap] += 1
    elif rule.kind == REMCOHORT:
        del cohorts[site]
        del origins[site]
    else:
        old = cohorts[site]
        if rule.kind == REPLACE:
            readings = frozenset((rule.new,))
        elif rule.kind == SELECT:
            readings = frozenset(r for r in old.readings if rule.target <= r)
        else:
            readings = frozenset(r for r in old.readings if not rule.target <= r)
        cohorts[site] = Cohort(readings, cid)

    stats.applications += 1
    stats.per_rule[rule.index] += 1
    stats.per_cohort_ops[cid] = new_ops
    stats.last_target_position = site
    return CohortString(tuple(cohorts), tuple(origins), s.original_length)


def _note_context(g: Grammar, s: CohortString, rule, site: int, stats: RunStats):
    radius = _matcher(g).radius
    changed = None if rule.kind == REMCOHORT else site
    for p in range(max(0, site - radius), min(len(s), site + radius + 1)):
        if p != changed:
            stats.context_updates[s[p].id] += 1


def step(g: Grammar, s: CohortString, bounds: Bounds = Bounds(),
         stats: Optional[RunStats] = None) -> Optional[CohortString]:
    """Apply one derivation step, or return None at a fixpoint.

    Raises ``BoundExceededError`` (without changing ``stats``) when the
    step would break a finite bound.
    """
    if stats is None:
        stats = RunStats()
    found, work = _find(g, s)
    stats.scan_work += work
    if found is None:
        return None
    ri, site = found
    rule = g.rules[ri]
    out = _apply(rule, site, s, bounds, stats)
    _note_context(g, out, rule, site, stats)
    stats.max_length = max(stats.max_length, len(out))
    return out


def derive(g: Grammar, s0: CohortString, bounds: Bounds = Bounds(),
           detect_loops: bool = False, want_trace: bool = False) -> DerivationOutcome:
    """Iterate ``step`` to a fixpoint, a loop, a bound violation or the step cap.

    Since a step is a function of the string, a repeated string proves the
    derivation never terminates; with ``detect_loops`` every visited string
    is remembered and a repeat is reported as ``Loop``.
    """
    stats = RunStats(max_length=len(s0))
    trace = [] if want_trace else None
    seen = {}
    s = s0
    while True:
        if detect_loops:
            key = s.key()
            if key in seen:
                stats.distinct_strings_seen = len(seen)
                return DerivationOutcome(Loop(s, seen[key], stats.applications - seen[key]), stats, trace)
            seen[key] = stats.applications
            stats.distinct_strings_seen = len(seen)
        if stats.applications >= bounds.max_steps:
            if find_application(g, s) is None:
                return DerivationOutcome(Fixpoint(s), stats, trace)
            return DerivationOutcome(StepLimit(s), stats, trace)
        found, work = _find(g, s)
        stats.scan_work += work
        if found is None:
            return DerivationOutcome(Fixpoint(s), stats, trace)
        ri, site = found
        rule = g.rules[ri]
        try:
            nxt = _apply(rule, site, s, bounds, stats)
        except BoundExceededError as exc:
            return DerivationOutcome(BoundExceeded(s, exc.bound, exc.site), stats, trace)
        _note_context(g, nxt, rule, site, stats)
        stats.max_length = max(stats.max_length, len(nxt))
        s = nxt
        if trace is not None:
            trace.append(TraceEntry(ri, site, s))


def check_application_bound(stats: RunStats, f: int, v: int, n: int) -> bool:
    """``applications <= (1 + f) * n * v``.

    Every application charges one cohort, at most ``(1 + f) * n`` cohorts
    ever exist when each of the ``n`` original gaps takes at most ``f``
    insertions, and each cohort absorbs at most ``v`` operations.
    """
    return stats.applications <= (1 + f) * n * v
