"""Slow, literal SCG interpreter used as an oracle for the engine.

Works on plain lists of sets, tries every rule at every position in order,
and evaluates ADDCOHORT by actually inserting the cohort and testing the
conditions on the resulting list.  Shares no code with scglab.engine.
"""

import math

from scglab.rules import ADDCOHORT, DELETE, REMCOHORT, REPLACE, SELECT


def holds(cohorts, pos, cond):
    p = pos + cond.offset
    inside = 0 <= p < len(cohorts)
    found = inside and any(cond.pattern <= r for r in cohorts[p])
    return not found if cond.negated else found


def changes(rule, readings):
    if rule.kind == REPLACE:
        return readings != {rule.new}
    if rule.kind == SELECT:
        kept = {r for r in readings if rule.target <= r}
        return kept and kept != readings
    if rule.kind == DELETE:
        kept = {r for r in readings if not rule.target <= r}
        return kept and kept != readings
    return True


def find(rules, cohorts):
    for i, rule in enumerate(rules):
        if rule.kind == ADDCOHORT:
            for gap in range(len(cohorts) + 1):
                trial = cohorts[:gap] + [{rule.target}] + cohorts[gap:]
                if all(holds(trial, gap, c) for c in rule.conditions):
                    return i, gap
            continue
        for pos, readings in enumerate(cohorts):
            if not any(rule.target <= r for r in readings):
                continue
            if all(holds(cohorts, pos, c) for c in rule.conditions) and changes(rule, readings):
                return i, pos
    return None


def run(grammar, string, fertility=math.inf, volume=math.inf, distance=math.inf,
        max_steps=10_000, detect_loops=False):
    """Returns (status, final cohorts as a list of sets, list of (rule, site))."""
    rules = grammar.rules
    cohorts = [set(c.readings) for c in string]
    ids = list(range(len(cohorts)))
    orig = list(range(len(cohorts)))  # None for inserted cohorts
    n = len(cohorts)
    ops, inserted = {}, {}
    last = None
    next_id = n
    trace = []
    seen = set()
    while True:
        key = tuple(frozenset(c) for c in cohorts)
        if detect_loops:
            if key in seen:
                return "loop", cohorts, trace
            seen.add(key)
        if len(trace) >= max_steps:
            return ("fixpoint" if find(rules, cohorts) is None else "step_limit"), cohorts, trace
        hit = find(rules, cohorts)
        if hit is None:
            return "fixpoint", cohorts, trace
        i, site = hit
        rule = rules[i]
        if last is not None and abs(site - last) > distance:
            return "bound_exceeded", cohorts, trace
        if rule.kind == ADDCOHORT:
            gap = next((o for o in orig[site:] if o is not None), n)
            if fertility < math.inf and (gap == n or inserted.get(gap, 0) + 1 > fertility):
                return "bound_exceeded", cohorts, trace
            if volume < 1:
                return "bound_exceeded", cohorts, trace
            cohorts.insert(site, {rule.target})
            ids.insert(site, next_id)
            orig.insert(site, None)
            ops[next_id] = 1
            inserted[gap] = inserted.get(gap, 0) + 1
            next_id += 1
        else:
            cid = ids[site]
            if ops.get(cid, 0) + 1 > volume:
                return "bound_exceeded", cohorts, trace
            ops[cid] = ops.get(cid, 0) + 1
            if rule.kind == REMCOHORT:
                del cohorts[site], ids[site], orig[site]
            elif rule.kind == REPLACE:
                cohorts[site] = {rule.new}
            elif rule.kind == SELECT:
                cohorts[site] = {r for r in cohorts[site] if rule.target <= r}
            else:
                cohorts[site] = {r for r in cohorts[site] if not rule.target <= r}
        last = site
        trace.append((i, site))
