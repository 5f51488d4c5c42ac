"""Walk through a small sequential constraint grammar derivation.

Run: python3 demos/01_scg_derivation.py
"""
from scglab import Bounds, CohortString, Grammar, LB, RB, addcohort, cond, derive, parse_grammar, replace, select

# %% a toy grammar over ambiguous cohorts
g = parse_grammar("""
FEATURES N V D
SELECT (N) (-1 D)
SELECT (V) (-1 N)
""")
s = CohortString.of(LB, "D", "N | V", "N | V", RB)
print("input :", s)

out = derive(g, s, want_trace=True)
for e in out.trace:
    print(f"  rule {e.rule} at {e.site}: {e.string}")
print("status:", out.status, "| applications:", out.stats.applications)

# %% rules fire first-rule-first, leftmost site first
print("\nper-rule counts:", dict(out.stats.per_rule))

# %% a two-rule cycle; loop detection names it instead of running into the step cap
cycle = Grammar.from_rules([replace("A", "B", cond(0, "A")), replace("B", "A", cond(0, "B"))])
looped = derive(cycle, CohortString.of(LB, "A", RB), detect_loops=True)
capped = derive(cycle, CohortString.of(LB, "A", RB), Bounds(max_steps=25))
print("\n2-cycle with detection   :", looped.status, "after", looped.stats.applications, "applications")
print("2-cycle without detection:", capped.status, "after", capped.stats.applications, "applications")

# %% fertility caps insertions per original gap
grow = Grammar.from_rules([addcohort("X", cond(1, RB))])
for f in (0, 1, 3):
    o = derive(grow, CohortString.of(LB, "A", RB), Bounds(fertility=f, max_steps=100))
    print(f"fertility={f}: {o.status:<15} length {len(o.final)}  applications {o.stats.applications}")
