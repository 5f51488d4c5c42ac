"""Compile a one-tape machine into a grammar and compare the two runs.

Run: python3 demos/02_tm_to_scg.py
"""
from scglab import compile_tm, differential_check, encode_input, run_compiled, simulate
from scglab.generators import random_machine
from scglab.machines import copy_machine, eraser, two_pass_sweeper
from scglab.tm import all_words

tm = two_pass_sweeper()
cg = compile_tm(tm)
print(f"two-pass sweeper: {len(tm.transitions)} transitions -> {len(cg.grammar.rules)} rules")
print(cg.provenance_text().splitlines()[0], "...")

# %% one input, both ways
w = "BAB"
r = simulate(tm, w)
run = run_compiled(cg, w, want_trace=True)
print(f"\nmachine : {r.verdict.value} tape={r.tape_string} steps={r.steps}")
print(f"grammar : accepted={run.accepted} tape={''.join(run.tape)} "
      f"applications={run.outcome.stats.applications}")
print("start   :", encode_input(w, tm))
for e in run.outcome.trace[:6]:
    print(f"  rule {e.rule:>2} at {e.site}: {e.string}")
print("  ...")

# %% the differential table for a growing and a shrinking machine
for m in (copy_machine(), eraser()):
    rep = differential_check(m, all_words(m.alphabet, 3))
    print(f"\n{len(rep.rows)} inputs, {len(rep.mismatches)} mismatches, {len(rep.inconclusive)} inconclusive")
    print(rep.table().splitlines()[0])
    for line in rep.table().splitlines()[1:5]:
        print(line)

# %% random machines
total = 0
for seed in range(10):
    m = random_machine(seed)
    rep = differential_check(m, all_words(m.alphabet, 4))
    total += len(rep.mismatches)
print(f"\n10 random machines, all inputs up to length 4: {total} mismatches")

# %% dropping one rule breaks the simulation somewhere
broken = differential_check(tm, all_words("AB", 3), compiled=cg.without_rule(0))
print("without rule 0:", len(broken.mismatches), "mismatches")
