"""Empirical running-time curves: t/n and t/(n log n) across doubling sizes.

Run: python3 demos/04_running_time_curves.py
"""
from scglab import compile_tm, curve_bench
from scglab.curves import constant_words, uniform_words
from scglab.machines import copy_machine, right_sweeper, two_pass_sweeper

sizes = (8, 16, 32, 64, 128, 256)

for label, subject, gen in [
    ("right-sweeper on A^n", right_sweeper(), constant_words("A")),  # stops at the first B otherwise
    ("two-pass sweeper", two_pass_sweeper(), uniform_words("AB")),
    ("shuttle on A^n", copy_machine(), constant_words("A")),
]:
    rep = curve_bench(subject, gen, sizes, repetitions=3, seed=7)
    print(f"== {label}")
    print(rep.table())

# %% the compiled grammar pays scan work on top of the 3 applications per step
rep = curve_bench(compile_tm(right_sweeper()), constant_words("A"), (8, 16, 32, 64))
print("== compiled right-sweeper")
print(rep.table())
