"""Crossing sequences, finite-state extraction and weighted squares.

Run: python3 demos/03_crossing_sequences_nfa.py
"""
from scglab import equivalence_check, extract_nfa, max_crossing_bound, simulate, weight_mode_check
from scglab.finite_state import format_crossing
from scglab.machines import figure_cs_machine, right_sweeper, two_pass_sweeper
from scglab.tm import all_words

# %% the sequence at one boundary of a longer run
r = simulate(figure_cs_machine(), "WORDING")
for b in sorted(r.crossings.sequences):
    print(f"boundary {b}: {format_crossing(r.crossings.at(b))}")
print("alternates:", r.crossings.alternates())

# %% empirical k over all short inputs
for tm in (right_sweeper(), two_pass_sweeper()):
    print()
    print(max_crossing_bound(tm, all_words("AB", 4)).table().splitlines()[-1])

# %% extract an automaton and compare with the machine exhaustively
for tm, k in ((right_sweeper(), 1), (two_pass_sweeper(), 2)):
    nfa = extract_nfa(tm, k)
    print("\n" + nfa.summary())
    rep = equivalence_check(tm, nfa, 6)
    print(rep.table().splitlines()[-1])
    mutant = equivalence_check(tm, nfa.without_final(), 6)
    print(f"with one final state dropped: {len(mutant.disagreements)} disagreements")

print("\nright-sweeper automaton:")
print(extract_nfa(right_sweeper(), 1).export())

# %% weighted squares
for tm, w in ((right_sweeper(), 1), (two_pass_sweeper(), 1), (two_pass_sweeper(), 2)):
    print(weight_mode_check(tm, w, all_words("AB", 5)).table().splitlines()[-1])
