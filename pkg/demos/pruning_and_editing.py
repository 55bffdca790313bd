"""
Pruning and expert edits
========================

Exact pruning shortens or drops clauses without changing pi.  Merging the
top levels is lossy.  Removing a rule reports which earlier pruning steps
relied on it.
"""
from stratkb.det import format_rational
from stratkb import (
    check_provenance, format_kb, merge_top_levels, parse_kb, possibility_table, prune_exact,
    remove_formula, render_formula, to_implications,
)

kb = parse_kb("""
@atoms Bird, Antarctic, Flies
@spkb true
1 :: !Bird | Antarctic | Flies
1 :: !Bird | !Antarctic | !Flies
0.9375 :: !Bird | !Antarctic | Flies
0.875 :: Bird | !Flies
0.8125 :: !Bird | Antarctic | !Flies
0.75 :: Bird | Flies
""")

pruned = prune_exact(kb)
print(format_kb(pruned))
print("pi unchanged:", possibility_table(pruned) == possibility_table(kb))

# the weight-0.75 clause became the empty clause: every world has pi <= 0.25
for formula, weight in to_implications(pruned):
    print(f"{format_rational(weight):8} {render_formula(formula)}")

# merging keeps pi on the likely worlds and flattens the unlikely ones
merged = merge_top_levels(kb, 4)
for bits, (a, b) in enumerate(zip(possibility_table(kb), possibility_table(merged))):
    print(kb.vocab.world(bits), a, "->", b)

# antarctic birds may fly after all (albatrosses)
i = next(i for i, e in enumerate(pruned.entries) if str(e.clause) == "!Bird | !Antarctic | !Flies")
edited = remove_formula(pruned, i)
print("spkb after edit:", edited.is_probabilistic)
for step in check_provenance(edited):
    print("stale:", step)
