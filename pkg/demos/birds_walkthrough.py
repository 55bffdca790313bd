"""
From a density tree to a stratified knowledge base
==================================================

Sixteen observations of birds and flying creatures are turned into a
density tree, then into weighted clauses whose possibility distribution
reproduces the tree's probabilities exactly.
"""
from stratkb import DataSet, Vocabulary, format_kb, learn_tree, possibility_table, tree_to_skb

vocab = Vocabulary(["Bird", "Antarctic", "Flies"])

# bit 0 is Bird, bit 1 Antarctic, bit 2 Flies
B, A, F = 1, 2, 4
rows = [0] * 4 + [A] * 4 + [F] * 2 + [A | F] * 2 + [B | F] * 3 + [B | A]
tree = learn_tree(DataSet(vocab, rows), max_depth=3)

for branch in tree.branches():
    path = " & ".join(str(l) for l in branch.literals)
    print(f"{path:30} p = {branch.p}")

# each branch with p < 1 becomes the clause "not this branch" with weight 1 - p
kb = tree_to_skb(tree)
print()
print(format_kb(kb))

# pi(world) = 1 - (largest weight the world violates), which is the leaf value
pi = possibility_table(kb)
for bits, p in enumerate(pi):
    print(vocab.world(bits), p)
print("sum:", sum(pi))
