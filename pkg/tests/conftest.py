from fractions import Fraction

import pytest

from stratkb.det import DensityTree, Leaf, Split
from stratkb.formulas import Vocabulary
from stratkb.skb import StratifiedKB, parse_kb

BIRD_ATOMS = ["Bird", "Antarctic", "Flies"]

# bird knowledge base compiled from the six-leaf tree
BIRDS_KB = """\
@atoms Bird, Antarctic, Flies
@spkb true
1 :: !Bird | Antarctic | Flies
1 :: !Bird | !Antarctic | !Flies
0.9375 :: !Bird | !Antarctic | Flies
0.875 :: Bird | !Flies
0.8125 :: !Bird | Antarctic | !Flies
0.75 :: Bird | Flies
"""

# bird knowledge base after pruning, five entries
BIRDS_PRUNED = """\
@atoms Bird, Antarctic, Flies
@spkb false
1 :: !Bird | Antarctic | Flies
1 :: !Bird | !Antarctic | !Flies
0.9375 :: !Bird | !Antarctic
0.875 :: !Flies | Bird
0.8125 :: !Bird
"""

TOY_B = """\
@atoms Gardener, HayFever, Coughs
0.9 :: Gardener -> !HayFever
0.8 :: Coughs -> HayFever
"""


def birds_tree_root():
    return Split(
        "Bird",
        Split("Flies", Leaf(Fraction("0.25")), Leaf(Fraction("0.125"))),
        Split("Antarctic",
              Split("Flies", Leaf(Fraction(0)), Leaf(Fraction("0.1875"))),
              Split("Flies", Leaf(Fraction("0.0625")), Leaf(Fraction(0)))),
    )


@pytest.fixture
def birds_vocab():
    return Vocabulary(BIRD_ATOMS)


@pytest.fixture
def birds_tree(birds_vocab):
    return DensityTree(birds_vocab, birds_tree_root())


@pytest.fixture
def birds_kb() -> StratifiedKB:
    return parse_kb(BIRDS_KB)


@pytest.fixture
def birds_pruned() -> StratifiedKB:
    return parse_kb(BIRDS_PRUNED)


@pytest.fixture
def toy_kb() -> StratifiedKB:
    return parse_kb(TOY_B)


def birds_rows():
    """16 rows reproducing the bird tree's leaf values (bit 0 Bird,
    bit 1 Antarctic, bit 2 Flies)."""
    B, A, F = 1, 2, 4
    rows = [0] * 4 + [A] * 4          # !Bird, !Flies: 8 rows, 4/4 over Antarctic
    rows += [F] * 2 + [A | F] * 2     # !Bird, Flies: 4 rows, 2/2
    rows += [B | F] * 3               # Bird, !Antarctic, Flies
    rows += [B | A]                   # Bird, Antarctic, !Flies
    return rows
