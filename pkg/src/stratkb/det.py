"""Density estimation trees over binary data.

A tree partitions the worlds of a vocabulary into cells, one per leaf,
and assigns every world of a cell the same probability.  Leaf values are
per-world probabilities, kept as exact :class:`~fractions.Fraction`
values so that the compiled knowledge base has exact strata.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .formulas import Clause, Literal, Vocabulary, World
from .skb import StratifiedKB, WeightedClause

__all__ = [
    "DataSet", "Leaf", "Split", "DensityTree", "Branch", "learn_tree",
    "world_density", "tree_to_skb", "read_csv", "tree_to_json", "tree_from_json",
    "format_rational", "parse_rational",
]


class EmptyDatasetError(ValueError):
    pass


@dataclass(frozen=True)
class DataSet:
    vocab: Vocabulary
    rows: tuple  # world bitmasks

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        for r in self.rows:
            if not 0 <= r < self.vocab.size:
                raise ValueError(f"row {r} out of range for vocabulary")

    @classmethod
    def from_worlds(cls, vocab: Vocabulary, worlds: Iterable[World]) -> "DataSet":
        return cls(vocab, tuple(w.bits for w in worlds))

    @property
    def N(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class Leaf:
    p: Fraction


@dataclass(frozen=True)
class Split:
    atom: str
    false: "Node"
    true: "Node"


Node = Union[Leaf, Split]


@dataclass(frozen=True)
class Branch:
    literals: tuple  # of Literal, root first
    p: Fraction


class DensityTree:
    """A validated tree: no atom split twice on a path, leaves in [0, 1],
    and the per-world probabilities summing to exactly one."""

    def __init__(self, vocab: Vocabulary, root: Node):
        self.vocab = vocab
        self.root = root
        total = Fraction(0)
        n = len(vocab)
        for br in self.branches():
            if not 0 <= br.p <= 1:
                raise ValueError(f"leaf probability {br.p} outside [0, 1]")
            total += br.p * (1 << (n - len(br.literals)))
        if total != 1:
            raise ValueError(f"tree probabilities sum to {total}, not 1")

    def branches(self) -> list:
        """Root-to-leaf branches, false child first."""
        out = []

        def walk(node, path):
            if isinstance(node, Leaf):
                out.append(Branch(tuple(path), Fraction(node.p)))
                return
            if node.atom not in self.vocab:
                raise ValueError(f"split on unknown atom {node.atom!r}")
            if any(l.atom == node.atom for l in path):
                raise ValueError(f"atom {node.atom!r} split twice on one path")
            walk(node.false, path + [Literal(node.atom, False)])
            walk(node.true, path + [Literal(node.atom, True)])

        walk(self.root, [])
        return out

    @property
    def n_leaves(self) -> int:
        return len(self.branches())

    def __eq__(self, other):
        return isinstance(other, DensityTree) and self.vocab == other.vocab and self.root == other.root

    def __repr__(self):
        return f"DensityTree({len(self.vocab)} atoms, {self.n_leaves} leaves)"


def learn_tree(data: DataSet, max_depth: int, min_leaf_rows: int = 1) -> DensityTree:
    """Greedy density estimation tree.

    A split is chosen to minimise ``-sum(n_leaf**2 / volume)``; since both
    children of a cell have half its volume, a split improves the score
    exactly when it is unbalanced, and the best split is the most
    unbalanced one (ties go to the lowest vocabulary index).  Nodes holding
    fewer than ``min_leaf_rows`` rows, nodes at ``max_depth`` and nodes
    with no improving split become leaves with value
    ``(n_leaf / N) / 2**(n_atoms - depth)``.
    """
    if data.N == 0:
        raise EmptyDatasetError("empty dataset")
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    if min_leaf_rows < 1:
        raise ValueError("min_leaf_rows must be >= 1")
    n = len(data.vocab)
    N = data.N

    def build(rows: Sequence[int], used: frozenset, depth: int) -> Node:
        m = len(rows)
        leaf = Leaf(Fraction(m, N * (1 << (n - depth))))
        if depth >= max_depth or m < min_leaf_rows:
            return leaf
        best = None
        for i in range(n):
            if i in used:
                continue
            ones = sum(1 for r in rows if r >> i & 1)
            score = ones * ones + (m - ones) * (m - ones)
            if best is None or score > best[0]:
                best = (score, i)
        if best is None or 2 * best[0] <= m * m:
            return leaf
        i = best[1]
        f_rows = [r for r in rows if not r >> i & 1]
        t_rows = [r for r in rows if r >> i & 1]
        return Split(data.vocab.atoms[i],
                     build(f_rows, used | {i}, depth + 1),
                     build(t_rows, used | {i}, depth + 1))

    return DensityTree(data.vocab, build(data.rows, frozenset(), 0))


def world_density(tree: DensityTree, w: World) -> Fraction:
    if w.vocab != tree.vocab:
        raise ValueError("world and tree use different vocabularies")
    node = tree.root
    while isinstance(node, Split):
        node = node.true if w[node.atom] else node.false
    return Fraction(node.p)


def tree_to_skb(tree: DensityTree) -> StratifiedKB:
    """One weighted clause ``(!branch, 1 - p)`` per branch with ``p < 1``.

    Entries are listed by decreasing weight (stable in branch order).
    """
    entries = []
    for br in tree.branches():
        if br.p == 1:
            continue
        clause = Clause(l.negate() for l in br.literals)
        entries.append(WeightedClause(clause, 1 - br.p))
    entries.sort(key=lambda e: -e.weight)
    return StratifiedKB(tree.vocab, entries, is_probabilistic=True)


# -- I/O ---------------------------------------------------------------------

def format_rational(q: Fraction) -> str:
    """Exact decimal when the denominator is of the form 2**a * 5**b,
    otherwise ``n/d``."""
    q = Fraction(q)
    d = q.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{q.numerator}/{q.denominator}"
    digits = max(twos, fives)
    scaled = q.numerator * 10 ** digits // q.denominator
    sign = "-" if scaled < 0 else ""
    s = str(abs(scaled)).rjust(digits + 1, "0")
    if digits == 0:
        return sign + s
    return f"{sign}{s[:-digits]}.{s[-digits:]}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a rational number: {text!r}") from None


def read_csv(source: Union[str, io.TextIOBase]) -> DataSet:
    """Header of atom names, body cells ``0``/``1``."""
    if isinstance(source, str):
        with open(source, newline="", encoding="utf-8") as fh:
            return read_csv(fh)
    reader = csv.reader(source)
    header = next(reader, None)
    if not header:
        raise EmptyDatasetError("empty dataset")
    vocab = Vocabulary(h.strip() for h in header)
    rows = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(vocab):
            raise ValueError(f"line {lineno}: expected {len(vocab)} cells, got {len(row)}")
        bits = 0
        for i, cell in enumerate(row):
            cell = cell.strip()
            if cell == "1":
                bits |= 1 << i
            elif cell != "0":
                raise ValueError(f"line {lineno}: cell {cell!r} is not 0 or 1")
        rows.append(bits)
    if not rows:
        raise EmptyDatasetError("empty dataset")
    return DataSet(vocab, rows)


def _node_to_obj(node: Node) -> dict:
    if isinstance(node, Leaf):
        return {"p": format_rational(node.p)}
    return {"split": node.atom, "f": _node_to_obj(node.false), "t": _node_to_obj(node.true)}


def _node_from_obj(obj) -> Node:
    if not isinstance(obj, dict):
        raise ValueError("tree node must be a JSON object")
    if "p" in obj:
        return Leaf(parse_rational(str(obj["p"])))
    try:
        return Split(obj["split"], _node_from_obj(obj["f"]), _node_from_obj(obj["t"]))
    except KeyError as e:
        raise ValueError(f"tree node missing key {e}") from None


def tree_to_json(tree: DensityTree) -> str:
    doc = {"atoms": list(tree.vocab.atoms), "root": _node_to_obj(tree.root)}
    return json.dumps(doc, indent=2) + "\n"


def tree_from_json(text: str) -> DensityTree:
    doc = json.loads(text)
    if not isinstance(doc, dict) or "atoms" not in doc or "root" not in doc:
        raise ValueError("tree document needs 'atoms' and 'root'")
    return DensityTree(Vocabulary(doc["atoms"]), _node_from_obj(doc["root"]))
