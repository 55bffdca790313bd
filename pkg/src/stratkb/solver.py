"""DPLL satisfiability, entailment and exact model counting.

Counts are always taken over the whole declared vocabulary: atoms that
never occur in a clause still double the count.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Optional

from .formulas import Clause, Formula, Not, Vocabulary, World, atoms_of, to_cnf

__all__ = ["ClauseSet", "is_satisfiable", "entails", "count_models", "to_dimacs"]


class ClauseSet:
    """Immutable, duplicate-free set of clauses over a vocabulary."""

    __slots__ = ("vocab", "clauses", "_ints")

    def __init__(self, vocab: Vocabulary, clauses: Iterable[Clause] = ()):
        self.vocab = vocab
        self.clauses = tuple(dict.fromkeys(clauses))
        self._ints = [_encode(vocab, c) for c in self.clauses]

    @classmethod
    def from_formulas(cls, vocab: Vocabulary, formulas: Iterable[Formula]) -> "ClauseSet":
        clauses = []
        for f in formulas:
            clauses.extend(to_cnf(f))
        return cls(vocab, clauses)

    def __len__(self):
        return len(self.clauses)

    def __iter__(self):
        return iter(self.clauses)

    def __eq__(self, other):
        return (isinstance(other, ClauseSet) and self.vocab == other.vocab
                and set(self.clauses) == set(other.clauses))

    def __hash__(self):
        return hash((self.vocab, frozenset(self.clauses)))

    def __repr__(self):
        return f"ClauseSet({[str(c) for c in self.clauses]})"

    def union(self, other: Iterable[Clause]) -> "ClauseSet":
        return ClauseSet(self.vocab, self.clauses + tuple(other))


@lru_cache(maxsize=1 << 16)
def _encode(vocab: Vocabulary, clause: Clause) -> tuple:
    out = []
    for lit in clause:
        if lit.atom not in vocab:
            raise ValueError(f"atom {lit.atom!r} not in vocabulary")
        out.append((vocab.index(lit.atom) + 1) * (1 if lit.positive else -1))
    return tuple(out)


# -- core --------------------------------------------------------------------

def _assign(clauses: list, lit: int) -> Optional[list]:
    """Set ``lit`` true. Returns the reduced clause list, or None on conflict."""
    out = []
    neg = -lit
    for c in clauses:
        if lit in c:
            continue
        if neg in c:
            c = tuple(x for x in c if x != neg)
            if not c:
                return None
        out.append(c)
    return out


def _propagate(clauses: list, trail: list) -> Optional[list]:
    if any(not c for c in clauses):
        return None
    while True:
        unit = next((c[0] for c in clauses if len(c) == 1), None)
        if unit is None:
            return clauses
        trail.append(unit)
        clauses = _assign(clauses, unit)
        if clauses is None:
            return None


def _branch_var(clauses: list) -> int:
    return min(abs(x) for c in clauses for x in c)


def _dpll(clauses: list, trail: list) -> bool:
    clauses = _propagate(clauses, trail)
    if clauses is None:
        return False
    # pure literals can be set without losing satisfiability
    present = {x for c in clauses for x in c}
    pure = sorted((x for x in present if -x not in present), key=abs)
    for x in pure:
        trail.append(x)
    if pure:
        ps = set(pure)
        clauses = [c for c in clauses if not ps.intersection(c)]
    if not clauses:
        return True
    v = _branch_var(clauses)
    for lit in (v, -v):
        sub = _assign(clauses, lit)
        if sub is None:
            continue
        mark = len(trail)
        trail.append(lit)
        if _dpll(sub, trail):
            return True
        del trail[mark:]
    return False


def _count(clauses: list, free: int) -> int:
    """Models of ``clauses`` over ``free`` unassigned variables."""
    trail: list = []
    clauses = _propagate(clauses, trail)
    if clauses is None:
        return 0
    free -= len(trail)
    if not clauses:
        return 1 << free
    v = _branch_var(clauses)
    total = 0
    for lit in (v, -v):
        sub = _assign(clauses, lit)
        if sub is not None:
            total += _count(sub, free - 1)
    return total


# -- public API --------------------------------------------------------------

def is_satisfiable(cs: ClauseSet) -> Optional[World]:
    """A satisfying world, or None. Unconstrained atoms are set false."""
    trail: list = []
    if not _dpll(list(cs._ints), trail):
        return None
    bits = 0
    for x in trail:
        if x > 0:
            bits |= 1 << (x - 1)
    return World(cs.vocab, bits)


def entails(cs: ClauseSet, goal: Formula) -> bool:
    unknown = atoms_of(goal) - set(cs.vocab.atoms)
    if unknown:
        raise ValueError(f"goal mentions atoms outside the vocabulary: {sorted(unknown)}")
    return is_satisfiable(cs.union(to_cnf(Not(goal)))) is None


def count_models(cs: ClauseSet) -> int:
    return _count(list(cs._ints), len(cs.vocab))


def to_dimacs(cs: ClauseSet) -> str:
    lines = [f"c vars: {' '.join(cs.vocab.atoms)}", f"p cnf {len(cs.vocab)} {len(cs._ints)}"]
    lines += [" ".join(map(str, c + (0,))) for c in cs._ints]
    return "\n".join(lines) + "\n"
