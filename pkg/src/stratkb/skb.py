"""Stratified knowledge bases: weighted clauses and their possibility
distribution ``pi(w) = 1 - max{weight of a clause violated by w}``.

All weights are exact fractions in (0, 1]; strata are defined by exact
weight equality.  Every operation returns a new knowledge base.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .formulas import (
    And, Clause, Formula, Implies, Vocabulary, World, clause_formula,
    parse_formula, render_clause, render_formula, to_cnf,
)
from .solver import ClauseSet, is_satisfiable

__all__ = [
    "WeightedClause", "PruneStep", "StratifiedKB", "Stratification",
    "evaluate_possibility", "possibility_table", "stratify", "prune_exact",
    "merge_top_levels", "to_implications", "remove_formula", "add_formula",
    "swap_certainty", "validate_spkb", "check_provenance", "parse_kb", "format_kb",
    "KBFormatError", "VocabularyTooLargeError",
]


class KBFormatError(ValueError):
    pass


class VocabularyTooLargeError(ValueError):
    pass


@dataclass(frozen=True)
class WeightedClause:
    clause: Clause
    weight: Fraction

    def __post_init__(self):
        w = Fraction(self.weight)
        if not 0 < w <= 1:
            raise ValueError(f"certainty weight {w} not in (0, 1]")
        object.__setattr__(self, "weight", w)

    def __str__(self):
        return f"({render_clause(self.clause)}, {_fmt(self.weight)})"


@dataclass(frozen=True)
class PruneStep:
    """One pruning rewrite: ``before`` at ``weight`` was dropped (``after``
    is None) or replaced by the shorter ``after``, justified by the
    ``support`` entries of equal or higher weight."""

    weight: Fraction
    before: Clause
    after: Optional[Clause]
    support: tuple  # of WeightedClause

    @property
    def kind(self) -> str:
        return "removed" if self.after is None else "strengthened"

    def __str__(self):
        sup = ", ".join(map(str, self.support)) or "nothing"
        if self.after is None:
            return f"removed ({render_clause(self.before)}, {_fmt(self.weight)}) using {sup}"
        return (f"strengthened ({render_clause(self.before)}, {_fmt(self.weight)}) "
                f"to {render_clause(self.after)} using {sup}")


@dataclass(frozen=True)
class StratifiedKB:
    vocab: Vocabulary
    entries: tuple
    is_probabilistic: bool = False
    provenance: tuple = ()
    dirty: bool = False

    def __post_init__(self):
        seen = {}
        for e in self.entries:
            if not isinstance(e, WeightedClause):
                raise TypeError(f"entries must be WeightedClause, got {e!r}")
            for lit in e.clause:
                if lit.atom not in self.vocab:
                    raise ValueError(f"atom {lit.atom!r} not in vocabulary")
            seen.setdefault((e.clause, e.weight), e)
        object.__setattr__(self, "entries", tuple(seen.values()))
        object.__setattr__(self, "provenance", tuple(self.provenance))

    @classmethod
    def from_pairs(cls, vocab: Vocabulary, pairs: Iterable, is_probabilistic: bool = False):
        """Build from ``(formula_or_text, weight)`` pairs; formulas are split
        into their CNF clauses, each carrying the formula's weight."""
        entries = []
        for f, w in pairs:
            if isinstance(f, str):
                f = parse_formula(f, vocab)
            for c in _clauses(f):
                entries.append(WeightedClause(c, Fraction(w)))
        return cls(vocab, tuple(entries), is_probabilistic)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def weights(self) -> list:
        """Distinct weights, highest first."""
        return sorted({e.weight for e in self.entries}, reverse=True)

    def clauses_at_least(self, weight) -> list:
        return [e.clause for e in self.entries if e.weight >= weight]

    def as_set(self) -> frozenset:
        return frozenset((e.clause, e.weight) for e in self.entries)

    def same_entries(self, other: "StratifiedKB") -> bool:
        return self.vocab == other.vocab and self.as_set() == other.as_set()

    def __str__(self):
        return format_kb(self)


def _clauses(f: Formula) -> tuple:
    if isinstance(f, Clause):
        return (f,)
    return to_cnf(f)


def _fmt(q: Fraction) -> str:
    from .det import format_rational
    return format_rational(q)


# -- semantics ---------------------------------------------------------------

def _masks(vocab: Vocabulary, clause: Clause) -> tuple:
    pos = neg = 0
    for lit in clause:
        bit = 1 << vocab.index(lit.atom)
        if lit.positive:
            pos |= bit
        else:
            neg |= bit
    return pos, neg


def _violated(bits: int, masks: tuple) -> bool:
    pos, neg = masks
    return not bits & pos and bits & neg == neg


def evaluate_possibility(kb: StratifiedKB, w: World) -> Fraction:
    if w.vocab != kb.vocab:
        raise ValueError("world and knowledge base use different vocabularies")
    worst = Fraction(0)
    for e in kb.entries:
        if e.weight > worst and _violated(w.bits, _masks(kb.vocab, e.clause)):
            worst = e.weight
    return 1 - worst


def possibility_table(kb: StratifiedKB) -> list:
    """``pi`` of every world, indexed by world bitmask."""
    prepared = sorted(((e.weight, _masks(kb.vocab, e.clause)) for e in kb.entries),
                      key=lambda t: -t[0])
    one = Fraction(1)
    table = []
    for bits in range(kb.vocab.size):
        value = one
        for weight, masks in prepared:
            if _violated(bits, masks):
                value = one - weight
                break
        table.append(value)
    return table


def validate_spkb(kb: StratifiedKB, limit: int = 20) -> Fraction:
    """Sum of ``pi`` over all worlds (1 for a genuine SPKB)."""
    if len(kb.vocab) > limit:
        raise VocabularyTooLargeError(
            f"{len(kb.vocab)} atoms exceeds the exhaustive validation limit of {limit}")
    return sum(possibility_table(kb), Fraction(0))


@dataclass(frozen=True)
class Stratification:
    weights: tuple   # distinct, descending
    strata: tuple    # clauses per weight, parallel to weights

    def cumulative(self, weight) -> tuple:
        """All clauses with weight >= ``weight``."""
        out = []
        for w, s in zip(self.weights, self.strata):
            if w >= weight:
                out.extend(s)
        return tuple(out)

    def cumulative_sets(self) -> list:
        return [self.cumulative(w) for w in self.weights]

    def sizes(self) -> tuple:
        return tuple(len(s) for s in self.strata)


def stratify(kb: StratifiedKB) -> Stratification:
    weights = kb.weights()
    strata = tuple(tuple(e.clause for e in kb.entries if e.weight == w) for w in weights)
    return Stratification(tuple(weights), strata)


# -- pruning -----------------------------------------------------------------

def _consistent(vocab: Vocabulary, clauses: Sequence[Clause]) -> bool:
    return is_satisfiable(ClauseSet(vocab, clauses)) is not None


def _derives(vocab: Vocabulary, clauses: Sequence[Clause], goal: Clause) -> bool:
    negated = [Clause([lit.negate()]) for lit in goal]
    return not _consistent(vocab, list(clauses) + negated)


def _minimal_support(vocab, base: list, fixed: list, goal: Clause) -> tuple:
    """Deletion-minimal subset of ``base`` that, together with ``fixed``,
    still derives ``goal``.  Blocks are dropped first, halving down to
    single entries."""
    keep = list(base)
    size = max(1, len(keep) // 2)
    while True:
        i = 0
        while i < len(keep):
            trial = keep[:i] + keep[i + size:]
            if _derives(vocab, [e.clause for e in trial] + fixed, goal):
                keep = trial
            else:
                i += size
        if size == 1:
            return tuple(keep)
        size //= 2


def prune_exact(kb: StratifiedKB, track: bool = True) -> StratifiedKB:
    """Remove derivable entries and drop derivable literals, keeping ``pi``.

    An entry ``(C, w)`` is removed when the other clauses of weight >= w
    derive C.  It is shortened to ``C - {l}`` when all clauses of weight
    >= w derive that shorter clause.  Strata are visited from the highest
    weight down, entries in order, and literals from the right end of the
    clause leftwards; the whole sweep repeats until nothing changes.
    With ``track`` each rewrite is recorded in ``provenance`` together
    with a minimal set of supporting entries.
    """
    vocab = kb.vocab
    entries = list(kb.entries)
    steps = list(kb.provenance)
    changed = True
    while changed:
        changed = False
        for w in sorted({e.weight for e in entries}, reverse=True):
            j = 0
            while j < len(entries):
                entry = entries[j]
                if entry.weight != w:
                    j += 1
                    continue
                others = [e for k, e in enumerate(entries) if k != j and e.weight >= w]
                if _derives(vocab, [e.clause for e in others], entry.clause):
                    support = _minimal_support(vocab, others, [], entry.clause) if track else ()
                    steps.append(PruneStep(w, entry.clause, None, support))
                    del entries[j]
                    changed = True
                    continue
                clause = entry.clause
                progress = True
                while progress and clause.literals:
                    progress = False
                    for lit in reversed(clause.literals):
                        shorter = clause.without(lit)
                        if _derives(vocab, [e.clause for e in others] + [clause], shorter):
                            support = (_minimal_support(vocab, others, [clause], shorter)
                                       if track else ())
                            steps.append(PruneStep(w, clause, shorter, support))
                            clause = shorter
                            progress = changed = True
                            break
                if clause is not entry.clause:
                    entries[j] = WeightedClause(clause, w)
                j += 1
    keep_flag = kb.is_probabilistic
    return StratifiedKB(vocab, tuple(entries), keep_flag, tuple(steps), kb.dirty)


def check_provenance(kb: StratifiedKB) -> list:
    """Recorded pruning steps whose supporting entries are no longer
    present at a weight >= the step's weight."""
    best = {}
    for e in kb.entries:
        if e.weight > best.get(e.clause, 0):
            best[e.clause] = e.weight
    return [s for s in kb.provenance
            if any(best.get(sup.clause, 0) < s.weight for sup in s.support)]


def merge_top_levels(kb: StratifiedKB, target_levels: int) -> StratifiedKB:
    """Collapse the highest weights so that ``target_levels`` distinct
    weights remain; merged entries take the largest merged weight."""
    weights = kb.weights()
    k = len(weights)
    if not 1 <= target_levels <= k:
        raise ValueError(f"target_levels must be in [1, {k}], got {target_levels}")
    if target_levels == k:
        return kb
    merged = set(weights[: k - target_levels + 1])
    top = weights[0]

    def lift(w):
        return top if w in merged else w

    entries = tuple(WeightedClause(e.clause, lift(e.weight)) for e in kb.entries)
    steps = tuple(replace(s, weight=lift(s.weight),
                          support=tuple(WeightedClause(x.clause, lift(x.weight)) for x in s.support))
                  for s in kb.provenance)
    return StratifiedKB(kb.vocab, entries, False, steps, kb.dirty)


# -- expert edits --------------------------------------------------------------

def _check_index(kb: StratifiedKB, i: int):
    if not isinstance(i, int) or not 0 <= i < len(kb.entries):
        raise IndexError(f"entry index {i} out of range (knowledge base has {len(kb.entries)} entries)")


def remove_formula(kb: StratifiedKB, index: int) -> StratifiedKB:
    """Drop one entry.  The result is no longer flagged probabilistic and
    is marked dirty; :func:`check_provenance` lists the pruning steps the
    removal invalidated."""
    _check_index(kb, index)
    entries = kb.entries[:index] + kb.entries[index + 1:]
    return StratifiedKB(kb.vocab, entries, False, kb.provenance, True)


def add_formula(kb: StratifiedKB, formula, weight, index: Optional[int] = None) -> StratifiedKB:
    """Insert the clauses of ``formula`` at position ``index`` (default: end)."""
    if isinstance(formula, str):
        formula = parse_formula(formula, kb.vocab)
    new = [WeightedClause(c, Fraction(weight)) for c in _clauses(formula)]
    entries = list(kb.entries)
    if index is None:
        index = len(entries)
    entries[index:index] = new
    return StratifiedKB(kb.vocab, tuple(entries), False, kb.provenance, kb.dirty)


def swap_certainty(kb: StratifiedKB, i: int, j: int) -> StratifiedKB:
    _check_index(kb, i)
    _check_index(kb, j)
    if i == j:
        return kb
    entries = list(kb.entries)
    a, b = entries[i], entries[j]
    entries[i] = WeightedClause(a.clause, b.weight)
    entries[j] = WeightedClause(b.clause, a.weight)
    return StratifiedKB(kb.vocab, tuple(entries), False, kb.provenance, True)


def to_implications(kb: StratifiedKB) -> list:
    """Readable ``(formula, weight)`` list.

    A clause ``C`` becomes ``a1 & ... -> l`` for the first literal ``l``
    (scanning from the right end of the clause) such that the negation of
    the remaining literals MAP-entails ``l``.  Unit clauses, the empty
    clause and clauses without such a split are kept as disjunctions.
    """
    from .inference import map_entails

    out = []
    for e in kb.entries:
        c = e.clause
        form = clause_formula(c)
        if len(c) > 1:
            for lit in reversed(c.literals):
                rest = [l.negate().formula() for l in c.literals if l != lit]
                antecedent = rest[0] if len(rest) == 1 else And(tuple(rest))
                if map_entails(kb, antecedent, lit.formula()).entailed:
                    form = Implies(antecedent, lit.formula())
                    break
        out.append((form, e.weight))
    return out


# -- text format ---------------------------------------------------------------

def _parse_weighted(body: str, vocab: Vocabulary, lineno: int) -> tuple:
    if "::" not in body:
        raise KBFormatError(f"line {lineno}: expected '<weight> :: <formula>'")
    wtext, ftext = body.split("::", 1)
    from .det import parse_rational
    try:
        weight = parse_rational(wtext)
    except ValueError as e:
        raise KBFormatError(f"line {lineno}: {e}") from None
    if not 0 < weight <= 1:
        raise KBFormatError(f"line {lineno}: weight {wtext.strip()} not in (0, 1]")
    try:
        formula = parse_formula(ftext, vocab)
    except ValueError as e:
        raise KBFormatError(f"line {lineno}: {e}") from None
    return formula, weight


def _single_clause(formula: Formula, lineno: int) -> Clause:
    cs = to_cnf(formula)
    if len(cs) != 1:
        raise KBFormatError(f"line {lineno}: provenance formula must be a single clause")
    return cs[0]


def parse_kb(text: str) -> StratifiedKB:
    """Read the line format::

        @atoms Bird, Antarctic, Flies
        @spkb true
        0.9375 :: !Bird | !Antarctic
    """
    vocab = None
    spkb = False
    entries = []
    steps = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("@"):
            key, _, rest = line.partition(" ")
            rest = rest.strip()
            if key == "@atoms":
                if vocab is not None:
                    raise KBFormatError(f"line {lineno}: duplicate @atoms header")
                names = [a.strip() for a in rest.split(",") if a.strip()]
                try:
                    vocab = Vocabulary(names)
                except ValueError as e:
                    raise KBFormatError(f"line {lineno}: {e}") from None
            elif key == "@spkb":
                if rest not in ("true", "false"):
                    raise KBFormatError(f"line {lineno}: @spkb must be true or false")
                spkb = rest == "true"
            elif key in ("@removed", "@strengthened"):
                if vocab is None:
                    raise KBFormatError(f"line {lineno}: @atoms must come first")
                steps.append(_parse_step(key, rest, vocab, lineno))
            else:
                raise KBFormatError(f"line {lineno}: unknown header {key}")
            continue
        if vocab is None:
            raise KBFormatError(f"line {lineno}: @atoms header must precede entries")
        formula, weight = _parse_weighted(line, vocab, lineno)
        entries.extend(WeightedClause(c, weight) for c in to_cnf(formula))
    if vocab is None:
        raise KBFormatError("missing @atoms header")
    return StratifiedKB(vocab, tuple(entries), spkb, tuple(steps))


def _parse_step(key, rest, vocab, lineno) -> PruneStep:
    head, _, sup = rest.partition("<=")
    after = None
    if key == "@strengthened":
        head, sep, after_text = head.partition("=>")
        if not sep:
            raise KBFormatError(f"line {lineno}: @strengthened needs '=>'")
        after = _single_clause(parse_formula(after_text, vocab), lineno)
    formula, weight = _parse_weighted(head, vocab, lineno)
    before = _single_clause(formula, lineno)
    support = []
    for part in sup.split(";"):
        if part.strip():
            f, w = _parse_weighted(part, vocab, lineno)
            support.append(WeightedClause(_single_clause(f, lineno), w))
    return PruneStep(weight, before, after, tuple(support))


def format_kb(kb: StratifiedKB, formulas: Optional[list] = None) -> str:
    """Serialise ``kb``; ``formulas`` (``(formula, weight)`` pairs, e.g.
    from :func:`to_implications`) replaces the clause listing."""
    lines = [f"@atoms {', '.join(kb.vocab.atoms)}",
             f"@spkb {'true' if kb.is_probabilistic else 'false'}"]
    if formulas is None:
        formulas = [(clause_formula(e.clause), e.weight) for e in kb.entries]
    for f, w in formulas:
        lines.append(f"{_fmt(w)} :: {render_formula(f)}")
    for s in kb.provenance:
        sup = " ; ".join(f"{_fmt(x.weight)} :: {render_clause(x.clause)}" for x in s.support)
        if s.after is None:
            lines.append(f"@removed {_fmt(s.weight)} :: {render_clause(s.before)} <= {sup}".rstrip())
        else:
            lines.append(f"@strengthened {_fmt(s.weight)} :: {render_clause(s.before)} "
                         f"=> {render_clause(s.after)} <= {sup}".rstrip())
    return "\n".join(lines) + "\n"
