"""Propositional formulas over a fixed vocabulary.

Formulas are immutable trees built from :class:`Atom`, :class:`Not`,
:class:`And`, :class:`Or`, :class:`Implies` and the two constants
:data:`TRUE` / :data:`FALSE`.  Text syntax::

    formula := impl
    impl    := or ("->" impl)?
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := "!" unary | "(" formula ")" | atom | "true" | "false"

Worlds are bit patterns in vocabulary order (atom 0 is the least
significant bit).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence, Union

__all__ = [
    "Vocabulary", "World", "Formula", "Atom", "Not", "And", "Or", "Implies",
    "Const", "TRUE", "FALSE", "Literal", "Clause", "FormulaSyntaxError",
    "UnknownAtomError", "parse_formula", "render_formula", "render_clause",
    "to_cnf", "evaluate", "atoms_of", "clause_formula",
]

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_KEYWORDS = frozenset({"true", "false"})


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, offset: int, text: str = ""):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.text = text


class UnknownAtomError(ValueError):
    def __init__(self, name: str, offset: Optional[int] = None):
        where = f" at offset {offset}" if offset is not None else ""
        super().__init__(f"unknown atom {name!r}{where}")
        self.name = name
        self.offset = offset


class Vocabulary:
    """Ordered set of atom names; the order fixes world bit positions."""

    __slots__ = ("atoms", "_index")

    def __init__(self, atoms: Iterable[str]):
        atoms = tuple(atoms)
        for a in atoms:
            if not isinstance(a, str) or not _IDENT.fullmatch(a) or a in _KEYWORDS:
                raise ValueError(f"invalid atom name {a!r}")
        if len(set(atoms)) != len(atoms):
            raise ValueError("duplicate atom names in vocabulary")
        self.atoms = atoms
        self._index = {a: i for i, a in enumerate(atoms)}

    def __len__(self) -> int:
        return len(self.atoms)

    def __iter__(self) -> Iterator[str]:
        return iter(self.atoms)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Vocabulary) and self.atoms == other.atoms

    def __hash__(self) -> int:
        return hash(self.atoms)

    def __repr__(self) -> str:
        return f"Vocabulary({list(self.atoms)!r})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownAtomError(name) from None

    @property
    def size(self) -> int:
        """Number of worlds, ``2 ** len(self)``."""
        return 1 << len(self.atoms)

    def world(self, assignment: Union[int, dict]) -> "World":
        """Build a world from a bitmask or an ``{atom: bool}`` mapping."""
        if isinstance(assignment, int):
            return World(self, assignment)
        if set(assignment) != set(self.atoms):
            raise ValueError("assignment must cover exactly the vocabulary")
        bits = 0
        for name, value in assignment.items():
            if value:
                bits |= 1 << self._index[name]
        return World(self, bits)

    def worlds(self) -> Iterator["World"]:
        for bits in range(self.size):
            yield World(self, bits)


@dataclass(frozen=True)
class World:
    vocab: Vocabulary
    bits: int

    def __post_init__(self):
        if not 0 <= self.bits < self.vocab.size:
            raise ValueError("world bits out of range for vocabulary")

    def __getitem__(self, name: str) -> bool:
        return bool(self.bits >> self.vocab.index(name) & 1)

    def as_dict(self) -> dict:
        return {a: bool(self.bits >> i & 1) for i, a in enumerate(self.vocab.atoms)}

    def __repr__(self) -> str:
        lits = [a if self.bits >> i & 1 else "!" + a for i, a in enumerate(self.vocab.atoms)]
        return f"World({', '.join(lits)})"


# -- formula trees -----------------------------------------------------------

class Formula:
    __slots__ = ()

    def __and__(self, other: "Formula") -> "Formula":
        return And((self, other))

    def __or__(self, other: "Formula") -> "Formula":
        return Or((self, other))

    def __invert__(self) -> "Formula":
        return Not(self)

    def __rshift__(self, other: "Formula") -> "Formula":
        return Implies(self, other)

    def __str__(self) -> str:
        return render_formula(self)


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    name: str

    def __repr__(self):
        return f"Atom({self.name})"


@dataclass(frozen=True, repr=False)
class Const(Formula):
    value: bool

    def __repr__(self):
        return "TRUE" if self.value else "FALSE"


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True, repr=False)
class Not(Formula):
    child: Formula

    def __repr__(self):
        return f"Not({self.child!r})"


@dataclass(frozen=True, repr=False)
class And(Formula):
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise ValueError("And needs at least one child")

    def __repr__(self):
        return f"And({', '.join(map(repr, self.children))})"


@dataclass(frozen=True, repr=False)
class Or(Formula):
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise ValueError("Or needs at least one child")

    def __repr__(self):
        return f"Or({', '.join(map(repr, self.children))})"


@dataclass(frozen=True, repr=False)
class Implies(Formula):
    antecedent: Formula
    consequent: Formula

    def __repr__(self):
        return f"Implies({self.antecedent!r}, {self.consequent!r})"


def atoms_of(f: Formula) -> set:
    if isinstance(f, Atom):
        return {f.name}
    if isinstance(f, Const):
        return set()
    if isinstance(f, Not):
        return atoms_of(f.child)
    if isinstance(f, Implies):
        return atoms_of(f.antecedent) | atoms_of(f.consequent)
    return set().union(*(atoms_of(c) for c in f.children))


# -- clauses -----------------------------------------------------------------

@dataclass(frozen=True)
class Literal:
    atom: str
    positive: bool = True

    def negate(self) -> "Literal":
        return Literal(self.atom, not self.positive)

    def formula(self) -> Formula:
        return Atom(self.atom) if self.positive else Not(Atom(self.atom))

    def __str__(self):
        return self.atom if self.positive else "!" + self.atom


class TautologyError(ValueError):
    pass


class Clause:
    """Disjunction of literals.

    Equality and hashing ignore literal order, but the order given at
    construction is kept for display and for order-dependent heuristics
    (pruning, implication conversion).  Building a clause that contains
    both polarities of an atom raises :class:`TautologyError`; use
    :meth:`make` to get ``None`` instead.
    """

    __slots__ = ("literals", "_key")

    def __init__(self, literals: Iterable[Literal] = ()):
        seen = {}
        for lit in literals:
            prev = seen.get(lit.atom)
            if prev is None:
                seen[lit.atom] = lit
            elif prev.positive != lit.positive:
                raise TautologyError(f"clause contains {lit.atom} with both polarities")
        self.literals = tuple(seen.values())
        self._key = frozenset(self.literals)

    @classmethod
    def make(cls, literals: Iterable[Literal]) -> Optional["Clause"]:
        try:
            return cls(literals)
        except TautologyError:
            return None

    def __eq__(self, other):
        return isinstance(other, Clause) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __len__(self):
        return len(self.literals)

    def __iter__(self):
        return iter(self.literals)

    def __contains__(self, lit):
        return lit in self._key

    def __repr__(self):
        return f"Clause({render_clause(self)})"

    def __str__(self):
        return render_clause(self)

    def without(self, lit: Literal) -> "Clause":
        return Clause(l for l in self.literals if l != lit)

    def subsumes(self, other: "Clause") -> bool:
        return self._key <= other._key

    def atoms(self) -> set:
        return {l.atom for l in self.literals}


def clause_formula(c: Clause) -> Formula:
    if not c.literals:
        return FALSE
    if len(c.literals) == 1:
        return c.literals[0].formula()
    return Or(tuple(l.formula() for l in c.literals))


def render_clause(c: Clause) -> str:
    return render_formula(clause_formula(c))


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(->)|([!&|()])|([A-Za-z_][A-Za-z0-9_]*))")


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start(m.lastindex)
        tokens.append((m.group(m.lastindex), start))
        pos = m.end()
    tokens.append(("", n))
    return tokens


class _Parser:
    def __init__(self, text: str, vocab: Optional[Vocabulary]):
        self.text = text
        self.vocab = vocab
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def offset(self) -> int:
        return self.tokens[self.i][1]

    def expect(self, tok: str):
        if self.peek() != tok:
            found = self.peek() or "end of input"
            raise FormulaSyntaxError(f"expected {tok!r}, found {found!r}", self.offset(), self.text)
        self.i += 1

    def parse(self) -> Formula:
        f = self.impl()
        if self.peek() != "":
            raise FormulaSyntaxError(f"unexpected {self.peek()!r}", self.offset(), self.text)
        return f

    def impl(self) -> Formula:
        left = self.disj()
        if self.peek() == "->":
            self.i += 1
            return Implies(left, self.impl())
        return left

    def disj(self) -> Formula:
        parts = [self.conj()]
        while self.peek() == "|":
            self.i += 1
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conj(self) -> Formula:
        parts = [self.unary()]
        while self.peek() == "&":
            self.i += 1
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self) -> Formula:
        tok, off = self.tokens[self.i]
        if tok == "!":
            self.i += 1
            return Not(self.unary())
        if tok == "(":
            self.i += 1
            f = self.impl()
            self.expect(")")
            return f
        if tok == "true":
            self.i += 1
            return TRUE
        if tok == "false":
            self.i += 1
            return FALSE
        if tok and _IDENT.fullmatch(tok):
            if self.vocab is not None and tok not in self.vocab:
                raise UnknownAtomError(tok, off)
            self.i += 1
            return Atom(tok)
        raise FormulaSyntaxError(f"expected a formula, found {tok or 'end of input'!r}", off, self.text)


def parse_formula(text: str, vocab: Optional[Vocabulary] = None) -> Formula:
    """Parse ``text``; atoms are checked against ``vocab`` when one is given."""
    return _Parser(text, vocab).parse()


# -- rendering ---------------------------------------------------------------

_PREC = {Implies: 1, Or: 2, And: 3}


def _unwrap(f: Formula) -> Formula:
    while isinstance(f, (And, Or)) and len(f.children) == 1:
        f = f.children[0]
    return f


def render_formula(f: Formula) -> str:
    """Render with minimal parentheses; nested same-operator n-ary nodes
    keep their parentheses so the tree shape survives a round trip."""
    f = _unwrap(f)
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Not):
        c = _unwrap(f.child)
        inner = render_formula(c)
        return "!" + (f"({inner})" if type(c) in _PREC else inner)
    if isinstance(f, Implies):
        a, b = _unwrap(f.antecedent), _unwrap(f.consequent)
        ra, rb = render_formula(a), render_formula(b)
        if isinstance(a, Implies):
            ra = f"({ra})"
        return f"{ra} -> {rb}"
    op = " & " if isinstance(f, And) else " | "
    prec = _PREC[type(f)]
    parts = []
    for c in f.children:
        c = _unwrap(c)
        s = render_formula(c)
        if type(c) in _PREC and _PREC[type(c)] <= prec:
            s = f"({s})"
        parts.append(s)
    return op.join(parts)


# -- semantics ---------------------------------------------------------------

def _eval_bits(f: Formula, bits: int, index) -> bool:
    if isinstance(f, Atom):
        return bool(bits >> index(f.name) & 1)
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return not _eval_bits(f.child, bits, index)
    if isinstance(f, And):
        return all(_eval_bits(c, bits, index) for c in f.children)
    if isinstance(f, Or):
        return any(_eval_bits(c, bits, index) for c in f.children)
    if isinstance(f, Implies):
        return (not _eval_bits(f.antecedent, bits, index)) or _eval_bits(f.consequent, bits, index)
    raise TypeError(f"not a formula: {f!r}")


def evaluate(f: Formula, w: World) -> bool:
    return _eval_bits(f, w.bits, w.vocab.index)


# -- CNF ---------------------------------------------------------------------

def _nnf_cnf(f: Formula, positive: bool) -> list:
    """CNF of ``f`` (or of ``!f`` when ``positive`` is false) as a list of
    literal tuples; tautologies are removed as they appear."""
    if isinstance(f, Atom):
        return [(Literal(f.name, positive),)]
    if isinstance(f, Const):
        return [] if f.value == positive else [()]
    if isinstance(f, Not):
        return _nnf_cnf(f.child, not positive)
    if isinstance(f, Implies):
        f = Or((Not(f.antecedent), f.consequent))
    conjunctive = isinstance(f, And) == positive
    parts = [_nnf_cnf(c, positive) for c in f.children]
    if conjunctive:
        return [cl for p in parts for cl in p]
    # disjunction: distribute
    acc = [()]
    for p in parts:
        nxt = []
        for left in acc:
            for right in p:
                merged = left + right
                if _tautological(merged):
                    continue
                nxt.append(merged)
        acc = nxt
        if not acc:
            break
    return acc


def _tautological(lits: Sequence[Literal]) -> bool:
    seen = {}
    for l in lits:
        if seen.setdefault(l.atom, l.positive) != l.positive:
            return True
    return False


def to_cnf(f: Formula) -> tuple:
    """Equivalent clause set by distribution (no auxiliary atoms).

    Returns a tuple of distinct non-tautological clauses in a
    deterministic order.
    """
    out = {}
    for lits in _nnf_cnf(f, True):
        c = Clause.make(lits)
        if c is not None:
            out.setdefault(c, None)
    return tuple(out)


def truth_table(f: Formula, vocab: Vocabulary) -> tuple:
    index = vocab.index
    return tuple(_eval_bits(f, bits, index) for bits in range(vocab.size))
