import random

from stratkb.formulas import Atom, Clause, Literal, Vocabulary, evaluate, parse_formula
from stratkb.solver import ClauseSet, count_models, entails, is_satisfiable, to_dimacs
from stratkb.skb import parse_kb

from conftest import BIRDS_KB
from generators import brute_models, clause_holds, random_clauses, random_formula, vocab

TOY = Vocabulary(["Gardener", "HayFever", "Coughs"])
BIRDS = Vocabulary(["Bird", "Antarctic", "Flies"])


def cs_of(v, *texts):
    return ClauseSet.from_formulas(v, [parse_formula(t, v) for t in texts])


class TestSatisfiable:
    def test_gardener_coughs_inconsistent(self):
        cs = cs_of(TOY, "Gardener -> !HayFever", "Coughs -> HayFever", "Gardener", "Coughs")
        assert is_satisfiable(cs) is None

    def test_hayfever_consistent(self):
        cs = cs_of(TOY, "HayFever", "!Gardener | !HayFever", "!Coughs | HayFever")
        w = is_satisfiable(cs)
        assert w is not None
        assert all(clause_holds(c, w.bits, TOY) for c in cs)

    def test_empty_set(self):
        w = is_satisfiable(ClauseSet(TOY, []))
        assert w is not None and w.bits == 0

    def test_empty_clause(self):
        assert is_satisfiable(ClauseSet(TOY, [Clause(())])) is None


class TestEntails:
    def test_worked_examples(self):
        assert entails(cs_of(TOY, "HayFever", "Gardener -> !HayFever"), parse_formula("!Gardener", TOY))
        cs = cs_of(BIRDS, "!Bird | !Antarctic | !Flies", "!Bird | !Antarctic | Flies")
        assert entails(cs, parse_formula("!Bird | !Antarctic", BIRDS))

    def test_empty_does_not_entail_atom(self):
        assert not entails(ClauseSet(Vocabulary(["a"]), []), Atom("a"))


class TestCount:
    def test_empty_over_three_atoms(self):
        assert count_models(ClauseSet(BIRDS, [])) == 8

    def test_single_literal(self):
        assert count_models(ClauseSet(BIRDS, [Clause([Literal("Bird")])])) == 4

    def test_birds_hard_part_with_bird(self):
        kb = parse_kb(BIRDS_KB)
        clauses = kb.clauses_at_least(1) + [Clause([Literal("Bird")])]
        assert len(brute_models(BIRDS, clauses)) == 2
        assert count_models(ClauseSet(BIRDS, clauses)) == 2

    def test_large_vocabulary_exact(self):
        v = vocab(70)
        assert count_models(ClauseSet(v, [Clause([Literal("x0")])])) == 2 ** 69


def test_random_agreement_with_truth_tables():
    rng = random.Random(3)
    for _ in range(600):
        v = vocab(rng.randint(1, 12))
        clauses = random_clauses(rng, v.atoms, rng.randint(0, 3 * len(v)), max_len=3, allow_empty=rng.random() < 0.05)
        cs = ClauseSet(v, clauses)
        models = brute_models(v, clauses)
        w = is_satisfiable(cs)
        assert (w is None) == (not models)
        if w is not None:
            assert w.bits in models
        assert count_models(cs) == len(models)


def test_entails_matches_enumeration():
    rng = random.Random(5)
    for _ in range(300):
        v = vocab(rng.randint(1, 8))
        clauses = random_clauses(rng, v.atoms, rng.randint(0, 2 * len(v)))
        goal = random_formula(rng, v.atoms, depth=3)
        models = brute_models(v, clauses)
        expected = all(evaluate(goal, v.world(b)) for b in models)
        assert entails(ClauseSet(v, clauses), goal) == expected


def test_count_is_monotone():
    rng = random.Random(9)
    for _ in range(200):
        v = vocab(rng.randint(1, 10))
        clauses = random_clauses(rng, v.atoms, rng.randint(0, 15))
        extra = random_clauses(rng, v.atoms, 1)
        assert count_models(ClauseSet(v, clauses + extra)) <= count_models(ClauseSet(v, clauses))


def test_dedup_and_dimacs():
    c = Clause([Literal("Bird", False), Literal("Flies")])
    cs = ClauseSet(BIRDS, [c, Clause([Literal("Flies"), Literal("Bird", False)])])
    assert len(cs) == 1
    text = to_dimacs(cs)
    lines = [l for l in text.splitlines() if not l.startswith("c")]
    assert lines == ["p cnf 3 1", "-1 3 0"]
