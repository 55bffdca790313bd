"""MAP entailment, top-theta entailment and exact marginals over a
stratified knowledge base.

All model counts are over the knowledge base's full vocabulary.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .det import format_rational
from .formulas import Formula, render_clause, to_cnf
from .skb import StratifiedKB
from .solver import ClauseSet, count_models, entails, is_satisfiable

__all__ = [
    "MapResult", "TopThetaResult", "InconsistentEvidenceError", "NotSPKBError",
    "map_cutoff", "map_entails", "top_theta_levels", "top_theta_entails",
    "marginal", "format_map_report", "format_top_report", "format_marginal_report",
]


class InconsistentEvidenceError(ValueError):
    pass


class NotSPKBError(ValueError):
    pass


@dataclass(frozen=True)
class MapResult:
    cutoff: Fraction
    base: ClauseSet
    entailed: Optional[bool] = None
    sat_calls: int = 0


@dataclass(frozen=True)
class TopThetaResult:
    level_weight: Fraction
    theta: Fraction
    models: int
    evidence_models: int
    entailed: Optional[bool] = None


def _evidence_clauses(kb: StratifiedKB, evidence: Formula) -> tuple:
    clauses = to_cnf(evidence)
    ClauseSet(kb.vocab, clauses)  # vocabulary check
    return clauses


def map_cutoff(kb: StratifiedKB, evidence: Formula) -> MapResult:
    """Smallest cutoff ``w`` (a kb weight or 0) such that the evidence plus
    all clauses weighted strictly above ``w`` are consistent.

    The strata are binary searched: one call checks the evidence alone,
    then ``ceil(log2(k + 1))`` calls locate the deepest consistent prefix
    of the ``k`` strata.  The evidence always stays in the base, so when
    even the top stratum contradicts it the cutoff is that top weight and
    the base is the evidence alone.
    """
    ev = _evidence_clauses(kb, evidence)
    weights = kb.weights()
    strata = [[e.clause for e in kb.entries if e.weight == w] for w in weights]
    calls = 0

    def prefix(t):
        out = []
        for s in strata[:t]:
            out.extend(s)
        return ClauseSet(kb.vocab, out + list(ev))

    def consistent(t):
        nonlocal calls
        calls += 1
        return is_satisfiable(prefix(t)) is not None

    if not consistent(0):
        raise InconsistentEvidenceError("evidence is unsatisfiable")
    lo, hi = 0, len(strata)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if consistent(mid):
            lo = mid
        else:
            hi = mid - 1
    cutoff = Fraction(0) if lo == len(strata) else weights[lo]
    return MapResult(cutoff, prefix(lo), None, calls)


def map_entails(kb: StratifiedKB, evidence: Formula, query: Formula) -> MapResult:
    """Does ``query`` hold in every most-possible model of ``evidence``?"""
    r = map_cutoff(kb, evidence)
    return MapResult(r.cutoff, r.base, entails(r.base, query), r.sat_calls)


def top_theta_levels(kb: StratifiedKB, evidence: Formula) -> list:
    """One result per weight above the MAP cutoff, lowest weight first.

    Level ``l`` keeps the evidence and every clause of weight >= its
    weight; ``theta`` is that set's model count over the evidence's.
    """
    cut = map_cutoff(kb, evidence)
    ev = _evidence_clauses(kb, evidence)
    m_ev = count_models(ClauseSet(kb.vocab, ev))
    levels = sorted({w for w in kb.weights() if w > cut.cutoff} | ({1} if cut.cutoff < 1 else set()))
    out = []
    for w in levels:
        cs = ClauseSet(kb.vocab, kb.clauses_at_least(w) + list(ev))
        m = count_models(cs)
        out.append(TopThetaResult(Fraction(w), Fraction(m, m_ev), m, m_ev))
    return out


def _level_base(kb: StratifiedKB, evidence: Formula, weight) -> ClauseSet:
    return ClauseSet(kb.vocab, kb.clauses_at_least(weight) + list(to_cnf(evidence)))


def top_theta_entails(kb: StratifiedKB, evidence: Formula, query: Formula) -> Optional[TopThetaResult]:
    """The largest-theta level at which ``query`` is derivable, or None.

    Derivability only grows as levels are added, so the levels are tried
    from the top weight down and the first success has the largest theta.
    """
    levels = top_theta_levels(kb, evidence)
    for r in reversed(levels):
        if entails(_level_base(kb, evidence, r.level_weight), query):
            return TopThetaResult(r.level_weight, r.theta, r.models, r.evidence_models, True)
    return None


def marginal(kb: StratifiedKB, query: Formula) -> Fraction:
    """Exact ``P(query)`` from an SPKB by model counting.

    With ascending distinct weights ``w_1 < ... < w_k`` and ``M_i`` the
    models of the query plus all clauses of weight >= ``w_i``
    (``M_{k+1}`` the query's own models)::

        P = M_1 + sum_i (1 - w_i) * (M_{i+1} - M_i)

    ``M_1`` counts query worlds that violate nothing (possibility 1).
    """
    if not kb.is_probabilistic:
        raise NotSPKBError("marginals need a knowledge base flagged as probabilistic")
    qc = to_cnf(query)
    ClauseSet(kb.vocab, qc)
    weights = sorted(kb.weights())
    counts = [count_models(ClauseSet(kb.vocab, kb.clauses_at_least(w) + list(qc))) for w in weights]
    counts.append(count_models(ClauseSet(kb.vocab, qc)))
    total = Fraction(counts[0])
    for i, w in enumerate(weights):
        total += (1 - w) * (counts[i + 1] - counts[i])
    return total


# -- reports -----------------------------------------------------------------

def decimal_string(q: Fraction) -> str:
    s = format_rational(q)
    return s if "/" not in s else f"{float(q):.10g}"


def _fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def format_map_report(r: MapResult) -> str:
    lines = [f"verdict: {'entailed' if r.entailed else 'not entailed'}",
             f"cutoff: {format_rational(r.cutoff)}",
             f"sat calls: {r.sat_calls}",
             "base:"]
    lines += [f"  {render_clause(c)}" for c in r.base.clauses]
    return "\n".join(lines) + "\n"


def format_top_report(levels: list, hit: Optional[TopThetaResult]) -> str:
    lines = [f"verdict: {'entailed' if hit else 'not entailed'}"]
    if hit is not None:
        lines.append(f"theta: {_fraction(hit.theta)} ({decimal_string(hit.theta * 100)}%)")
        lines.append(f"level weight: {format_rational(hit.level_weight)}")
    lines.append("levels:")
    for r in levels:
        lines.append(f"  {format_rational(r.level_weight)}: theta {_fraction(r.theta)} "
                     f"({decimal_string(r.theta * 100)}%), {r.models}/{r.evidence_models} models")
    return "\n".join(lines) + "\n"


def format_marginal_report(p: Fraction) -> str:
    return f"marginal: {_fraction(p)} ({decimal_string(p)})\n"
