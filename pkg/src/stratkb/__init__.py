"""Stratified possibilistic knowledge bases compiled from density
estimation trees, with SAT-based pruning and MAP / top-theta / marginal
queries."""
from .formulas import (
    FALSE, TRUE, And, Atom, Clause, Formula, FormulaSyntaxError, Implies, Literal,
    Not, Or, UnknownAtomError, Vocabulary, World, evaluate, parse_formula,
    render_formula, to_cnf,
)
from .solver import ClauseSet, count_models, entails, is_satisfiable, to_dimacs
from .skb import (
    StratifiedKB, WeightedClause, check_provenance, evaluate_possibility,
    format_kb, merge_top_levels, parse_kb, possibility_table, prune_exact,
    remove_formula, stratify, swap_certainty, to_implications, validate_spkb,
)
from .det import (
    DataSet, DensityTree, Leaf, Split, learn_tree, read_csv, tree_from_json,
    tree_to_json, tree_to_skb, world_density,
)
from .inference import (
    InconsistentEvidenceError, NotSPKBError, format_map_report, format_marginal_report,
    format_top_report, map_cutoff, map_entails, marginal, top_theta_entails, top_theta_levels,
)

__version__ = "0.1.0"

__all__ = [
    "FALSE",
    "TRUE",
    "And",
    "Atom",
    "Clause",
    "Formula",
    "FormulaSyntaxError",
    "Implies",
    "Literal",
    "Not",
    "Or",
    "UnknownAtomError",
    "Vocabulary",
    "World",
    "evaluate",
    "parse_formula",
    "render_formula",
    "to_cnf",
    "ClauseSet",
    "count_models",
    "entails",
    "is_satisfiable",
    "to_dimacs",
    "StratifiedKB",
    "WeightedClause",
    "check_provenance",
    "evaluate_possibility",
    "format_kb",
    "merge_top_levels",
    "parse_kb",
    "possibility_table",
    "prune_exact",
    "remove_formula",
    "stratify",
    "swap_certainty",
    "to_implications",
    "validate_spkb",
    "DataSet",
    "DensityTree",
    "Leaf",
    "Split",
    "learn_tree",
    "read_csv",
    "tree_from_json",
    "tree_to_json",
    "tree_to_skb",
    "world_density",
    "InconsistentEvidenceError",
    "NotSPKBError",
    "format_map_report",
    "format_marginal_report",
    "format_top_report",
    "map_cutoff",
    "map_entails",
    "marginal",
    "top_theta_entails",
    "top_theta_levels",
]
