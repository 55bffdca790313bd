"""Command-line front end.

Exit codes: 0 success / entailed, 1 not entailed (or validation sum != 1),
2 usage, I/O or format errors.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .det import format_rational, learn_tree, read_csv, tree_from_json, tree_to_json, tree_to_skb
from .formulas import TRUE, parse_formula
from .inference import (
    decimal_string, format_map_report, format_marginal_report, format_top_report, map_entails,
    marginal, top_theta_entails, top_theta_levels,
)
from .skb import (
    check_provenance, format_kb, merge_top_levels, parse_kb, possibility_table,
    prune_exact, remove_formula, swap_certainty, to_implications, validate_spkb,
)

EXHAUSTIVE_LIMIT = 20


class CLIError(Exception):
    pass


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise CLIError(f"cannot read {path}: {e.strerror}") from None


def _emit(text: str, out) -> None:
    if out:
        try:
            Path(out).write_text(text, encoding="utf-8")
        except OSError as e:
            raise CLIError(f"cannot write {out}: {e.strerror}") from None
    else:
        sys.stdout.write(text)


def _load_kb(args):
    if not args.kb:
        raise CLIError("--kb is required")
    return parse_kb(_read(args.kb))


def _info(args, msg: str) -> None:
    if not args.quiet:
        print(msg, file=sys.stderr if not args.out else sys.stdout)


def cmd_learn(args) -> int:
    data = read_csv(args.data)
    tree = learn_tree(data, args.max_depth, args.min_leaf_rows)
    _emit(tree_to_json(tree), args.out)
    total = sum((br.p * (1 << (len(tree.vocab) - len(br.literals))) for br in tree.branches()), Fraction(0))
    _info(args, f"leaves: {tree.n_leaves}")
    _info(args, f"normalization: sum = {format_rational(total)} ({'ok' if total == 1 else 'FAILED'})")
    return 0


def cmd_compile(args) -> int:
    tree = tree_from_json(_read(args.tree))
    kb = tree_to_skb(tree)
    _emit(format_kb(kb), args.out)
    _info(args, f"entries: {len(kb)}")
    return 0


def cmd_prune(args) -> int:
    kb = _load_kb(args)
    mode = args.mode
    if mode == "exact":
        out = prune_exact(kb)
    elif mode.startswith("merge:"):
        try:
            levels = int(mode.split(":", 1)[1])
        except ValueError:
            raise CLIError(f"bad merge level count in {mode!r}") from None
        out = merge_top_levels(kb, levels)
    else:
        raise CLIError(f"unknown prune mode {mode!r} (use exact or merge:<levels>)")
    _emit(format_kb(out), args.out)
    _info(args, f"entries: {len(kb)} -> {len(out)}")
    if mode == "exact":
        if len(kb.vocab) <= EXHAUSTIVE_LIMIT:
            ok = possibility_table(kb) == possibility_table(out)
            _info(args, "pi preserved: verified" if ok else "pi preserved: FAILED")
            if not ok:
                return 2
        else:
            _info(args, "pi preserved: by construction")
    return 0


def cmd_query(args) -> int:
    kb = _load_kb(args)
    evidence = parse_formula(args.evidence, kb.vocab) if args.evidence else TRUE
    if args.kind == "marginal":
        if not args.query:
            raise CLIError("--query is required")
        p = marginal(kb, parse_formula(args.query, kb.vocab))
        sys.stdout.write(format_marginal_report(p))
        return 0
    if not args.query:
        raise CLIError("--query is required")
    query = parse_formula(args.query, kb.vocab)
    if args.kind == "map":
        r = map_entails(kb, evidence, query)
        sys.stdout.write(format_map_report(r))
        return 0 if r.entailed else 1
    levels = top_theta_levels(kb, evidence)
    hit = top_theta_entails(kb, evidence, query)
    sys.stdout.write(format_top_report(levels, hit))
    return 0 if hit else 1


def _index(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise CLIError(f"bad index {text!r}") from None


def cmd_edit(args) -> int:
    kb = _load_kb(args)
    action = args.action
    if action == "implications":
        _emit(format_kb(kb, to_implications(kb)), args.out)
        return 0
    if action.startswith("remove:"):
        i = _index(action.split(":", 1)[1])
        try:
            out = remove_formula(kb, i)
        except IndexError as e:
            raise CLIError(str(e)) from None
    elif action.startswith("swap:"):
        parts = action.split(":", 1)[1].split(",")
        if len(parts) != 2:
            raise CLIError("swap needs two indices, e.g. swap:2,3")
        try:
            out = swap_certainty(kb, _index(parts[0]), _index(parts[1]))
        except IndexError as e:
            raise CLIError(str(e)) from None
    else:
        raise CLIError(f"unknown edit action {action!r}")
    _emit(format_kb(out), args.out)
    if not args.quiet:
        if kb.is_probabilistic:
            print("warning: @spkb downgraded to false; weights would need relearning", file=sys.stderr)
        stale = check_provenance(out)
        if stale:
            print("warning: edit invalidates earlier pruning steps:", file=sys.stderr)
            for s in stale:
                print(f"  {s}", file=sys.stderr)
    return 0


def cmd_validate(args) -> int:
    kb = _load_kb(args)
    total = validate_spkb(kb, EXHAUSTIVE_LIMIT)
    print(f"sum of pi: {total.numerator}/{total.denominator} ({decimal_string(total)})")
    print("probability distribution: yes" if total == 1 else "probability distribution: no")
    return 0 if total == 1 else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kb", help="knowledge base file")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--quiet", action="store_true", help="suppress informational messages")

    p = argparse.ArgumentParser(prog="stratkb",
                                description="Density trees to stratified knowledge bases.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("learn", parents=[common], help="learn a density tree from CSV")
    s.add_argument("data")
    s.add_argument("--max-depth", type=int, default=8)
    s.add_argument("--min-leaf-rows", type=int, default=1)
    s.set_defaults(func=cmd_learn)

    s = sub.add_parser("compile", parents=[common], help="tree JSON to knowledge base")
    s.add_argument("tree")
    s.set_defaults(func=cmd_compile)

    s = sub.add_parser("prune", parents=[common], help="exact pruning or level merging")
    s.add_argument("--mode", default="exact", help="exact | merge:<levels>")
    s.set_defaults(func=cmd_prune)

    s = sub.add_parser("query", parents=[common], help="MAP, top-theta or marginal query")
    s.add_argument("kind", choices=["map", "top", "marginal"])
    s.add_argument("--evidence", default="true")
    s.add_argument("--query")
    s.set_defaults(func=cmd_query)

    s = sub.add_parser("edit", parents=[common], help="remove:<i> | swap:<i>,<j> | implications")
    s.add_argument("action")
    s.set_defaults(func=cmd_edit)

    s = sub.add_parser("validate", parents=[common], help="sum pi over all worlds")
    s.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        return args.func(args)
    except (CLIError, OSError, ValueError, IndexError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
