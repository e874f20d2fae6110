"""Command-line front end.

Subcommands: validate, analyze, combs, audit, dot, gen.  Exit codes:
0 success, 1 validation failure (diagnostics printed), 2 usage error,
3 internal inconsistency (an audit failed on valid input).

Reports are byte-deterministic for a given input and flags; rationals print
reduced as "p/q" and mappings are key-sorted.  `audit --gen` fans the trees
out across worker threads; NEWTON_FOREST_THREADS overrides the worker count
and the output order stays the seed order either way.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from .classify_audit import (
    audit_failures,
    is_rational_tree,
    rational_structure_report,
    theorem_audit,
)
from .errors import (
    GenerationError,
    InternalInconsistencyError,
    NewtonForestError,
    NotMinimallyCompleteError,
    ParseError,
    TreeStructureError,
)
from .multiplicity import classify, multiplicities
from .oracle_gen import GeneratorConfig, generate
from .report import Analysis, ValidationFailedError, analysis_to_dict, render_text
from .tree_io import export_dot, parse, serialize
from .tree_model import validate_axioms


def _read_tree(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse(fh.read())


def _classification_line(info) -> str:
    if info.minimally_complete:
        return "minimally complete"
    if info.complete:
        return "complete (not minimally complete)"
    if info.generic:
        return "generic (not complete)"
    return "valid axioms (not generic)"


def _cmd_validate(args) -> int:
    tree = _read_tree(args.file)
    diagnostics = validate_axioms(tree)
    if diagnostics:
        for d in diagnostics:
            print(str(d))
        return 1
    info = classify(tree, multiplicities(tree))
    print(_classification_line(info))
    for reason in info.reasons:
        print(f"  - {reason}")
    return 0


def _full_report(tree, z=None):
    analysis = Analysis.build(tree, z=z)
    audits = theorem_audit(analysis)
    classification = None
    if is_rational_tree(analysis):
        rep = rational_structure_report(analysis)
        classification = {
            "is_rational": rep.is_rational,
            "recognized": str(rep.recognized) if rep.recognized else None,
            "chain": list(rep.chain),
            "trichotomy_case": rep.trichotomy_case,
            "nd_shape": rep.nd_shape,
            "clauses": [
                {"check": c.check_id, "passed": c.passed, "witness": c.witness}
                for c in rep.clauses
            ],
        }
    return analysis, audits, classification


def _cmd_analyze(args) -> int:
    tree = _read_tree(args.file)
    analysis, audits, classification = _full_report(tree, z=args.z)
    doc = analysis_to_dict(analysis, audits=audits, classification=classification)
    if args.format == "json":
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        sys.stdout.write(render_text(doc))
    return 3 if audit_failures(audits) else 0


def _cmd_combs(args) -> int:
    tree = _read_tree(args.file)
    analysis = Analysis.build(tree, z=args.z)
    doc = analysis_to_dict(analysis)
    out = {
        "In": doc["structure"]["In"],
        "decompositions": doc["decompositions"],
    }
    print(json.dumps(out, indent=2, sort_keys=True))
    return 0


def _audit_one_file(args) -> int:
    tree = _read_tree(args.file)
    results = theorem_audit(tree)
    for r in results:
        status = "pass" if r.passed else "FAIL"
        line = f"{status}  {r.check_id}"
        if not r.passed:
            line += f"  [{r.witness}]"
        print(line)
    bad = audit_failures(results)
    print(f"{len(results)} checks, {len(bad)} failures")
    return 3 if bad else 0


def _audit_generated(args) -> int:
    seeds = list(range(args.seed, args.seed + args.gen))
    threads = int(os.environ.get("NEWTON_FOREST_THREADS", "1") or "1")

    def one(seed: int):
        tree = generate(GeneratorConfig(seed=seed, max_cells=args.max_cells))
        bad = audit_failures(theorem_audit(tree))
        return seed, len(tree.cells), [(r.check_id, r.witness) for r in bad]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one, seeds))
    else:
        rows = [one(s) for s in seeds]

    total_bad = 0
    for seed, n_cells, bad in rows:
        if bad:
            total_bad += len(bad)
            for check_id, witness in bad:
                print(f"seed {seed}: FAIL {check_id} [{witness}]")
    print(f"{len(seeds)} trees audited, {total_bad} failures")
    return 3 if total_bad else 0


def _cmd_audit(args) -> int:
    if args.gen is not None:
        return _audit_generated(args)
    if not args.file:
        print("audit: give a file or --gen N", file=sys.stderr)
        return 2
    return _audit_one_file(args)


def _cmd_dot(args) -> int:
    tree = _read_tree(args.file)
    report = None
    if args.with_report:
        report = Analysis.build(tree)
    sys.stdout.write(export_dot(tree, report))
    return 0


def _cmd_gen(args) -> int:
    config = GeneratorConfig(
        seed=args.seed, max_cells=args.max_cells, rational=args.rational
    )
    tree = generate(config)
    sys.stdout.write(serialize(tree))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="newton-forest",
        description="Exact invariants and theorem audits for decorated rooted trees",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the axioms and classify")
    p.add_argument("file")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("analyze", help="full invariant report")
    p.add_argument("file")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--z", default=None, help="initial vertex for the decomposition")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("combs", help="comb decompositions only")
    p.add_argument("file")
    p.add_argument("--z", default=None)
    p.set_defaults(func=_cmd_combs)

    p = sub.add_parser("audit", help="run the theorem audits")
    p.add_argument("file", nargs="?", default=None)
    p.add_argument("--gen", type=int, default=None, metavar="N")
    p.add_argument("--seed", type=int, default=0, metavar="S")
    p.add_argument("--max-cells", type=int, default=40, metavar="K")
    p.set_defaults(func=_cmd_audit)

    p = sub.add_parser("dot", help="Graphviz export")
    p.add_argument("file")
    p.add_argument("--with-report", action="store_true")
    p.set_defaults(func=_cmd_dot)

    p = sub.add_parser("gen", help="emit a generated tree document")
    p.add_argument("--seed", type=int, required=True, metavar="S")
    p.add_argument("--max-cells", type=int, default=40, metavar="K")
    p.add_argument("--rational", action="store_true")
    p.set_defaults(func=_cmd_gen)

    return parser


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ParseError, TreeStructureError, ValidationFailedError,
            NotMinimallyCompleteError) as exc:
        if isinstance(exc, ValidationFailedError):
            for d in exc.diagnostics:
                print(str(d), file=sys.stderr)
        else:
            print(str(exc), file=sys.stderr)
        return 1
    except GenerationError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except InternalInconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except ValueError as exc:  # e.g. --z naming a non-initial vertex
        print(str(exc), file=sys.stderr)
        return 2
    except NewtonForestError as exc:
        print(str(exc), file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
