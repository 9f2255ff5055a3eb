"""Command line entry point.

    fusionlab analyze --group builtin#S4 --p 2
    fusionlab verify --builtin --theorems A,B,C,kizmaz,generation,frobenius --out report.json
    fusionlab dump-fusion --group corpus.json#A4 --p 2 --out a4.json

Exit codes: 0 pass, 1 counterexample or invariant failure, 2 operational error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from ..errors import FusionLabError
from .corpus import builtin_corpus, load_corpus, resolve_group_spec
from .verify import THEOREMS, analyze, dump_fusion, run_suite, write_report

log = logging.getLogger("fusionlab")


def _emit(doc, out):
    if out:
        write_report(doc, out)
    else:
        print(json.dumps(doc, indent=2, sort_keys=True))


def _cmd_analyze(args) -> int:
    entry = resolve_group_spec(args.group)
    G = entry.build(args.max_order)
    _emit(analyze(G, args.p, entry.name), args.out)
    return 0


def _cmd_dump(args) -> int:
    entry = resolve_group_spec(args.group)
    G = entry.build(args.max_order)
    if G.order % args.p:
        raise FusionLabError(f"{args.p} does not divide |{entry.name}| = {G.order}")
    _emit(dump_fusion(G, args.p, entry.name), args.out)
    return 0


def _cmd_verify(args) -> int:
    if args.builtin:
        corpus, label = builtin_corpus(), "builtin"
    else:
        corpus, label = load_corpus(args.corpus), args.corpus
    theorems = [t.strip() for t in args.theorems.split(",") if t.strip()]
    code, doc = run_suite(
        corpus,
        theorems=theorems,
        p=args.p,
        jobs=args.jobs,
        out_path=args.out,
        max_order=args.max_order,
        include_even_p_exploratory=args.include_even_p_exploratory,
        corpus_label=label,
    )
    s = doc["summary"]
    log.info("%d records: %d pass, %d degenerate_pass, %d counterexample, %d skipped",
             len(doc["reports"]), s["pass"], s["degenerate_pass"], s["counterexample"], s["skipped"])
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fusionlab", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="summarize the p-local structure of one group")
    a.add_argument("--group", required=True, help="<corpus-path>#<name>, or builtin#<name>")
    a.add_argument("--p", type=int, required=True)
    a.add_argument("--max-order", type=int, default=1000)
    a.add_argument("--out")
    a.set_defaults(func=_cmd_analyze)

    v = sub.add_parser("verify", help="run theorem checks over a corpus")
    src = v.add_mutually_exclusive_group(required=True)
    src.add_argument("--corpus")
    src.add_argument("--builtin", action="store_true")
    v.add_argument("--theorems", default=",".join(THEOREMS))
    v.add_argument("--p", type=int)
    v.add_argument("--max-order", type=int, default=1000)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--include-even-p-exploratory", action="store_true")
    v.add_argument("--out", required=True)
    v.set_defaults(func=_cmd_verify)

    d = sub.add_parser("dump-fusion", help="hom-set sizes for every pair of subgroups of a Sylow")
    d.add_argument("--group", required=True)
    d.add_argument("--p", type=int, required=True)
    d.add_argument("--max-order", type=int, default=1000)
    d.add_argument("--out")
    d.set_defaults(func=_cmd_dump)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format="%(message)s")
    try:
        return args.func(args)
    except (FusionLabError, ValueError, OSError) as exc:
        log.error("error: %s", exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
