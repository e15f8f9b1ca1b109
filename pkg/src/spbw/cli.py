"""Command-line front end.

    spbw smooth FILE [--samples K] [--seed S] [--max-degree M] [--json PATH]
    spbw check pbw FILE
    spbw check hypotheses FILE
    spbw calculus check FILE
    spbw normalize FILE EXPR
    spbw gkdim FILE [--max-degree M]
    spbw report FILE --json PATH
    spbw corpus [--write DIR]

FILE is a path to a ``.spbw`` document or ``corpus:NAME`` for a built-in
entry.  Exit codes: 0 when a verdict or result was produced (including
not-certified), 1 when a check hard-failed, 2 on parse or configuration
errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .corpus import CORPUS_NAMES, corpus_doc, corpus_source
from .dsl import ParseError, build_presentation, parse_expression, parse_presentation
from .errors import SpbwError
from .gkdim import FAILED
from .pipeline import run_calculus_check, run_check_hypotheses, run_check_pbw, run_gkdim, run_smooth

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2


def _load_doc(spec: str):
    if spec.startswith("corpus:"):
        return corpus_doc(spec.split(":", 1)[1])
    return parse_presentation(Path(spec).read_text(encoding="utf-8"))


def _apply_overrides(doc, args):
    if getattr(args, "seed", None) is not None:
        doc.options["seed"] = args.seed
    if getattr(args, "samples", None) is not None:
        doc.options["samples"] = args.samples
    return doc


def _cmd_smooth(args) -> int:
    doc = _apply_overrides(_load_doc(args.file), args)
    if args.max_degree is not None:
        doc.options["gk_degree"] = args.max_degree
    report = run_smooth(doc)
    if args.json:
        Path(args.json).write_text(report.to_json(), encoding="utf-8")
    sys.stdout.write(report.human_text())
    return EXIT_CHECK_FAILED if report.verdict == FAILED else EXIT_OK


def _cmd_report(args) -> int:
    if not args.json:
        sys.stderr.write("report needs --json PATH\n")
        return EXIT_CONFIG
    return _cmd_smooth(args)


def _cmd_check(args) -> int:
    doc = _load_doc(args.file)
    if args.what == "pbw":
        if args.max_degree is not None:
            doc.options["pbw_degree"] = args.max_degree
        P, audit = run_check_pbw(doc)
        if audit.ok:
            print("pbw consistency: pass")
            return EXIT_OK
        print("pbw consistency: FAIL")
        print(f"  witness word: {audit.rendered}")
        print(f"  leftmost reduction:  {P.render(audit.left)}")
        print(f"  rightmost reduction: {P.render(audit.right)}")
        return EXIT_CHECK_FAILED
    _, rep = run_check_hypotheses(doc)
    rows = [
        ("sigma/delta commute per generator", rep.h1_sigma_delta_diag),
        ("deltas commute pairwise", rep.h2_delta_delta),
        ("deltas commute with sigmas", rep.h3_delta_sigma),
        ("deltas kill relation constants", rep.h4_delta_kills_constants),
        ("pair relations trivial", rep.t1_relations_trivial),
        ("sigmas commute pairwise", rep.t2_sigma_sigma),
    ]
    for label, ok in rows:
        print(f"  {label:<36} {'ok' if ok else 'FAIL'}")
    print(f"lift block: {'pass' if rep.proposition_ok else 'fail'}; "
          f"plain-twist block: {'pass' if rep.theorem_ok else 'fail'}")
    for f in rep.failures[:6]:
        print(f"  detail: {f}")
    return EXIT_OK if rep.proposition_ok else EXIT_CHECK_FAILED


def _cmd_calculus(args) -> int:
    doc = _load_doc(args.file)
    calc = run_calculus_check(doc)
    print(f"calculus: compatible, dimension {calc.N}")
    return EXIT_OK


def _cmd_normalize(args) -> int:
    doc = _load_doc(args.file)
    P = build_presentation(doc)
    result = parse_expression(doc, args.expr, P)
    print(P.render(result))
    return EXIT_OK


def _cmd_gkdim(args) -> int:
    doc = _load_doc(args.file)
    table, (est, diag) = run_gkdim(doc, args.max_degree)
    print(f"dimensions: {table.dims}")
    if est is None:
        print(f"estimate: ambiguous (differences say {diag.difference_degree}, "
              f"slope says {diag.slope_estimate}); raise --max-degree")
        return EXIT_CHECK_FAILED
    print(f"estimate: {est} ({diag.note})")
    return EXIT_OK


def _cmd_corpus(args) -> int:
    if args.write:
        target = Path(args.write)
        target.mkdir(parents=True, exist_ok=True)
        for name in CORPUS_NAMES:
            (target / f"{name}.spbw").write_text(corpus_source(name), encoding="utf-8")
        print(f"wrote {len(CORPUS_NAMES)} files to {target}")
        return EXIT_OK
    for name in CORPUS_NAMES:
        print(name)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spbw", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_file=True):
        if with_file:
            p.add_argument("file", help="path to a .spbw document, or corpus:NAME")
        p.add_argument("--max-degree", type=int, default=None)
        p.add_argument("--samples", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--json", default=None, help="also write the machine report here")

    p = sub.add_parser("smooth", help="run the full pipeline and print the verdict")
    common(p)
    p.set_defaults(fn=_cmd_smooth)

    p = sub.add_parser("report", help="run the pipeline and write the machine report")
    common(p)
    p.set_defaults(fn=_cmd_report)

    p = sub.add_parser("check", help="run one validation block")
    p.add_argument("what", choices=["pbw", "hypotheses"])
    common(p)
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("calculus", help="construct the calculus and verify compatibility")
    p.add_argument("what", choices=["check"])
    common(p)
    p.set_defaults(fn=_cmd_calculus)

    p = sub.add_parser("normalize", help="reduce one expression to normal form")
    p.add_argument("file", help="path to a .spbw document, or corpus:NAME")
    p.add_argument("expr")
    p.set_defaults(fn=_cmd_normalize)

    p = sub.add_parser("gkdim", help="growth table and dimension estimate")
    common(p)
    p.set_defaults(fn=_cmd_gkdim)

    p = sub.add_parser("corpus", help="list or materialize the built-in corpus")
    p.add_argument("--write", default=None, help="write the corpus files into this directory")
    p.set_defaults(fn=_cmd_corpus)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        sys.stderr.write(f"cannot read input: {exc}\n")
        return EXIT_CONFIG
    except KeyError as exc:
        sys.stderr.write(f"unknown corpus entry: {exc}\n")
        return EXIT_CONFIG
    except SpbwError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
