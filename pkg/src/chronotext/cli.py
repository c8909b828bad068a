"""Command-line front end.

Subcommands: check, close, query, adapt, workflow, timeml.  Input kind
follows the file extension: .rcp recipe DSL, .tml annotation markup,
.know domain knowledge.  Results go to stdout, diagnostics to stderr.
Exit codes: 0 consistent, 1 inconsistent, 2 parse or usage error,
3 scale bound exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .adaptation import (
    adapt_recipe,
    format_edits,
    format_revision,
    parse_knowledge,
)
from .allen import close, format_qcn
from .annotation import (
    AnnotationError,
    RecipeSyntaxError,
    doc_to_qcn,
    parse_recipe_dsl,
    parse_timeml,
)
from .hybrid import HybridNetwork, format_hybrid, hybrid_close
from .metric import ScaleBoundExceeded, start_of
from .recipe import encode_recipe
from .workflow import emit_dot, recipe_workflow, to_workflow


def _scenarios(path: Path) -> list[tuple[str, HybridNetwork]]:
    """Every scenario of the file as (label, raw hybrid network)."""
    text = path.read_text()
    if path.suffix == ".rcp":
        return encode_recipe(parse_recipe_dsl(text))
    if path.suffix == ".tml":
        qcn = doc_to_qcn(parse_timeml(text))
        ids = qcn.intervals
        triples = [(a, qcn.cell(a, b), b)
                   for i, a in enumerate(ids) for b in ids[i + 1:]]
        return [("document", HybridNetwork.build(ids, triples))]
    raise RecipeSyntaxError(f"unsupported file extension {path.suffix!r}")


def _cmd_check(args) -> int:
    bad = False
    for label, h in _scenarios(Path(args.file)):
        closed = hybrid_close(h)
        bad = bad or closed.inconsistent
        state = "inconsistent" if closed.inconsistent else "consistent"
        print(f"scenario {label}: {state}")
    return 1 if bad else 0


def _cmd_close(args) -> int:
    bad = False
    for label, h in _scenarios(Path(args.file)):
        closed = hybrid_close(h)
        bad = bad or closed.inconsistent
        print(f"scenario {label}")
        sys.stdout.write(format_hybrid(closed))
    return 1 if bad else 0


def _cmd_query(args) -> int:
    bad = False
    for label, h in _scenarios(Path(args.file)):
        for name in (args.a, args.b):
            if name not in h.intervals:
                raise KeyError(f"unknown interval {name!r}")
        closed = hybrid_close(h)
        print(f"scenario {label}")
        if closed.inconsistent:
            bad = True
            print("inconsistent")
            continue
        print(str(closed.relation(args.a, args.b)))
        w = closed.point_window(start_of(args.a), start_of(args.b))
        print(f"start({args.b}) - start({args.a}) in {w}")
    return 1 if bad else 0


def _cmd_adapt(args) -> int:
    recipe_path, know_path = Path(args.recipe), Path(args.knowledge)
    if recipe_path.suffix != ".rcp":
        raise RecipeSyntaxError("adapt expects a .rcp recipe")
    if know_path.suffix != ".know":
        raise RecipeSyntaxError("adapt expects a .know knowledge file")
    recipe = parse_recipe_dsl(recipe_path.read_text())
    knowledge = parse_knowledge(know_path.read_text())
    result, edits = adapt_recipe(recipe, knowledge)
    sys.stdout.write(format_revision(result))
    sys.stdout.write(format_edits(edits))
    return 0


def _cmd_workflow(args) -> int:
    path = Path(args.file)
    if path.suffix == ".rcp":
        graph = recipe_workflow(parse_recipe_dsl(path.read_text()))
    else:
        (label, h), = _scenarios(path)
        closed = hybrid_close(h)
        if closed.inconsistent:
            raise ValueError("annotation network is inconsistent")
        graph = to_workflow([(label, closed)])
    sys.stdout.write(emit_dot(graph))
    return 0


def _cmd_timeml(args) -> int:
    path = Path(args.file)
    if path.suffix != ".tml":
        raise RecipeSyntaxError("timeml expects a .tml file")
    qcn = doc_to_qcn(parse_timeml(path.read_text()))
    sys.stdout.write(format_qcn(qcn))
    closed = close(qcn)
    print("inconsistent" if closed.inconsistent else "consistent")
    return 1 if closed.inconsistent else 0


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chronotext",
        description="Temporal reasoning over recipe texts.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, helptext in (
            ("check", "parse, encode and close; report consistency"),
            ("close", "print the minimal network per scenario"),
            ("workflow", "print the workflow graph in dot form"),
            ("timeml", "parse annotation markup; print the network")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("file")
    sub.choices["check"].set_defaults(func=_cmd_check)
    sub.choices["close"].set_defaults(func=_cmd_close)
    sub.choices["workflow"].set_defaults(func=_cmd_workflow)
    sub.choices["timeml"].set_defaults(func=_cmd_timeml)

    q = sub.add_parser("query", help="closed relation and start offset "
                                     "window between two intervals")
    q.add_argument("file")
    q.add_argument("a")
    q.add_argument("b")
    q.set_defaults(func=_cmd_query)

    a = sub.add_parser("adapt", help="revise a recipe against a "
                                     "knowledge file; print the edits")
    a.add_argument("recipe")
    a.add_argument("knowledge")
    a.set_defaults(func=_cmd_adapt)
    return parser


def run(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except ScaleBoundExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (RecipeSyntaxError, AnnotationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
