"""``ils`` command line.

Exit codes: 0 success, 1 usage error, 2 engine error. Engine errors are
printed to stderr as ``ils: error[<ErrorClass>]: <message>``.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Sequence, TextIO

from .embedder import embed_corpus
from .errors import IlsError, UnknownNode
from .lifecycle import FadePolicy, fade_tick, recreate_link
from .parser import (
    RelationTable,
    default_relation_table,
    load_relation_table,
    parse_corpus,
    validate_all,
)
from .reports import report_cones, report_stats, report_table2
from .retriever import DEFAULT_MAX_DEPTH, build_cone, find_thread
from .store import Store, restore, snapshot, system_stats

RELATIONS_ENV = "ILS_RELATIONS"
DEFAULT_DOMAIN = "general"


class UsageError(Exception):
    def __init__(self, message: str, usage: str = "") -> None:
        super().__init__(message)
        self.usage = usage


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise UsageError(message, self.format_usage())


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--store", metavar="PATH", help="snapshot file")
    common.add_argument("--relations", metavar="PATH", help=f"relation table (fallback ${RELATIONS_ENV})")
    common.add_argument("--domain", metavar="NAME")
    common.add_argument("--max-depth", type=_positive, default=DEFAULT_MAX_DEPTH)
    common.add_argument("--format", choices=("csv", "text"), default=None)

    parser = _Parser(prog="ils", description="Informledge knowledge network engine.")
    sub = parser.add_subparsers(dest="verb", metavar="VERB", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("embed", parents=[common], help="embed corpus files into the store")
    p.add_argument("corpus", nargs="+")

    p = sub.add_parser("cone", parents=[common], help="retrieve knowledge cones")
    p.add_argument("labels", nargs="+", metavar="label")

    p = sub.add_parser("thread", parents=[common], help="find a thread between two labels")
    p.add_argument("--from", dest="from_label", required=True)
    p.add_argument("--to", dest="to_label", required=True)

    sub.add_parser("stats", parents=[common], help="per-domain node counts")

    p = sub.add_parser("fade", parents=[common], help="fade idle links or recreate faded ones")
    p.add_argument("--min-usage", type=_positive)
    p.add_argument("--window", type=_positive)
    p.add_argument("--recreate", type=int, action="append", metavar="LINK_ID", default=[])

    sub.add_parser("dump", parents=[common], help="print the store snapshot")

    p = sub.add_parser("load", parents=[common], help="validate a snapshot and install it as the store")
    p.add_argument("snapshot")

    p = sub.add_parser("report", parents=[common], help="CSV reports")
    p.add_argument("kind", choices=("table2", "cones"))
    p.add_argument("inputs", nargs="+", metavar="input", help="corpus files (table2) or labels (cones)")
    return parser


# -- helpers ---------------------------------------------------------------


def _relations(args) -> RelationTable:
    path = args.relations or os.environ.get(RELATIONS_ENV)
    if not path:
        return default_relation_table()
    return load_relation_table(Path(path).read_text(encoding="utf-8"))


def _require_store_path(args) -> Path:
    if not args.store:
        raise UsageError(f"{args.verb}: --store is required")
    return Path(args.store)


def _open_store(args, missing_ok: bool = False) -> Store:
    path = _require_store_path(args)
    if not path.exists():
        if missing_ok:
            return Store()
        raise FileNotFoundError(f"no store at {path}")
    return restore(path.read_text(encoding="utf-8"))


def _save_store(args, store: Store) -> None:
    path = _require_store_path(args)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(snapshot(store), encoding="utf-8")
    os.replace(tmp, path)


def _read_corpora(args, paths: Sequence[str]):
    statements = []
    for path in paths:
        statements.extend(parse_corpus(Path(path).read_text(encoding="utf-8"), args.domain or DEFAULT_DOMAIN))
    return statements


# -- verbs -----------------------------------------------------------------


def _cmd_embed(args, out: TextIO) -> None:
    store = _open_store(args, missing_ok=True)
    table = _relations(args)
    statements = _read_corpora(args, args.corpus)
    validate_all(statements, table)
    results = embed_corpus(store, statements, table)
    _save_store(args, store)
    if args.format == "csv":
        out.write(report_table2(results))
        return
    nodes = sum(r.nodes_added for r, _ in results)
    links = sum(r.links_added for r, _ in results)
    out.write(f"embedded {len(results)} statements: {nodes} nodes added, {links} links added\n")


def _cmd_cone(args, out: TextIO) -> None:
    store = _open_store(args)
    if args.format == "csv":
        out.write(report_cones(store, args.labels, args.domain, args.max_depth, record=True))
    else:
        for label in args.labels:
            hits = store.resolve_label(label, args.domain)
            if not hits:
                raise UnknownNode(f"no node labelled {label!r}")
            cone = build_cone(store, hits[0], args.max_depth)
            out.write(f"{cone.apex_label} {store.nodes[cone.apex].coord} height={cone.height}\n")
            for thread in cone.threads:
                out.write(f"  {thread.render(store)}\n")
    _save_store(args, store)


def _cmd_thread(args, out: TextIO, err: TextIO) -> None:
    store = _open_store(args)
    thread = find_thread(store, args.from_label, args.to_label, args.domain, args.max_depth)
    if thread is None:
        err.write(f"ils: no thread from {args.from_label!r} to {args.to_label!r}\n")
        return
    out.write(thread.render(store) + "\n")
    _save_store(args, store)


def _cmd_stats(args, out: TextIO) -> None:
    store = _open_store(args)
    stats = system_stats(store)
    if args.format == "csv":
        out.write(report_stats(stats, store))
        return
    out.write(f"domains: {stats.domain_count}\n")
    for (name, count), (_, l) in zip(stats.knowledge, store.domains_by_l()):
        out.write(f"  {name} (l={l}): {count} nodes\n")
    out.write(f"nodes: {stats.total_nodes}\n")
    out.write(f"links: {stats.active_links} active, {stats.faded_links} faded\n")


def _cmd_fade(args, out: TextIO) -> None:
    fading = args.min_usage is not None or args.window is not None
    if fading and (args.min_usage is None or args.window is None):
        raise UsageError("fade: --min-usage and --window go together")
    if not fading and not args.recreate:
        raise UsageError("fade: give --min-usage/--window or --recreate")
    store = _open_store(args)
    for link_id in args.recreate:
        recreate_link(store, link_id)
        out.write(f"recreated {link_id}\n")
    if fading:
        report = fade_tick(store, FadePolicy(args.window, args.min_usage), store.tick)
        for link_id in report.faded:
            out.write(f"faded {link_id}\n")
    _save_store(args, store)


def _cmd_load(args) -> None:
    store = restore(Path(args.snapshot).read_text(encoding="utf-8"))
    _save_store(args, store)


def _cmd_report(args, out: TextIO) -> None:
    if args.kind == "table2":
        store = _open_store(args, missing_ok=True) if args.store else Store()
        table = _relations(args)
        statements = _read_corpora(args, args.inputs)
        validate_all(statements, table)
        out.write(report_table2(embed_corpus(store, statements, table)))
    else:
        store = _open_store(args)
        out.write(report_cones(store, args.inputs, args.domain, args.max_depth))


def run(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.verb == "embed":
            _cmd_embed(args, out)
        elif args.verb == "cone":
            _cmd_cone(args, out)
        elif args.verb == "thread":
            _cmd_thread(args, out, err)
        elif args.verb == "stats":
            _cmd_stats(args, out)
        elif args.verb == "fade":
            _cmd_fade(args, out)
        elif args.verb == "dump":
            out.write(snapshot(_open_store(args)))
        elif args.verb == "load":
            _cmd_load(args)
        elif args.verb == "report":
            _cmd_report(args, out)
    except UsageError as exc:
        err.write(exc.usage or parser.format_usage())
        err.write(f"ils: usage error: {exc}\n")
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except IlsError as exc:
        err.write(f"ils: error[{type(exc).__name__}]: {exc}\n")
        return 2
    except OSError as exc:
        err.write(f"ils: error[{type(exc).__name__}]: {exc}\n")
        return 2
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
