"""Batch front end: convert, validate, apply edit scripts, print yields, serve.

Exit codes: 0 success, 1 a validation or edit failure, 2 usage error.
Output files are written to a temporary sibling and renamed into place so
a failure never leaves a partial file behind.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .core import AgError, AnnotationGraph
from .formats.aif import emit_aif, parse_aif
from .formats.lcf import emit_lcf, parse_lcf
from .formats.table import (
    Column,
    TableConfig,
    emit_table,
    parse_table,
    parse_table_config,
)
from .formats.treebank import emit_treebank, parse_treebank
from .formats.treegraph import graph_to_tree, tree_to_graph
from .store import KINDS, apply_command, dump_doc, load_doc, open_store
from .trees import terminal_yield

FORMATS = ("ptb", "aif", "table", "lcf")

USAGE_EXIT = 2
FAILURE_EXIT = 1


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return FAILURE_EXIT


def _usage(message: str) -> int:
    print(f"usage error: {message}", file=sys.stderr)
    return USAGE_EXIT


def _write_atomic(path: str, text: str) -> None:
    final = Path(path)
    tmp = final.with_name(final.name + ".tmp")
    try:
        tmp.write_text(text, "utf-8")
        os.replace(tmp, final)
    except OSError:
        tmp.unlink(missing_ok=True)
        raise


def _read(path: str) -> str:
    return Path(path).read_text("utf-8")


# -- convert -------------------------------------------------------------------


def _load_table_config(path: str | None) -> TableConfig | None:
    if path is None:
        return None
    return parse_table_config(_read(path))


def _config_from_graph(graph: AnnotationGraph) -> TableConfig | None:
    """Recover column layout from a stored table document, when present."""
    for ann in graph.annotations.values():
        if ann.type != "config" or ann.features.get("@kind") != "table":
            continue
        columns = []
        for name, value in ann.features.items():
            if name.startswith("col:"):
                width = int(value) if value.isdigit() else 10
                columns.append(Column(name[4:], width))
        return TableConfig(
            delimiter=ann.features.get("@delimiter", ","),
            columns=columns,
            has_header=ann.features.get("@header", "") == "1",
        )
    return None


def _retype(graph: AnnotationGraph, source: str, target: str) -> AnnotationGraph:
    """Copy a graph with annotations of one type renamed to another."""
    out = AnnotationGraph(graph.id)
    for ident, anchor in graph.anchors.items():
        out.anchors[ident] = type(anchor)(ident, anchor.offset, anchor.unit)
    for ident, ann in graph.annotations.items():
        kind = target if ann.type == source else ann.type
        out.annotations[ident] = type(ann)(
            ident, kind, ann.start, ann.end, dict(ann.features)
        )
    out.sync_counters()
    return out


def _read_graphs(fmt: str, text: str, config: TableConfig | None) -> list:
    if fmt == "ptb":
        return [tree_to_graph(t, f"g{i + 1}") for i, t in enumerate(parse_treebank(text))]
    if fmt == "aif":
        return parse_aif(text)
    if fmt == "table":
        return [parse_table(text, config)]
    if fmt == "lcf":
        return [parse_lcf(text)]
    raise ValueError(fmt)


def cmd_convert(args) -> int:
    src, dst = args.source_format, args.target_format
    pair_ok = src == dst or "aif" in (src, dst) or {src, dst} == {"table", "lcf"}
    if not pair_ok:
        return _usage(f"cannot convert {src} to {dst} (no shared structure)")
    try:
        config = _load_table_config(args.table_config)
        if src == "table" and config is None:
            return _usage("reading a table needs --table-config")
        graphs = _read_graphs(src, _read(args.infile), config)
        if dst == "ptb":
            trees = [graph_to_tree(g) for g in graphs]
            output = emit_treebank(trees)
        elif dst == "aif":
            output = emit_aif(graphs)
        else:
            if len(graphs) != 1:
                return _fail(f"{dst} holds one graph, input has {len(graphs)}")
            graph = graphs[0]
            if dst == "table":
                if src == "lcf":
                    graph = _retype(graph, "segment", "row")
                if config is None:
                    config = _config_from_graph(graph)
                if config is None and src == "lcf":
                    config = TableConfig(columns=[Column("speaker"), Column("text")])
                if config is None:
                    return _usage("writing a table needs --table-config")
                output = emit_table(graph, config)
            else:
                if src == "table":
                    graph = _retype(graph, "row", "segment")
                output = emit_lcf(graph)
        _write_atomic(args.outfile, output)
    except (AgError, OSError) as exc:
        return _fail(str(exc))
    return 0


# -- validate --------------------------------------------------------------------


def cmd_validate(args) -> int:
    try:
        graphs = parse_aif(_read(args.infile))
    except (AgError, OSError) as exc:
        return _fail(str(exc))
    count = 0
    for graph in graphs:
        for violation in graph.validate():
            ids = " ".join(violation.ids)
            print(f"{violation.code}: {ids} {violation.detail}", file=sys.stderr)
            count += 1
    return 0 if count == 0 else FAILURE_EXIT


# -- apply -----------------------------------------------------------------------


def _sniff_kind(graph: AnnotationGraph) -> str | None:
    for ann in graph.annotations.values():
        if ann.type == "config":
            kind = ann.features.get("@kind")
            return kind if kind in KINDS else None
    types = {ann.type for ann in graph.annotations.values()}
    if not types or types <= {"syn", "pos", "wrd"}:
        return "tree"
    if types <= {"segment"}:
        return "segments"
    if types <= {"row"}:
        return "table"
    return None


def _read_script(path: str) -> list[dict]:
    commands = []
    for lineno, line in enumerate(_read(path).splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise AgError(f"script line {lineno}: {exc}") from None
        if not isinstance(record, dict) or not isinstance(record.get("op"), str):
            raise AgError(f"script line {lineno}: need an object with op")
        commands.append(record)
    return commands


def cmd_apply(args) -> int:
    try:
        payload = Path(args.infile).read_bytes()
        graphs = parse_aif(payload)
        if len(graphs) != 1:
            return _fail(f"expected one graph, found {len(graphs)}")
        kind = args.kind or _sniff_kind(graphs[0])
        if kind is None:
            return _usage("cannot tell the document kind; pass --kind")
        doc = load_doc(kind, payload)
        for command in _read_script(args.script):
            cmd_args = command.get("args", {})
            if "selection" in command:
                cmd_args = {"selection": command["selection"], **cmd_args}
            doc = apply_command(kind, doc, command["op"], cmd_args)
        _write_atomic(args.outfile, dump_doc(kind, doc).decode("utf-8"))
    except (AgError, OSError) as exc:
        return _fail(str(exc))
    return 0


# -- yield ------------------------------------------------------------------------


def cmd_yield(args) -> int:
    try:
        text = _read(args.infile)
        if text.lstrip().startswith("<"):
            trees = [graph_to_tree(g) for g in parse_aif(text)]
        else:
            trees = parse_treebank(text)
        for tree in trees:
            for token in terminal_yield(tree):
                print(token)
    except (AgError, OSError) as exc:
        return _fail(str(exc))
    return 0


# -- serve -------------------------------------------------------------------------


def cmd_serve(args) -> int:
    from .server import serve

    try:
        serve(open_store(args.root), args.bind)
    except AgError as exc:
        return _fail(str(exc))
    return 0


# -- entry -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="annograph",
        description="Convert, validate, edit and serve annotation graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="translate between file formats")
    p.add_argument("--from", dest="source_format", choices=FORMATS, required=True)
    p.add_argument("--to", dest="target_format", choices=FORMATS, required=True)
    p.add_argument("--table-config", help="column names/widths file")
    p.add_argument("infile")
    p.add_argument("outfile")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("validate", help="report structural violations")
    p.add_argument("infile")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("apply", help="run an edit script over a document")
    p.add_argument("--script", required=True, help="line-delimited JSON commands")
    p.add_argument("--kind", choices=KINDS, help="override kind detection")
    p.add_argument("infile")
    p.add_argument("outfile")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("yield", help="print terminal tokens, one per line")
    p.add_argument("infile")
    p.set_defaults(func=cmd_yield)

    p = sub.add_parser("serve", help="run the document edit service")
    p.add_argument("--root", required=True, help="store directory")
    p.add_argument("--bind", default="127.0.0.1:8000", help="host:port")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
