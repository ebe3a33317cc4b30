"""File-backed document registry with optimistic-concurrency edits.

Each document is one annotation graph persisted as canonical XML in
``<doc_id>.aif`` beside a two-line ``<doc_id>.meta`` (kind, then revision).
Edits are parse-modify-reemit under a per-document lock: the payload is
decoded into the owning editor, the operation dispatched, and the result
serialized back only on success, so a rejected edit never touches disk.
"""

from __future__ import annotations

import os
import re
import threading
from dataclasses import dataclass
from pathlib import Path

from . import interlinear, segments, table_edit, trees
from .core import AgError, AnnotationGraph, Region, Violation, parse_seconds
from .formats.aif import emit_aif, parse_aif
from .formats.table import Column, TableConfig
from .formats.treegraph import graph_to_tree, tree_to_graph


class StoreError(AgError):
    code = "store-error"


class UnknownDocumentError(StoreError):
    code = "unknown-document"


class RevisionConflictError(StoreError):
    code = "revision-conflict"


class CorruptMetaError(StoreError):
    code = "corrupt-meta"


class IoFailureError(StoreError):
    code = "io-failure"


class BadDocIdError(StoreError):
    code = "bad-doc-id"


class UnknownKindError(StoreError):
    code = "unknown-kind"


class UnknownOpError(StoreError):
    code = "unknown-op"


class BadArgsError(StoreError):
    code = "bad-args"


class BadPayloadError(StoreError):
    code = "bad-payload"


class EmptyDocumentError(StoreError):
    code = "empty-document"


KINDS = ("table", "segments", "interlinear", "tree")

DOC_ID_RE = re.compile(r"[A-Za-z0-9][A-Za-z0-9._-]*")


@dataclass
class DocumentRecord:
    doc_id: str
    kind: str
    revision: int
    payload: bytes


def default_payload(kind: str) -> bytes:
    """The canonical bytes of a brand-new document of the given kind."""
    if kind == "tree":
        graph = AnnotationGraph()
    elif kind == "table":
        graph = table_edit.TableDoc(TableConfig(columns=[])).to_graph()
    elif kind == "segments":
        graph = segments.MultiChannelDoc().to_graph()
    elif kind == "interlinear":
        graph = interlinear.IlDoc(interlinear.TypeConfig()).to_graph()
    else:
        raise UnknownKindError(kind)
    return emit_aif([graph]).encode("utf-8")


def canonical_payload(kind: str, payload: bytes) -> bytes:
    """Re-serialize incoming bytes; reject anything that is not one graph."""
    if kind not in KINDS:
        raise UnknownKindError(kind)
    graphs = parse_aif(payload)
    if len(graphs) != 1:
        raise BadPayloadError(f"expected one graph, found {len(graphs)}")
    return emit_aif(graphs).encode("utf-8")


class Store:
    """Documents under one root directory, safe for concurrent use."""

    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)
        try:
            self.root.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise IoFailureError(str(exc)) from exc
        self._records: dict[str, DocumentRecord] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        for meta in sorted(self.root.glob("*.meta")):
            record = self._read_record(meta.stem)
            self._records[record.doc_id] = record

    # -- files ---------------------------------------------------------------

    def _paths(self, doc_id: str) -> tuple[Path, Path]:
        return self.root / f"{doc_id}.aif", self.root / f"{doc_id}.meta"

    def _read_record(self, doc_id: str) -> DocumentRecord:
        aif_path, meta_path = self._paths(doc_id)
        try:
            meta_lines = meta_path.read_text("utf-8").splitlines()
        except FileNotFoundError:
            raise CorruptMetaError(f"{meta_path.name} missing") from None
        except OSError as exc:
            raise IoFailureError(str(exc)) from exc
        if len(meta_lines) < 2 or meta_lines[0] not in KINDS:
            raise CorruptMetaError(f"{meta_path.name} is not kind + revision")
        try:
            revision = int(meta_lines[1])
        except ValueError:
            raise CorruptMetaError(f"{meta_path.name} revision line") from None
        if revision < 0:
            raise CorruptMetaError(f"{meta_path.name} negative revision")
        try:
            payload = aif_path.read_bytes()
        except OSError as exc:
            raise IoFailureError(str(exc)) from exc
        return DocumentRecord(doc_id, meta_lines[0], revision, payload)

    def _write_record(self, record: DocumentRecord) -> None:
        aif_path, meta_path = self._paths(record.doc_id)
        try:
            for final, data in (
                (aif_path, record.payload),
                (meta_path, f"{record.kind}\n{record.revision}\n".encode()),
            ):
                tmp = final.with_suffix(final.suffix + ".tmp")
                tmp.write_bytes(data)
                os.replace(tmp, final)
        except OSError as exc:
            raise IoFailureError(str(exc)) from exc

    def _lock_for(self, doc_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(doc_id, threading.Lock())

    # -- registry --------------------------------------------------------------

    def list_documents(self) -> list[DocumentRecord]:
        with self._registry_lock:
            return sorted(self._records.values(), key=lambda r: r.doc_id)

    def load_document(self, doc_id: str) -> DocumentRecord:
        with self._registry_lock:
            record = self._records.get(doc_id)
        if record is None:
            raise UnknownDocumentError(doc_id)
        return record

    def create_document(
        self, doc_id: str, kind: str, payload: bytes | None = None
    ) -> DocumentRecord:
        """Register a document at revision 0, replacing any previous one."""
        if not DOC_ID_RE.fullmatch(doc_id):
            raise BadDocIdError(doc_id)
        if kind not in KINDS:
            raise UnknownKindError(kind)
        if payload is None or not payload.strip():
            body = default_payload(kind)
        else:
            body = canonical_payload(kind, payload)
        record = DocumentRecord(doc_id, kind, 0, body)
        with self._lock_for(doc_id):
            self._write_record(record)
            with self._registry_lock:
                self._records[doc_id] = record
        return record

    def save_document(self, record: DocumentRecord) -> None:
        with self._lock_for(record.doc_id):
            self._write_record(record)
            with self._registry_lock:
                self._records[record.doc_id] = record

    def validate_document(self, doc_id: str) -> list[Violation]:
        record = self.load_document(doc_id)
        graphs = parse_aif(record.payload)
        report: list[Violation] = []
        for graph in graphs:
            report.extend(graph.validate())
        return report

    # -- edits -------------------------------------------------------------------

    def apply_edit(
        self, doc_id: str, op: str, args: dict, base_revision: int
    ) -> int:
        """Dispatch one edit; commit (revision +1) only if it succeeds."""
        lock = self._lock_for(doc_id)
        with lock:
            record = self.load_document(doc_id)
            if base_revision != record.revision:
                raise RevisionConflictError(
                    f"base {base_revision}, current {record.revision}"
                )
            doc = load_doc(record.kind, record.payload)
            doc = apply_command(record.kind, doc, op, args)
            payload = dump_doc(record.kind, doc)
            updated = DocumentRecord(
                doc_id, record.kind, record.revision + 1, payload
            )
            self._write_record(updated)
            with self._registry_lock:
                self._records[doc_id] = updated
            return updated.revision


def open_store(root: str | os.PathLike) -> Store:
    return Store(root)


# -- payload <-> editor -----------------------------------------------------------


def _the_graph(payload: bytes) -> AnnotationGraph:
    graphs = parse_aif(payload)
    if len(graphs) != 1:
        raise BadPayloadError(f"expected one graph, found {len(graphs)}")
    return graphs[0]


def load_doc(kind: str, payload: bytes):
    """Decode canonical bytes into the editor object for the kind."""
    graph = _the_graph(payload)
    if kind == "tree":
        if not graph.annotations:
            return None
        return graph_to_tree(graph)
    if kind == "table":
        return table_edit.TableDoc.from_graph(graph)
    if kind == "segments":
        return segments.MultiChannelDoc.from_graph(graph)
    if kind == "interlinear":
        return interlinear.IlDoc.from_graph(graph)
    raise UnknownKindError(kind)


def dump_doc(kind: str, doc) -> bytes:
    if kind == "tree":
        graph = AnnotationGraph() if doc is None else tree_to_graph(doc)
    else:
        graph = doc.to_graph()
    return emit_aif([graph]).encode("utf-8")


def apply_command(kind: str, doc, op: str, args: dict):
    """Run one named operation against an editor object.

    Returns the object to keep working with, which is a fresh one only
    when the operation rebuilt the document (a tree build).
    """
    handler = _OPS.get(kind, {}).get(op)
    if handler is None:
        raise UnknownOpError(f"{op!r} is not a {kind} operation")
    if not isinstance(args, dict):
        raise BadArgsError("args must be an object")
    result = handler(doc, args)
    if kind == "tree" and isinstance(result, trees.Tree):
        return result
    return doc


# -- argument coercion ---------------------------------------------------------------


def _need(args: dict, name: str):
    if name not in args:
        raise BadArgsError(f"missing {name!r}")
    return args[name]


def _text(args: dict, name: str, default: str | None = None) -> str:
    value = args.get(name, default)
    if not isinstance(value, str):
        raise BadArgsError(f"{name!r} must be a string")
    return value


def _int(args: dict, name: str) -> int:
    value = _need(args, name)
    if isinstance(value, bool) or not isinstance(value, int):
        raise BadArgsError(f"{name!r} must be an integer")
    return value


def _time(value) -> int:
    if isinstance(value, str):
        return parse_seconds(value)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise BadArgsError("times are 6-decimal second strings")
    return round(value * 1_000_000)


def _region(args: dict, name: str = "region") -> Region:
    value = _need(args, name)
    if not isinstance(value, dict) or "start" not in value or "end" not in value:
        raise BadArgsError(f"{name!r} must be {{start, end}}")
    return Region(_time(value["start"]), _time(value["end"]))


def _node_id(value) -> int:
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    if isinstance(value, str):
        digits = value[1:] if value[:1] == "e" else value
        if digits.isdigit():
            return int(digits)
    raise BadArgsError(f"{value!r} is not a node id")


def _selection(args: dict) -> list[int]:
    value = _need(args, "selection")
    if not isinstance(value, list) or not value:
        raise BadArgsError("selection must be a non-empty list")
    return [_node_id(v) for v in value]


def _the_tree(doc) -> trees.Tree:
    if doc is None:
        raise EmptyDocumentError("build a tree first")
    return doc


# -- tree operations ------------------------------------------------------------------


def _tree_build(doc, args):
    tokens = _need(args, "tokens")
    if not isinstance(tokens, list) or not all(isinstance(t, str) for t in tokens):
        raise BadArgsError("tokens must be a list of strings")
    return trees.build_default_tree(
        tokens,
        root_label=_text(args, "root_label", "S"),
        pos_label=_text(args, "pos_label", "XX"),
    )


_TREE_OPS = {
    "build_default_tree": _tree_build,
    "change_label": lambda doc, a: trees.change_label(
        _the_tree(doc), _node_id(_need(a, "id")), _text(a, "label", "")
    ),
    "coref": lambda doc, a: trees.coref(
        _the_tree(doc), _node_id(_need(a, "first")), _node_id(_need(a, "second"))
    ),
    "insert_internal_node": lambda doc, a: trees.insert_internal_node(
        _the_tree(doc), _selection(a), _text(a, "label", "")
    ),
    "delete_node": lambda doc, a: trees.delete_node(
        _the_tree(doc), _node_id(_need(a, "id"))
    ),
    "move_node": lambda doc, a: trees.move_node(_the_tree(doc), _selection(a)),
    "adjoin": lambda doc, a: trees.adjoin(
        _the_tree(doc), _node_id(_need(a, "a")), _node_id(_need(a, "b"))
    ),
    "add_syn_wrd": lambda doc, a: trees.add_syn_wrd(
        _the_tree(doc),
        _node_id(_need(a, "id")),
        _text(a, "side", "after"),
        _text(a, "syn_label", ""),
        _text(a, "wrd_text", "*T*"),
    ),
}


# -- table operations -------------------------------------------------------------------


def _table_configure(doc: table_edit.TableDoc, args):
    entries = _need(args, "columns")
    if not isinstance(entries, list):
        raise BadArgsError("columns must be a list")
    columns = []
    for entry in entries:
        if isinstance(entry, str):
            columns.append(Column(entry))
        elif isinstance(entry, dict) and isinstance(entry.get("name"), str):
            width = entry.get("width", 10)
            if isinstance(width, bool) or not isinstance(width, int):
                raise BadArgsError("column width must be an integer")
            columns.append(Column(entry["name"], width))
        else:
            raise BadArgsError("each column is a name or {name, width}")
    doc.config = TableConfig(
        delimiter=_text(args, "delimiter", doc.config.delimiter),
        columns=columns,
        has_header=bool(args.get("has_header", doc.config.has_header)),
    )


def _table_insert(doc: table_edit.TableDoc, args):
    if "after" in args:
        doc.select_row(_text(args, "after"))
    if "region" in args:
        doc.set_region(_region(args))
    doc.insert_row()


def _table_delete(doc: table_edit.TableDoc, args):
    doc.select_row(_text(args, "id"))
    doc.delete_row()


def _table_times(doc: table_edit.TableDoc, args):
    doc.select_row(_text(args, "id"))
    doc.set_region(_region(args))
    doc.update_row_times()


_TABLE_OPS = {
    "configure_columns": _table_configure,
    "insert_row": _table_insert,
    "delete_row": _table_delete,
    "update_row_times": _table_times,
    "set_cell": lambda doc, a: doc.set_cell(
        _text(a, "id"), _text(a, "column"), _text(a, "value", "")
    ),
    "sort_rows": lambda doc, a: doc.sort_rows(_text(a, "key", "start")),
}


# -- segment operations ----------------------------------------------------------------


def _chan(doc: segments.MultiChannelDoc, args) -> segments.ChannelDoc:
    index = args.get("channel", 0)
    if isinstance(index, bool) or not isinstance(index, int) or index < 0:
        raise BadArgsError("channel must be a non-negative integer")
    ch = doc.channel(index)
    if "id" in args:
        ch.select(_text(args, "id"))
    return ch


_SEGMENT_OPS = {
    "create_segment": lambda doc, a: _chan(doc, a).create_segment(_region(a)),
    "press_anchor": lambda doc, a: _chan(doc, a).press_anchor(_time(_need(a, "t"))),
    "stop_playback": lambda doc, a: _chan(doc, a).stop_playback(),
    "delete_segment": lambda doc, a: _chan(doc, a).delete_segment(),
    "change_boundaries": lambda doc, a: _chan(doc, a).change_boundaries(_region(a)),
    "set_text": lambda doc, a: _chan(doc, a).set_text(_text(a, "text", "")),
    "set_speaker": lambda doc, a: _chan(doc, a).set_speaker(
        _text(a, "speaker", "")
    ),
    "split_segment": lambda doc, a: _chan(doc, a).split_segment(
        _int(a, "text_offset"), _time(_need(a, "t"))
    ),
    "join_with_previous": lambda doc, a: _chan(doc, a).join_with_previous(),
    "squeeze": lambda doc, a: _chan(doc, a).squeeze(),
}


# -- interlinear operations ----------------------------------------------------------


def _il_configure(doc: interlinear.IlDoc, args):
    types = _need(args, "types")
    if not isinstance(types, list) or not all(isinstance(t, str) for t in types):
        raise BadArgsError("types must be a list of strings")
    dominates = []
    for pair in args.get("dominates", []):
        if not isinstance(pair, list) or len(pair) != 2:
            raise BadArgsError("dominates entries are [parent, child]")
        dominates.append((pair[0], pair[1]))
    classes = args.get("classes", [])
    if not isinstance(classes, list):
        raise BadArgsError("classes must be a list of lists")
    separators = args.get("separators", {})
    if not isinstance(separators, dict):
        raise BadArgsError("separators must be an object")
    doc.config = interlinear.TypeConfig(
        types=types,
        dominates=dominates,
        classes=[list(c) for c in classes],
        separators=dict(separators),
        ft_type=_text(args, "ft", interlinear.FT_DEFAULT),
    )


def _il_select(doc: interlinear.IlDoc, args):
    if "cell" in args:
        doc.select_cell(_text(args, "cell"), args.get("type"))
    elif "unit" in args:
        doc.select_unit(_text(args, "unit"))


def _il_insert(doc: interlinear.IlDoc, args):
    _il_select(doc, args)
    doc.insert_cell_after()


def _il_split(doc: interlinear.IlDoc, args):
    _il_select(doc, args)
    t = _time(args["t"]) if "t" in args else None
    doc.split_cell(_int(args, "text_offset"), t)


def _il_join(doc: interlinear.IlDoc, args):
    _il_select(doc, args)
    doc.join_cell()


_INTERLINEAR_OPS = {
    "configure_types": _il_configure,
    "add_unit": lambda doc, a: doc.add_unit(_text(a, "ft", "")),
    "set_free_translation": lambda doc, a: doc.set_free_translation(
        _text(a, "unit"), _text(a, "text", "")
    ),
    "set_cell_text": lambda doc, a: doc.set_cell_text(
        _text(a, "cell"), _text(a, "type"), _text(a, "text", "")
    ),
    "insert_cell_after": _il_insert,
    "delete_cell": lambda doc, a: doc.delete_cell(_text(a, "cell")),
    "split_cell": _il_split,
    "join_cell": _il_join,
    "align_cell": lambda doc, a: doc.align_cell(_text(a, "cell"), _region(a)),
}


_OPS = {
    "tree": _TREE_OPS,
    "table": _TABLE_OPS,
    "segments": _SEGMENT_OPS,
    "interlinear": _INTERLINEAR_OPS,
}


def operations_for(kind: str) -> list[str]:
    """The op names a document of this kind accepts, for diagnostics."""
    if kind not in _OPS:
        raise UnknownKindError(kind)
    return sorted(_OPS[kind])
