import pytest

from annograph.formats.aif import emit_aif, parse_aif
from annograph.formats.treebank import emit_treebank
from annograph.formats.treegraph import graph_to_tree
from annograph.store import (
    BadArgsError,
    BadDocIdError,
    BadPayloadError,
    CorruptMetaError,
    EmptyDocumentError,
    KINDS,
    RevisionConflictError,
    Store,
    UnknownDocumentError,
    UnknownKindError,
    UnknownOpError,
    default_payload,
    open_store,
    operations_for,
)
from annograph.trees import RootNotDeletableError


def test_fresh_store_is_empty(tmp_path):
    assert open_store(tmp_path).list_documents() == []


def test_default_payloads_parse(tmp_path):
    store = open_store(tmp_path)
    for kind in KINDS:
        record = store.create_document(f"doc-{kind}", kind)
        assert record.revision == 0
        assert len(parse_aif(record.payload)) == 1


def test_created_document_survives_reopen(tmp_path):
    store = open_store(tmp_path)
    record = store.create_document("a", "table")
    again = open_store(tmp_path).load_document("a")
    assert again.kind == "table"
    assert again.revision == 0
    assert again.payload == record.payload


def test_doc_id_and_kind_checked(tmp_path):
    store = open_store(tmp_path)
    for bad in ("", ".hidden", "has space", "a/b"):
        with pytest.raises(BadDocIdError):
            store.create_document(bad, "table")
    with pytest.raises(UnknownKindError):
        store.create_document("a", "spreadsheet")


def test_unknown_document(tmp_path):
    store = open_store(tmp_path)
    with pytest.raises(UnknownDocumentError):
        store.load_document("nope")
    with pytest.raises(UnknownDocumentError):
        store.apply_edit("nope", "insert_row", {}, 0)


def test_non_canonical_payload_is_normalized(tmp_path):
    store = open_store(tmp_path)
    loose = (
        b'<AGSet id="S"><AG id="g1">'
        b'<Anchor id="a1" offset="1.500000" unit="sec"/>'
        b'<Anchor id="a2" offset="2.000000" unit="sec"/>'
        b'<Annotation id="e1" type="row" start="a1" end="a2">'
        b'<Feature name="text">hi</Feature></Annotation>'
        b"</AG></AGSet>"
    )
    record = store.create_document("a", "table", loose)
    assert record.payload == emit_aif(parse_aif(loose)).encode()


def test_multi_graph_payload_rejected(tmp_path):
    first = parse_aif(default_payload("table"))[0]
    second = parse_aif(default_payload("table"))[0]
    second.id = "g2"
    doubled = emit_aif([first, second]).encode()
    with pytest.raises(BadPayloadError):
        open_store(tmp_path).create_document("a", "table", doubled)


def test_create_over_existing_resets_revision(tmp_path):
    store = open_store(tmp_path)
    store.create_document("a", "table")
    store.apply_edit("a", "insert_row", {}, 0)
    record = store.create_document("a", "table")
    assert record.revision == 0


def test_missing_meta_is_corrupt(tmp_path):
    (tmp_path / "a.aif").write_bytes(default_payload("table"))
    (tmp_path / "a.meta").write_text("table\n0\n")
    (tmp_path / "b.meta").write_text("table\n")
    with pytest.raises(CorruptMetaError):
        open_store(tmp_path)


def test_garbled_meta_is_corrupt(tmp_path):
    (tmp_path / "a.aif").write_bytes(default_payload("table"))
    for body in ("spreadsheet\n0\n", "table\nmany\n", "table\n-1\n"):
        (tmp_path / "a.meta").write_text(body)
        with pytest.raises(CorruptMetaError):
            open_store(tmp_path)


def test_edit_bumps_revision_and_persists(tmp_path):
    store = open_store(tmp_path)
    store.create_document("a", "table")
    assert store.apply_edit("a", "insert_row", {}, 0) == 1
    assert store.apply_edit("a", "insert_row", {}, 1) == 2
    again = open_store(tmp_path).load_document("a")
    assert again.revision == 2
    graph = parse_aif(again.payload)[0]
    assert sum(1 for a in graph.annotations.values() if a.type == "row") == 2


def test_stale_base_revision_conflicts(tmp_path):
    store = open_store(tmp_path)
    store.create_document("a", "table")
    store.apply_edit("a", "insert_row", {}, 0)
    before = store.load_document("a")
    with pytest.raises(RevisionConflictError):
        store.apply_edit("a", "insert_row", {}, 0)
    after = store.load_document("a")
    assert after.revision == before.revision
    assert after.payload == before.payload


def test_failed_edit_leaves_document_alone(tmp_path):
    store = open_store(tmp_path)
    store.create_document("t", "tree")
    store.apply_edit("t", "build_default_tree", {"tokens": ["a", "b"]}, 0)
    before = store.load_document("t")
    graph = parse_aif(before.payload)[0]
    root = next(a.id for a in graph.annotations.values() if a.type == "syn")
    with pytest.raises(RootNotDeletableError):
        store.apply_edit("t", "delete_node", {"id": root}, 1)
    after = store.load_document("t")
    assert after.revision == 1
    assert after.payload == before.payload


def test_unknown_op_and_bad_args(tmp_path):
    store = open_store(tmp_path)
    store.create_document("a", "table")
    with pytest.raises(UnknownOpError):
        store.apply_edit("a", "launch_missiles", {}, 0)
    with pytest.raises(BadArgsError):
        store.apply_edit("a", "set_cell", {"id": 7, "column": "x"}, 0)
    with pytest.raises(BadArgsError):
        store.apply_edit("a", "insert_row", {"region": {"start": True, "end": 1}}, 0)
    assert store.load_document("a").revision == 0


def test_tree_ops_need_a_built_tree(tmp_path):
    store = open_store(tmp_path)
    store.create_document("t", "tree")
    with pytest.raises(EmptyDocumentError):
        store.apply_edit("t", "change_label", {"id": 1, "label": "NP"}, 0)


def test_tree_edit_sequence(tmp_path):
    store = open_store(tmp_path)
    store.create_document("t", "tree")
    store.apply_edit(
        "t", "build_default_tree", {"tokens": ["the", "dog"], "pos_label": "NN"}, 0
    )
    graph = parse_aif(store.load_document("t").payload)[0]
    labels = [a.features["label"] for a in graph.annotations.values()]
    assert labels.count("NN") == 2
    assert "the" in labels and "dog" in labels
    syn = next(a for a in graph.annotations.values() if a.type == "syn")
    store.apply_edit("t", "change_label", {"id": syn.id, "label": "NP"}, 1)
    graph = parse_aif(store.load_document("t").payload)[0]
    assert graph.annotations[syn.id].features["label"] == "NP"


def test_tree_ids_stay_valid_addresses_across_edits(tmp_path):
    # insert_internal_node creates a node out of walk order; the ids the
    # payload shows afterwards must still name the same nodes next edit
    store = open_store(tmp_path)
    store.create_document("t", "tree")
    store.apply_edit("t", "build_default_tree", {"tokens": ["the", "dog", "ran"]}, 0)
    store.apply_edit(
        "t", "insert_internal_node", {"selection": ["e2", "e4"], "label": "NP"}, 1
    )
    graph = parse_aif(store.load_document("t").payload)[0]
    by_label = {a.features["label"]: a.id for a in graph.annotations.values()}
    ran_pos = next(
        a.id
        for a in graph.annotations.values()
        if a.type == "pos" and a.start == graph.annotations[by_label["ran"]].start
    )
    store.apply_edit(
        "t", "move_node", {"selection": [ran_pos, by_label["NP"]]}, 2
    )
    graph = parse_aif(store.load_document("t").payload)[0]
    assert emit_treebank(graph_to_tree(graph)) == "(S (NP (XX the) (XX dog) (XX ran)))\n"


def test_segment_edits_accept_second_strings(tmp_path):
    store = open_store(tmp_path)
    store.create_document("s", "segments")
    store.apply_edit(
        "s",
        "create_segment",
        {"channel": 0, "region": {"start": "1.000000", "end": "3.000000"}},
        0,
    )
    graph = parse_aif(store.load_document("s").payload)[0]
    seg = next(a.id for a in graph.annotations.values() if a.type == "segment")
    store.apply_edit("s", "set_text", {"channel": 0, "id": seg, "text": "hello there"}, 1)
    store.apply_edit(
        "s", "split_segment", {"channel": 0, "id": seg, "text_offset": 6, "t": 2.0}, 2
    )
    graph = parse_aif(store.load_document("s").payload)[0]
    texts = sorted(
        a.features["text"]
        for a in graph.annotations.values()
        if a.type == "segment"
    )
    assert texts == ["hello", "there"]


def test_interlinear_edit_sequence(tmp_path):
    store = open_store(tmp_path)
    store.create_document("i", "interlinear")
    rev = store.apply_edit(
        "i",
        "configure_types",
        {
            "types": ["FT", "WD", "MP"],
            "dominates": [["WD", "MP"]],
            "separators": {"WD": " "},
        },
        0,
    )
    rev = store.apply_edit("i", "add_unit", {"ft": "hello"}, rev)
    graph = parse_aif(store.load_document("i").payload)[0]
    assert any(a.type == "FT" for a in graph.annotations.values())
    units = [a.id for a in graph.annotations.values() if a.type == "FT"]
    rev = store.apply_edit("i", "insert_cell_after", {"unit": units[0]}, rev)
    graph = parse_aif(store.load_document("i").payload)[0]
    assert any(a.type == "WD" for a in graph.annotations.values())
    assert any(a.type == "MP" for a in graph.annotations.values())


def test_validate_document(tmp_path):
    store = open_store(tmp_path)
    store.create_document("a", "segments")
    assert store.validate_document("a") == []


def test_operations_for():
    assert "move_node" in operations_for("tree")
    assert "squeeze" in operations_for("segments")
    with pytest.raises(UnknownKindError):
        operations_for("spreadsheet")
