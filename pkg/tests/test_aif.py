"""Canonical XML codec: byte-stable emit, faithful parse, schema errors."""

import random

import pytest

from annograph.core import AnnotationGraph
from annograph.formats.aif import (
    DuplicateIdError,
    MalformedXmlError,
    SchemaViolationError,
    emit_aif,
    parse_aif,
)
from conftest import random_placed_graph


def minimal_graph():
    graph = AnnotationGraph()
    a1 = graph.add_anchor(1_500_000)
    a2 = graph.add_anchor(2_000_000)
    graph.add_annotation("segment", a1, a2, {"text": "hi"})
    return graph


def test_emit_canonical_layout():
    assert emit_aif([minimal_graph()]) == (
        '<AGSet id="S">\n'
        ' <AG id="g1">\n'
        '  <Anchor id="a1" offset="1.500000" unit="sec"/>\n'
        '  <Anchor id="a2" offset="2.000000" unit="sec"/>\n'
        '  <Annotation id="e1" type="segment" start="a1" end="a2">\n'
        '   <Feature name="text">hi</Feature>\n'
        "  </Annotation>\n"
        " </AG>\n"
        "</AGSet>\n"
    )


def test_parse_minimal_document():
    graphs = parse_aif(emit_aif([minimal_graph()]))
    assert len(graphs) == 1
    graph = graphs[0]
    assert len(graph.anchors) == 2
    assert len(graph.annotations) == 1
    assert graph.anchors["a1"].offset == 1_500_000
    assert graph.annotations["e1"].features == {"text": "hi"}


def test_emit_parse_emit_is_byte_identical():
    rng = random.Random(41)
    for _ in range(30):
        graph = random_placed_graph(rng)
        text = emit_aif([graph])
        assert emit_aif(parse_aif(text)) == text


def test_parse_emit_preserves_structure():
    rng = random.Random(43)
    for _ in range(30):
        graph = random_placed_graph(rng)
        assert parse_aif(emit_aif([graph]))[0] == graph


def test_unplaced_anchor_round_trips():
    graph = AnnotationGraph()
    a1 = graph.add_anchor()
    a2 = graph.add_anchor(250_000)
    graph.add_annotation("row", a1, a2, {})
    back = parse_aif(emit_aif([graph]))[0]
    assert back.anchors["a1"].offset is None
    assert back.anchors["a2"].offset == 250_000


def test_feature_values_survive_escaping():
    graph = AnnotationGraph()
    a1 = graph.add_anchor()
    a2 = graph.add_anchor()
    nasty = 'a<b&c>"d"\ne\tf\rg'
    graph.add_annotation("row", a1, a2, {"x": nasty, "<odd&name>": "v"})
    back = parse_aif(emit_aif([graph]))[0]
    assert back.annotations["e1"].features == {"x": nasty, "<odd&name>": "v"}


def test_empty_features_self_close():
    graph = AnnotationGraph()
    a1 = graph.add_anchor()
    graph.add_annotation("mark", a1, a1, {})
    assert '<Annotation id="e1" type="mark" start="a1" end="a1"/>' in emit_aif(
        [graph]
    )


def test_annotations_sorted_by_numeric_id():
    graph = AnnotationGraph()
    anchors = [graph.add_anchor() for _ in range(12)]
    for i in range(11):
        graph.add_annotation("e", anchors[i], anchors[i + 1], {})
    lines = emit_aif([graph]).splitlines()
    order = [l.split('"')[1] for l in lines if "<Annotation" in l]
    assert order == [f"e{i}" for i in range(1, 12)]


def test_multiple_graphs_in_one_set():
    g1, g2 = AnnotationGraph("g1"), AnnotationGraph("g2")
    for g in (g1, g2):
        a = g.add_anchor()
        g.add_annotation("e", a, a, {})
    graphs = parse_aif(emit_aif([g1, g2]))
    assert [g.id for g in graphs] == ["g1", "g2"]


def test_dangling_anchor_reference_rejected():
    text = (
        '<AGSet id="S">\n'
        ' <AG id="g1">\n'
        '  <Anchor id="a1" unit="sec"/>\n'
        '  <Annotation id="e1" type="x" start="a1" end="a9"/>\n'
        " </AG>\n"
        "</AGSet>\n"
    )
    with pytest.raises(SchemaViolationError):
        parse_aif(text)


def test_duplicate_annotation_id_rejected():
    text = (
        '<AGSet id="S">\n'
        ' <AG id="g1">\n'
        '  <Anchor id="a1" unit="sec"/>\n'
        '  <Annotation id="e1" type="x" start="a1" end="a1"/>\n'
        '  <Annotation id="e1" type="y" start="a1" end="a1"/>\n'
        " </AG>\n"
        "</AGSet>\n"
    )
    with pytest.raises(DuplicateIdError):
        parse_aif(text)


def test_malformed_xml_carries_line():
    with pytest.raises(MalformedXmlError) as err:
        parse_aif('<AGSet id="S">\n<AG id="g1">\n</AGSet>\n')
    assert err.value.line >= 1


def test_bad_id_pattern_rejected():
    text = (
        '<AGSet id="S">\n'
        ' <AG id="g1">\n'
        '  <Anchor id="anchor-one" unit="sec"/>\n'
        " </AG>\n"
        "</AGSet>\n"
    )
    with pytest.raises(SchemaViolationError):
        parse_aif(text)


def test_counters_sync_after_parse():
    graph = parse_aif(emit_aif([minimal_graph()]))[0]
    assert graph.add_anchor() == "a3"
    assert graph.add_annotation("x", "a3", "a3", {}) == "e2"
