"""Encoding of syntax trees as annotation graphs.

The terminals of an n-word tree define an anchor chain a_0 .. a_n; every
node becomes an annotation spanning its terminal range: ``wrd`` over one
unit, ``pos``/``syn`` over their yield.  Features carry ``label``, the
optional ``trace`` index, and ``depth`` (distance from the root), which
disambiguates nodes that share a span, such as a pos over a single word
inside a unary syn.

Decoding walks the wrd chain to recover terminal order, then rebuilds
dominance from span nesting; anything that does not describe exactly one
well-formed tree raises :class:`NotATreeEncodingError`.
"""

from __future__ import annotations

from ..core import AgError, Annotation, AnnotationGraph, id_number
from ..trees import POS, SYN, WRD, Tree, TreeNode


class NotATreeEncodingError(AgError):
    code = "not-a-tree-encoding"

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


def tree_to_graph(tree: Tree, graph_id: str = "g1") -> AnnotationGraph:
    """Encode one tree; annotation ids mirror node ids (node 7 -> e7)."""
    graph = AnnotationGraph(graph_id)
    terminals = tree.terminal_ids()
    anchors = [graph.add_anchor() for _ in range(len(terminals) + 1)]
    index = {t: i for i, t in enumerate(terminals)}

    def span(ident: int) -> tuple[int, int]:
        ids = tree.terminal_ids(ident)
        return index[ids[0]], index[ids[-1]] + 1

    order = []
    stack = [(tree.root, 0)]
    while stack:
        ident, depth = stack.pop()
        order.append((ident, depth))
        node = tree.nodes[ident]
        for child in reversed(node.children):
            stack.append((child, depth + 1))

    for ident, depth in order:
        node = tree.nodes[ident]
        lo, hi = span(ident)
        features = {"label": node.label}
        if node.trace is not None:
            features["trace"] = str(node.trace)
        features["depth"] = str(depth)
        eid = f"e{ident}"
        graph.annotations[eid] = Annotation(
            eid, node.kind, anchors[lo], anchors[hi], features
        )
    graph.sync_counters()
    return graph


def graph_to_tree(graph: AnnotationGraph) -> Tree:
    """Decode a graph produced by :func:`tree_to_graph` (or equivalent)."""
    words = [a for a in graph.annotations.values() if a.type == WRD]
    if not words:
        raise NotATreeEncodingError("no wrd annotations")
    by_start = {}
    ends = set()
    for ann in words:
        if ann.start in by_start:
            raise NotATreeEncodingError(f"two words start at {ann.start}")
        by_start[ann.start] = ann
        ends.add(ann.end)
    heads = [a for a in by_start if a not in ends]
    if len(heads) != 1:
        raise NotATreeEncodingError("wrd annotations do not form one chain")
    chain = []
    cursor = heads[0]
    anchor_index = {cursor: 0}
    while cursor in by_start:
        ann = by_start[cursor]
        chain.append(ann)
        cursor = ann.end
        if cursor in anchor_index:
            raise NotATreeEncodingError("wrd chain loops")
        anchor_index[cursor] = len(chain)
    n = len(chain)

    spans = []
    for ann in graph.annotations.values():
        if ann.type not in (SYN, POS, WRD):
            raise NotATreeEncodingError(f"unexpected annotation type {ann.type!r}")
        if ann.start not in anchor_index or ann.end not in anchor_index:
            raise NotATreeEncodingError(f"{ann.id} is off the terminal chain")
        lo, hi = anchor_index[ann.start], anchor_index[ann.end]
        if lo >= hi:
            raise NotATreeEncodingError(f"{ann.id} spans nothing")
        if "depth" not in ann.features:
            raise NotATreeEncodingError(f"{ann.id} has no depth feature")
        try:
            depth = int(ann.features["depth"])
        except ValueError:
            raise NotATreeEncodingError(f"{ann.id} has a bad depth") from None
        spans.append((lo, -hi, depth, id_number(ann.id), ann))
    spans.sort(key=lambda s: s[:4])

    lo0, neg_hi0, _, _, top = spans[0]
    if lo0 != 0 or -neg_hi0 != n:
        raise NotATreeEncodingError("no annotation spans the whole chain")
    if top.type != SYN:
        raise NotATreeEncodingError("the root annotation must be syn")

    tree = Tree()
    stack: list[tuple[int, int, int, int]] = []  # (lo, hi, depth, node id)
    for lo, neg_hi, depth, ident, ann in spans:
        hi = -neg_hi
        while stack and not _encloses(stack[-1], lo, hi, depth):
            stack.pop()
        if not stack and tree.root is not None:
            raise NotATreeEncodingError("two top-level spans")
        parent = stack[-1][3] if stack else None
        trace = None
        if "trace" in ann.features:
            try:
                trace = int(ann.features["trace"])
            except ValueError:
                raise NotATreeEncodingError(f"{ann.id} has a bad trace") from None
        # keep the annotation's number as the node id so that ids in an
        # emitted payload stay valid addresses across parse round trips
        if ident in tree.nodes:
            raise NotATreeEncodingError(f"node id {ident} appears twice")
        tree.nodes[ident] = TreeNode(
            ident, ann.type, ann.features.get("label", ""), parent, [], trace
        )
        if parent is None:
            tree.root = ident
        else:
            tree.nodes[parent].children.append(ident)
        stack.append((lo, hi, depth, ident))

    _check_decoded(tree, n)
    tree.sync_ids()
    return tree


def _encloses(entry: tuple[int, int, int, int], lo: int, hi: int, depth: int) -> bool:
    plo, phi, pdepth, _ = entry
    if plo == lo and phi == hi:
        if pdepth == depth:
            raise NotATreeEncodingError("equal spans with equal depth")
        return pdepth < depth
    if plo <= lo and hi <= phi:
        return True
    if lo < phi < hi:
        raise NotATreeEncodingError("crossing spans")
    return False


def _check_decoded(tree: Tree, n: int) -> None:
    terminals = tree.terminal_ids()
    if len(terminals) != n:
        raise NotATreeEncodingError("terminal count does not match the chain")
    for node in tree.nodes.values():
        if node.kind == WRD and node.children:
            raise NotATreeEncodingError("a wrd annotation contains others")
        if node.kind == POS and (
            len(node.children) != 1 or tree.nodes[node.children[0]].kind != WRD
        ):
            raise NotATreeEncodingError("pos must span exactly its one wrd")
        if node.kind == SYN and not node.children:
            raise NotATreeEncodingError("syn with no contents")
