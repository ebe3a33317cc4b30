"""Syntax-tree editing over typed nodes.

Trees have three node kinds: ``syn`` (internal constituents), ``pos``
(part-of-speech nodes with exactly one word child) and ``wrd`` (terminals,
whose label is the token text).  Every committed edit preserves the
invariants below; every rejected edit leaves the tree untouched.

Invariants:
  * the root is a ``syn`` node and every non-root has exactly one parent;
  * ``wrd`` nodes are childless and hang under a ``pos`` or a ``syn``;
  * ``pos`` nodes have exactly one child, a ``wrd``;
  * ``syn`` nodes have at least one child;
  * terminal spans are contiguous (guaranteed by the child-list structure).

Word order is sacred: no operation may reorder the terminal yield, and the
insertion point for a moved subtree is computed from the yield rather than
supplied by the caller.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field

from .core import AgError

SYN = "syn"
POS = "pos"
WRD = "wrd"


class TreeError(AgError):
    code = "tree-error"


class RootSelectedError(TreeError):
    code = "root-selected"


class RootNotDeletableError(TreeError):
    code = "root-not-deletable"


class WrdNotDeletableError(TreeError):
    code = "wrd-not-deletable"


class WouldEmptyParentError(TreeError):
    code = "would-empty-parent"


class WordOrderChangeError(TreeError):
    code = "word-order-change"


class CyclicMoveError(TreeError):
    code = "cyclic-move"


class NotSameParentError(TreeError):
    code = "not-same-parent"


class SameNodeError(TreeError):
    code = "same-node"


class EmptyLabelError(TreeError):
    code = "empty-label"


class EmptyInputError(TreeError):
    code = "empty-input"


class PosArityError(TreeError):
    """An edit would leave a pos node without exactly one wrd child."""

    code = "pos-arity"


class UnknownNodeError(TreeError):
    code = "unknown-node"


@dataclass
class TreeNode:
    id: int
    kind: str
    label: str
    parent: int | None = None
    children: list[int] = field(default_factory=list)
    trace: int | None = None


class Tree:
    """A rooted tree of :class:`TreeNode` with fresh integer ids.

    Nodes live in ``nodes`` keyed by id; ``root`` names the top node.  Use
    :func:`build_default_tree` or the treebank parser to obtain instances.
    """

    def __init__(self):
        self.nodes: dict[int, TreeNode] = {}
        self.root: int | None = None
        self._next_id = 1
        self._next_trace = 1

    # -- plumbing ----------------------------------------------------------

    def add_node(
        self,
        kind: str,
        label: str,
        parent: int | None = None,
        index: int | None = None,
        trace: int | None = None,
    ) -> int:
        ident = self._next_id
        self._next_id += 1
        self.nodes[ident] = TreeNode(ident, kind, label, parent, [], trace)
        if parent is not None:
            siblings = self.nodes[parent].children
            siblings.insert(len(siblings) if index is None else index, ident)
        elif self.root is None:
            self.root = ident
        if trace is not None:
            self._next_trace = max(self._next_trace, trace + 1)
        return ident

    def node(self, ident: int) -> TreeNode:
        try:
            return self.nodes[ident]
        except KeyError:
            raise UnknownNodeError(str(ident)) from None

    def sync_ids(self) -> None:
        if self.nodes:
            self._next_id = max(self.nodes) + 1
        for n in self.nodes.values():
            if n.trace is not None:
                self._next_trace = max(self._next_trace, n.trace + 1)

    def _snapshot(self):
        return (
            copy.deepcopy(self.nodes),
            self.root,
            self._next_id,
            self._next_trace,
        )

    def _restore(self, snap) -> None:
        self.nodes, self.root, self._next_id, self._next_trace = snap

    def depth(self, ident: int) -> int:
        d = 0
        node = self.node(ident)
        while node.parent is not None:
            node = self.nodes[node.parent]
            d += 1
        return d

    def _is_descendant(self, ident: int, ancestor: int) -> bool:
        node = self.node(ident)
        while node.parent is not None:
            if node.parent == ancestor:
                return True
            node = self.nodes[node.parent]
        return False

    def terminal_ids(self, top: int | None = None) -> list[int]:
        """Terminal node ids in surface order under ``top`` (default root)."""
        out: list[int] = []
        start = self.root if top is None else top
        if start is None:
            return out
        stack = [start]
        while stack:
            ident = stack.pop()
            node = self.nodes[ident]
            if node.kind == WRD:
                out.append(ident)
            else:
                stack.extend(reversed(node.children))
        return out


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def terminal_yield(tree: Tree) -> list[str]:
    """The word string: terminal labels in surface order."""
    return [tree.nodes[i].label for i in tree.terminal_ids()]


def build_default_tree(
    tokens: list[str], root_label: str = "S", pos_label: str = "XX"
) -> Tree:
    """A flat starter tree: every token under its own pos, all under one root."""
    if not tokens:
        raise EmptyInputError("no tokens")
    tree = Tree()
    root = tree.add_node(SYN, root_label)
    tree.root = root
    for tok in tokens:
        pos = tree.add_node(POS, pos_label, parent=root)
        tree.add_node(WRD, tok, parent=pos)
    return tree


def change_label(tree: Tree, ident: int, label: str) -> None:
    """Relabel any node; on a wrd this rewrites the token text."""
    if not label:
        raise EmptyLabelError("labels must be non-empty")
    tree.node(ident).label = label


def coref(tree: Tree, first: int, second: int) -> int:
    """Give two nodes the same trace index and return it.

    If exactly one of the pair already carries an index, it propagates;
    if both carry different ones, a fresh index replaces both.
    """
    if first == second:
        raise SameNodeError(str(first))
    a, b = tree.node(first), tree.node(second)
    if a.trace is not None and b.trace == a.trace:
        return a.trace
    if (a.trace is None) != (b.trace is None):
        idx = a.trace if a.trace is not None else b.trace
    else:
        idx = tree._next_trace
        tree._next_trace += 1
    a.trace = b.trace = idx
    tree._next_trace = max(tree._next_trace, idx + 1)
    return idx


def insert_internal_node(tree: Tree, selection: list[int], label: str) -> int:
    """Wrap one node, or a contiguous run between two siblings, in a new syn.

    With two selected nodes the run covers everything between them in their
    parent's child order, endpoints included.
    """
    if not label:
        raise EmptyLabelError("labels must be non-empty")
    if len(selection) == 1:
        target = tree.node(selection[0])
        if target.parent is None:
            raise RootSelectedError("cannot insert above the root")
        parent = tree.nodes[target.parent]
        if parent.kind == POS:
            raise PosArityError("a pos node keeps its single wrd child")
        run = [target.id]
    elif len(selection) == 2:
        if selection[0] == selection[1]:
            raise SameNodeError(str(selection[0]))
        first, second = (tree.node(i) for i in selection)
        if first.parent is None or first.parent != second.parent:
            raise NotSameParentError(f"{first.id} and {second.id}")
        parent = tree.nodes[first.parent]
        i, j = parent.children.index(first.id), parent.children.index(second.id)
        lo, hi = min(i, j), max(i, j)
        run = parent.children[lo : hi + 1]
    else:
        raise TreeError("insert takes one or two selected nodes")

    at = parent.children.index(run[0])
    fresh = tree.add_node(SYN, label)
    node = tree.nodes[fresh]
    node.parent = parent.id
    node.children = list(run)
    parent.children[at : at + len(run)] = [fresh]
    for ident in run:
        tree.nodes[ident].parent = fresh
    return fresh


def delete_node(tree: Tree, ident: int) -> None:
    """Delete a pos together with its word, or splice a syn's children up."""
    target = tree.node(ident)
    if target.kind == WRD:
        raise WrdNotDeletableError("delete its pos or syn parent instead")
    if target.parent is None:
        raise RootNotDeletableError("the root stays")
    parent = tree.nodes[target.parent]
    at = parent.children.index(ident)
    if target.kind == POS:
        if len(parent.children) == 1:
            raise WouldEmptyParentError(f"{parent.id} would have no leaves")
        for child in target.children:
            del tree.nodes[child]
        del tree.nodes[ident]
        parent.children.pop(at)
    else:
        parent.children[at : at + 1] = target.children
        for child in target.children:
            tree.nodes[child].parent = parent.id
        del tree.nodes[ident]


def move_node(tree: Tree, selection: list[int]) -> None:
    """Move a subtree (or a sibling run) under a new parent.

    ``selection`` is ``[a, b]`` to move node *a* under *b*, or
    ``[a1, a2, b]`` to move the contiguous sibling run *a1..a2*.  The
    insertion position inside *b* is the unique slot that keeps the
    terminal yield unchanged; if no slot does, the move is rejected.
    """
    snap = tree._snapshot()
    try:
        _move(tree, selection)
    except TreeError:
        tree._restore(snap)
        raise


def _move(tree: Tree, selection: list[int]) -> None:
    if len(selection) == 2:
        a, b = selection
        run = [a]
    elif len(selection) == 3:
        a1, a2, b = selection
        if len({a1, a2, b}) != 3:
            raise SameNodeError("selection repeats a node")
        first, second = tree.node(a1), tree.node(a2)
        if first.parent is None or first.parent != second.parent:
            raise NotSameParentError(f"{a1} and {a2}")
        siblings = tree.nodes[first.parent].children
        i, j = siblings.index(a1), siblings.index(a2)
        lo, hi = min(i, j), max(i, j)
        run = siblings[lo : hi + 1]
    else:
        raise TreeError("move takes two or three selected nodes")

    target = tree.node(b)
    head = tree.node(run[0])
    if head.parent is None:
        raise CyclicMoveError("the root cannot move")
    if target.kind != SYN:
        raise PosArityError("moves target syn nodes")
    for ident in run:
        if b == ident or tree._is_descendant(b, ident):
            raise CyclicMoveError(f"{b} lies under the moved span")

    parent = tree.nodes[head.parent]
    if parent.id == b:
        # Same-parent move: the only yield-preserving slot is where the run
        # already sits, so commit without touching anything.
        return

    before = tree.terminal_ids()
    block = []
    for ident in run:
        block.extend(tree.terminal_ids(ident))
    start = before.index(block[0])

    at = parent.children.index(run[0])
    del parent.children[at : at + len(run)]
    if not parent.children:
        raise WouldEmptyParentError(f"{parent.id} would have no leaves")

    remaining = tree.terminal_ids()
    position = {t: i for i, t in enumerate(remaining)}
    gaps = []
    for child in target.children:
        gaps.append(position[tree.terminal_ids(child)[0]])
    last = tree.terminal_ids(target.children[-1])[-1]
    gaps.append(position[last] + 1)

    if start not in gaps:
        raise WordOrderChangeError("no insertion point preserves the yield")
    slot = gaps.index(start)
    target.children[slot:slot] = run
    for ident in run:
        tree.nodes[ident].parent = b

    if tree.terminal_ids() != before:
        raise WordOrderChangeError("no insertion point preserves the yield")


def adjoin(tree: Tree, a: int, b: int) -> int:
    """Clone *b*'s label above it and move *a* in next to *b*.

    The clone is a fresh syn node taking *b*'s place (becoming the new root
    when *b* was the root); *b* becomes its sole child, then *a* moves under
    the clone subject to the usual yield-preserving placement.  Any
    rejection rolls the whole thing back.  Returns the clone's id.
    """
    snap = tree._snapshot()
    try:
        tree.node(a)
        target = tree.node(b)
        if target.parent is not None and tree.nodes[target.parent].kind == POS:
            raise PosArityError("a pos node keeps its single wrd child")
        clone = tree.add_node(SYN, target.label)
        node = tree.nodes[clone]
        if target.parent is None:
            tree.root = clone
        else:
            parent = tree.nodes[target.parent]
            parent.children[parent.children.index(b)] = clone
            node.parent = parent.id
        node.children = [b]
        target.parent = clone
        _move(tree, [a, clone])
        return clone
    except TreeError:
        tree._restore(snap)
        raise


def add_syn_wrd(
    tree: Tree,
    ident: int,
    side: str,
    syn_label: str,
    wrd_text: str = "*T*",
) -> int:
    """Insert a one-word constituent (typically a trace) beside a node."""
    if side not in ("before", "after"):
        raise TreeError(f"side must be before or after, not {side!r}")
    if not syn_label or not wrd_text:
        raise EmptyLabelError("labels must be non-empty")
    target = tree.node(ident)
    if target.parent is None:
        raise RootSelectedError("pick a node with a parent")
    parent = tree.nodes[target.parent]
    if parent.kind == POS:
        raise PosArityError("a pos node keeps its single wrd child")
    at = parent.children.index(ident) + (1 if side == "after" else 0)
    syn = tree.add_node(SYN, syn_label, parent=parent.id, index=at)
    tree.add_node(WRD, wrd_text, parent=syn)
    return syn


def check_tree(tree: Tree) -> None:
    """Raise TreeError if any structural invariant is broken (test support)."""
    if tree.root is None or tree.root not in tree.nodes:
        raise TreeError("missing root")
    root = tree.nodes[tree.root]
    if root.kind != SYN or root.parent is not None:
        raise TreeError("root must be a parentless syn")
    seen = set()
    stack = [tree.root]
    while stack:
        ident = stack.pop()
        if ident in seen:
            raise TreeError(f"{ident} reachable twice")
        seen.add(ident)
        node = tree.nodes[ident]
        for child in node.children:
            if tree.nodes[child].parent != ident:
                raise TreeError(f"bad parent link on {child}")
        if node.kind == WRD:
            if node.children:
                raise TreeError("wrd nodes are childless")
            if node.parent is not None and tree.nodes[node.parent].kind == WRD:
                raise TreeError("wrd under wrd")
        elif node.kind == POS:
            if len(node.children) != 1 or tree.nodes[node.children[0]].kind != WRD:
                raise PosArityError(f"pos {ident} must hold exactly one wrd")
        elif node.kind == SYN:
            if not node.children:
                raise TreeError(f"syn {ident} has no children")
        else:
            raise TreeError(f"unknown kind {node.kind!r}")
        stack.extend(node.children)
    if seen != set(tree.nodes):
        raise TreeError("disconnected nodes present")
