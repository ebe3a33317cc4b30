"""Bracketed-tree text, Penn Treebank style.

A file holds one s-expression per tree; an outer wrapper with an empty label,
``( (S ...) )``, is dissolved.  A list whose tail is a single bare token
becomes a pos node over a wrd; other lists become syn nodes, with any bare
tokens inside them read as wrd children.  ``-<digits>`` suffixes on syn
labels and on trace tokens (tokens starting with ``*``) carry coreference
indices.
"""

from __future__ import annotations

import re

from ..core import AgError
from ..trees import POS, SYN, WRD, Tree


class TreebankError(AgError):
    code = "treebank-error"

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at byte {pos}")
        self.pos = pos


class UnbalancedParensError(TreebankError):
    code = "unbalanced-parens"


class EmptyNodeError(TreebankError):
    code = "empty-node"


class BadTokenError(TreebankError):
    code = "bad-token"


_TOKEN_RE = re.compile(r"[()]|[^\s()]+")
_SYN_TRACE_RE = re.compile(r"(.*[^\s-])-(\d+)")
_WRD_TRACE_RE = re.compile(r"(\*\S*?)-(\d+)")


def _tokenize(text: str):
    for m in _TOKEN_RE.finditer(text):
        yield m.group(0), m.start()


def parse_treebank(text: str) -> list[Tree]:
    """Parse bracketed text into a list of trees."""
    # First pass: nested (label, items, pos) lists.
    sexprs = []
    stack: list[list] = []
    for token, pos in _tokenize(text):
        if token == "(":
            stack.append([pos])
        elif token == ")":
            if not stack:
                raise UnbalancedParensError("unmatched )", pos)
            done = stack.pop()
            if stack:
                stack[-1].append(done)
            else:
                sexprs.append(done)
        else:
            if not stack:
                raise BadTokenError(f"token {token!r} outside any tree", pos)
            stack[-1].append((token, pos))
    if stack:
        raise UnbalancedParensError("unclosed (", stack[-1][0])

    trees = []
    for sexpr in sexprs:
        for top in _split_wrapper(sexpr):
            tree = Tree()
            tree.root = _build(tree, top, None)
            root = tree.nodes[tree.root]
            if root.kind != SYN:
                raise BadTokenError(
                    f"top-level node {root.label!r} is not a constituent", sexpr[0]
                )
            trees.append(tree)
    return trees


def _split_wrapper(sexpr: list) -> list[list]:
    # A wrapper is a list whose first item is itself a list (no label token).
    items = sexpr[1:]
    if items and isinstance(items[0], list):
        for item in items:
            if not isinstance(item, list):
                raise BadTokenError(f"stray token {item[0]!r} in wrapper", item[1])
        return items
    return [sexpr]


def _build(tree: Tree, sexpr: list, parent: int | None) -> int:
    open_pos = sexpr[0]
    items = sexpr[1:]
    if not items:
        raise EmptyNodeError("empty node", open_pos)
    head = items[0]
    if isinstance(head, list):
        raise BadTokenError("expected a label", head[0])
    label, label_pos = head
    body = items[1:]
    if not body:
        raise EmptyNodeError(f"node {label!r} has no children", open_pos)

    if len(body) == 1 and not isinstance(body[0], list):
        node = tree.add_node(POS, label, parent=parent)
        _add_word(tree, body[0][0], node)
        return node

    text, trace = _split_syn_trace(label)
    node = tree.add_node(SYN, text, parent=parent, trace=trace)
    for item in body:
        if isinstance(item, list):
            _build(tree, item, node)
        else:
            _add_word(tree, item[0], node)
    return node


def _add_word(tree: Tree, token: str, parent: int) -> int:
    text, trace = token, None
    m = _WRD_TRACE_RE.fullmatch(token)
    if m:
        text, trace = m.group(1), int(m.group(2))
    return tree.add_node(WRD, text, parent=parent, trace=trace)


def _split_syn_trace(label: str) -> tuple[str, int | None]:
    m = _SYN_TRACE_RE.fullmatch(label)
    if m:
        return m.group(1), int(m.group(2))
    return label, None


def emit_treebank(trees: list[Tree] | Tree) -> str:
    """Emit trees one per line, single-space separated, no outer wrapper."""
    if isinstance(trees, Tree):
        trees = [trees]
    return "".join(_emit_node(t, t.root) + "\n" for t in trees)


def _emit_node(tree: Tree, ident: int) -> str:
    node = tree.nodes[ident]
    if node.kind == WRD:
        if node.trace is not None:
            return f"{node.label}-{node.trace}"
        return node.label
    label = node.label
    if node.kind == SYN and node.trace is not None:
        label = f"{label}-{node.trace}"
    inner = " ".join(_emit_node(tree, c) for c in node.children)
    return f"({label} {inner})"
