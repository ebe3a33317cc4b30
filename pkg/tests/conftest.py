"""Shared generators and structural oracles for the test suite."""

from __future__ import annotations

import random

from annograph.core import AnnotationGraph
from annograph.trees import POS, SYN, WRD, Tree

POS_LABELS = ["NN", "VB", "DT", "JJ", "RB"]
SYN_LABELS = ["NP", "VP", "PP", "ADVP", "SBAR"]


def make_tokens(n: int) -> list[str]:
    return [f"w{i}" for i in range(1, n + 1)]


def random_tree(
    rng: random.Random, max_terminals: int = 8, min_terminals: int = 1
) -> Tree:
    """A structurally valid tree with distinct terminal tokens.

    Terminals hang either under a pos node or directly under a syn node,
    both of which the model allows.
    """
    n = rng.randint(min_terminals, max_terminals)
    tokens = make_tokens(n)
    tree = Tree()
    root = tree.add_node(SYN, "S", None)

    def grow(parent: int, toks: list[str], depth: int) -> None:
        groups = _partition(rng, toks)
        for group in groups:
            if len(group) == 1 and (depth >= 4 or rng.random() < 0.7):
                roll = rng.random()
                if roll < 0.7:
                    pos = tree.add_node(POS, rng.choice(POS_LABELS), parent)
                    tree.add_node(WRD, group[0], pos)
                else:
                    tree.add_node(WRD, group[0], parent)
            else:
                syn = tree.add_node(SYN, rng.choice(SYN_LABELS), parent)
                grow(syn, group, depth + 1)

    grow(root, tokens, 0)
    return tree


def _partition(rng: random.Random, toks: list[str]) -> list[list[str]]:
    if len(toks) == 1:
        return [toks]
    cuts = sorted(
        rng.sample(range(1, len(toks)), rng.randint(0, min(3, len(toks) - 1)))
    )
    bounds = [0, *cuts, len(toks)]
    return [toks[a:b] for a, b in zip(bounds, bounds[1:])]


def tree_equal(left: Tree, right: Tree) -> bool:
    """Structural identity: kinds, labels, traces, child shapes."""

    def walk(a: int, b: int) -> bool:
        na, nb = left.node(a), right.node(b)
        if (na.kind, na.label, na.trace) != (nb.kind, nb.label, nb.trace):
            return False
        if len(na.children) != len(nb.children):
            return False
        return all(walk(x, y) for x, y in zip(na.children, nb.children))

    return walk(left.root, right.root)


def assert_projective(tree: Tree) -> None:
    """Span-recomputation oracle: every node covers a contiguous terminal range."""
    order = {t: i for i, t in enumerate(tree.terminal_ids())}

    def covered(ident: int) -> list[int]:
        node = tree.node(ident)
        if not node.children:
            return [order[ident]] if node.kind == WRD else []
        out: list[int] = []
        for child in node.children:
            out.extend(covered(child))
        return out

    for ident in tree.nodes:
        spots = covered(ident)
        assert spots == sorted(spots), f"node {ident} out of order"
        if spots:
            lo, hi = min(spots), max(spots)
            assert spots == list(range(lo, hi + 1)), f"node {ident} has a gap"


def random_placed_graph(rng: random.Random, max_annotations: int = 30) -> AnnotationGraph:
    """A graph whose anchors all carry offsets, cycle-free by construction."""
    graph = AnnotationGraph()
    offsets = sorted(rng.randint(0, 20) * 500_000 for _ in range(rng.randint(2, 12)))
    anchors = [graph.add_anchor(off) for off in offsets]
    for _ in range(rng.randint(0, max_annotations)):
        i = rng.randrange(len(anchors))
        j = rng.randrange(i, len(anchors))
        graph.add_annotation(
            rng.choice(["segment", "row", "noise"]),
            anchors[i],
            anchors[j],
            {"text": f"t{rng.randint(0, 9)}"},
        )
    return graph
