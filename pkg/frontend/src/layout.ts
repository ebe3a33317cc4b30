// Box placement for the three tree displays.
//
// Geometry contract, used by the tests:
//  - terminals (wrd nodes) appear in yield order along the primary axis
//    (x for top-down and bottom-up, y for vertical) and share one row or
//    column on the other axis;
//  - a parent sits at the midpoint of its children along the terminal axis
//    and strictly between the root and the terminal row on the depth axis;
//  - no two boxes overlap. Steps exceed both box dimensions, same-depth
//    nodes cover disjoint terminal ranges, and every internal node is at
//    least one level away from the terminal row, so the grid spacing is
//    the whole proof.

import { NodeKind, TreeNode } from "./tree.js";

export type LayoutMode = "top-down" | "bottom-up" | "vertical";

export interface LayoutNode {
  id: number;
  kind: NodeKind;
  label: string;
  x: number; // box center
  y: number;
  width: number;
  height: number;
  children: number[];
}

export const STEP = 80;
export const BOX_WIDTH = 64;
export const BOX_HEIGHT = 32;

interface Placed {
  node: TreeNode;
  along: number; // terminal-axis coordinate
  depth: number;
}

export function layoutTree(root: TreeNode, mode: LayoutMode): LayoutNode[] {
  const placed: Placed[] = [];
  let slot = 0;
  let maxDepth = 0;

  const place = (node: TreeNode, depth: number): number => {
    maxDepth = Math.max(maxDepth, depth);
    let along: number;
    if (node.children.length === 0) {
      along = slot * STEP;
      slot += 1;
    } else {
      const childAlong = node.children.map((c) => place(c, depth + 1));
      along = (childAlong[0] + childAlong[childAlong.length - 1]) / 2;
    }
    placed.push({ node, along, depth });
    return along;
  };
  place(root, 0);

  return placed.map(({ node, along, depth }) => {
    const level = node.children.length === 0 ? maxDepth : depth;
    let x: number;
    let y: number;
    if (mode === "top-down") {
      x = along;
      y = level * STEP;
    } else if (mode === "bottom-up") {
      x = along;
      y = (maxDepth - level) * STEP;
    } else {
      x = level * STEP;
      y = along;
    }
    return {
      id: node.id,
      kind: node.kind,
      label: node.label,
      x,
      y,
      width: BOX_WIDTH,
      height: BOX_HEIGHT,
      children: node.children.map((c) => c.id),
    };
  });
}
