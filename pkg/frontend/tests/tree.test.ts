import { describe, expect, it } from "vitest";

import { Graph, parsePayload } from "../src/aif.js";
import { NotATreeError, brackets, decodeTree, terminalYield } from "../src/tree.js";

// (S (NP-2 (DT the) (NN dog)) (VP (VBD ran))) as the service stores it.
const TREE =
  '<AGSet id="S">\n <AG id="g1">\n  <Anchor id="a1" unit="sec"/>\n' +
  '  <Anchor id="a2" unit="sec"/>\n  <Anchor id="a3" unit="sec"/>\n' +
  '  <Anchor id="a4" unit="sec"/>\n' +
  '  <Annotation id="e1" type="syn" start="a1" end="a4">\n' +
  '   <Feature name="label">S</Feature>\n   <Feature name="depth">0</Feature>\n' +
  "  </Annotation>\n" +
  '  <Annotation id="e2" type="syn" start="a1" end="a3">\n' +
  '   <Feature name="label">NP</Feature>\n   <Feature name="trace">2</Feature>\n' +
  '   <Feature name="depth">1</Feature>\n  </Annotation>\n' +
  '  <Annotation id="e3" type="pos" start="a1" end="a2">\n' +
  '   <Feature name="label">DT</Feature>\n   <Feature name="depth">2</Feature>\n' +
  "  </Annotation>\n" +
  '  <Annotation id="e4" type="wrd" start="a1" end="a2">\n' +
  '   <Feature name="label">the</Feature>\n   <Feature name="depth">3</Feature>\n' +
  "  </Annotation>\n" +
  '  <Annotation id="e5" type="pos" start="a2" end="a3">\n' +
  '   <Feature name="label">NN</Feature>\n   <Feature name="depth">2</Feature>\n' +
  "  </Annotation>\n" +
  '  <Annotation id="e6" type="wrd" start="a2" end="a3">\n' +
  '   <Feature name="label">dog</Feature>\n   <Feature name="depth">3</Feature>\n' +
  "  </Annotation>\n" +
  '  <Annotation id="e7" type="syn" start="a3" end="a4">\n' +
  '   <Feature name="label">VP</Feature>\n   <Feature name="depth">1</Feature>\n' +
  "  </Annotation>\n" +
  '  <Annotation id="e8" type="pos" start="a3" end="a4">\n' +
  '   <Feature name="label">VBD</Feature>\n   <Feature name="depth">2</Feature>\n' +
  "  </Annotation>\n" +
  '  <Annotation id="e9" type="wrd" start="a3" end="a4">\n' +
  '   <Feature name="label">ran</Feature>\n   <Feature name="depth">3</Feature>\n' +
  "  </Annotation>\n </AG>\n</AGSet>\n";

function parsed(): Graph {
  return parsePayload(TREE)[0];
}

describe("decodeTree", () => {
  it("rebuilds the bracketed structure", () => {
    const root = decodeTree(parsed());
    expect(brackets(root)).toBe("(S (NP-2 (DT the) (NN dog)) (VP (VBD ran)))");
    expect(terminalYield(root)).toEqual(["the", "dog", "ran"]);
  });

  it("keeps annotation id numbers as node ids", () => {
    const root = decodeTree(parsed());
    expect(root.id).toBe(1);
    expect(root.children.map((c) => c.id)).toEqual([2, 7]);
    expect(root.children[0].trace).toBe(2);
  });

  it("rejects a graph with no words", () => {
    const graph = parsed();
    for (const id of [...graph.annotations.keys()])
      if (graph.annotations.get(id)!.type === "wrd") graph.annotations.delete(id);
    expect(() => decodeTree(graph)).toThrow(NotATreeError);
  });

  it("rejects a broken word chain", () => {
    const graph = parsed();
    const w = graph.annotations.get("e6")!;
    w.end = w.start; // "dog" now spans nothing, so the chain stops early
    expect(() => decodeTree(graph)).toThrow(NotATreeError);
  });

  it("rejects crossing spans", () => {
    const graph = parsed();
    graph.annotations.get("e7")!.start = "a2"; // VP now overlaps NP halfway
    expect(() => decodeTree(graph)).toThrow("crossing spans");
  });

  it("rejects equal spans with equal depth", () => {
    const graph = parsed();
    const vp = graph.annotations.get("e7")!;
    vp.start = "a1"; // make VP a twin of NP: same span, same depth
    vp.end = "a3";
    vp.features.set("depth", "1");
    expect(() => decodeTree(graph)).toThrow("equal spans with equal depth");
  });

  it("rejects a missing root span", () => {
    const graph = parsed();
    graph.annotations.delete("e1");
    expect(() => decodeTree(graph)).toThrow("no annotation spans the whole chain");
  });

  it("rejects pos nodes without exactly one word", () => {
    const graph = parsed();
    graph.annotations.delete("e9"); // VBD loses its word
    expect(() => decodeTree(graph)).toThrow(NotATreeError);
  });
});
