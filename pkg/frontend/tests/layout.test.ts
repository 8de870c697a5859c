import { readFileSync } from "node:fs";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { parseDot } from "../src/dot.js";
import { layoutGraph } from "../src/layout.js";

const FIXTURE_DOT = readFileSync(
  join(__dirname, "fixtures", "fixture-model.dot"),
  "utf-8",
);

describe("layoutGraph", () => {
  const graph = parseDot(FIXTURE_DOT);
  const layout = layoutGraph(graph.nodes, graph.edges);

  it("positions every node inside the canvas", () => {
    expect(layout.positions.size).toBe(graph.nodes.length);
    for (const { x, y } of layout.positions.values()) {
      expect(Number.isFinite(x)).toBe(true);
      expect(Number.isFinite(y)).toBe(true);
      expect(x).toBeGreaterThan(0);
      expect(y).toBeGreaterThan(0);
      expect(x).toBeLessThanOrEqual(layout.width);
      expect(y).toBeLessThanOrEqual(layout.height);
    }
  });

  it("arranges the acyclic fixture left to right", () => {
    for (const edge of graph.edges) {
      const a = layout.positions.get(edge.source)!;
      const b = layout.positions.get(edge.target)!;
      expect(a.x).toBeLessThan(b.x);
    }
  });

  it("does not explode on cycles", () => {
    const cyclic = parseDot(
      [
        "digraph g {",
        '  "place:A:p0" [shape=circle, label="p0", color="#111111", xlabel="A"];',
        '  "trans:a" [shape=box, label="a"];',
        '  "place:A:p0" -> "trans:a" [color="#111111"];',
        '  "trans:a" -> "place:A:p0" [color="#111111"];',
        "}",
      ].join("\n"),
    );
    const result = layoutGraph(cyclic.nodes, cyclic.edges);
    expect(result.positions.size).toBe(2);
  });
});
