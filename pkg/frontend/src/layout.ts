// Layered left-to-right layout for the parsed server graph. Good enough
// for workflow-shaped nets: sources at layer 0, longest-path layering on
// the acyclic part, barycenter ordering within layers.

import { DotEdge, DotNode } from "./dot.js";

export interface NodePosition {
  x: number;
  y: number;
}

export interface GraphLayout {
  positions: Map<string, NodePosition>;
  width: number;
  height: number;
}

const DX = 132;
const DY = 64;
const MARGIN = 48;

export function layoutGraph(nodes: DotNode[], edges: DotEdge[]): GraphLayout {
  const ids = nodes.map((n) => n.id);
  const out = new Map<string, string[]>(ids.map((id) => [id, []]));
  const indegree = new Map<string, number>(ids.map((id) => [id, 0]));
  for (const e of edges) {
    if (!out.has(e.source) || !out.has(e.target)) continue;
    out.get(e.source)!.push(e.target);
    indegree.set(e.target, (indegree.get(e.target) ?? 0) + 1);
  }

  // Kahn order; edges inside cycles are ignored for layering purposes.
  const order: string[] = [];
  const remaining = new Map(indegree);
  const queue = ids.filter((id) => (remaining.get(id) ?? 0) === 0).sort();
  const seen = new Set<string>();
  while (queue.length) {
    const id = queue.shift()!;
    if (seen.has(id)) continue;
    seen.add(id);
    order.push(id);
    for (const next of out.get(id) ?? []) {
      const left = (remaining.get(next) ?? 0) - 1;
      remaining.set(next, left);
      if (left <= 0 && !seen.has(next)) queue.push(next);
    }
  }
  for (const id of ids) {
    if (!seen.has(id)) order.push(id); // nodes on cycles, in input order
  }

  const layer = new Map<string, number>(ids.map((id) => [id, 0]));
  for (const id of order) {
    for (const next of out.get(id) ?? []) {
      if (order.indexOf(next) > order.indexOf(id)) {
        layer.set(next, Math.max(layer.get(next) ?? 0, (layer.get(id) ?? 0) + 1));
      }
    }
  }

  const byLayer = new Map<number, string[]>();
  for (const id of ids) {
    const l = layer.get(id) ?? 0;
    if (!byLayer.has(l)) byLayer.set(l, []);
    byLayer.get(l)!.push(id);
  }

  // Order within layers by the average position of predecessors.
  const rowIndex = new Map<string, number>();
  const layers = [...byLayer.keys()].sort((a, b) => a - b);
  for (const l of layers) {
    const members = byLayer.get(l)!;
    members.sort((a, b) => {
      const bary = (id: string) => {
        const preds = edges
          .filter((e) => e.target === id && rowIndex.has(e.source))
          .map((e) => rowIndex.get(e.source)!);
        return preds.length
          ? preds.reduce((s, v) => s + v, 0) / preds.length
          : Number.MAX_SAFE_INTEGER;
      };
      return bary(a) - bary(b) || (a < b ? -1 : 1);
    });
    members.forEach((id, i) => rowIndex.set(id, i));
  }

  const positions = new Map<string, NodePosition>();
  let maxRow = 0;
  for (const l of layers) {
    const members = byLayer.get(l)!;
    maxRow = Math.max(maxRow, members.length - 1);
    members.forEach((id, i) => {
      positions.set(id, { x: MARGIN + l * DX, y: MARGIN + i * DY });
    });
  }
  const maxLayer = layers.length ? layers[layers.length - 1] : 0;
  return {
    positions,
    width: MARGIN * 2 + maxLayer * DX + 60,
    height: MARGIN * 2 + maxRow * DY + 40,
  };
}
