// Parser for the DOT text the backend emits: one node or edge per line,
// quoted identifiers, [key=value, ...] attribute lists. This is not a
// general DOT parser; the layout/render layers only ever see server output.

export interface DotNode {
  id: string;
  kind: "place" | "transition";
  name: string;
  label: string;
  annotation: string | null;
  color: string | null;
  objectType: string | null;
  silent: boolean;
}

export interface DotEdge {
  source: string;
  target: string;
  color: string;
  variable: boolean;
}

export interface DotGraph {
  nodes: DotNode[];
  edges: DotEdge[];
}

const NODE_RE = /^\s*"((?:[^"\\]|\\.)*)"\s*\[(.*)\];\s*$/;
const EDGE_RE = /^\s*"((?:[^"\\]|\\.)*)"\s*->\s*"((?:[^"\\]|\\.)*)"\s*\[(.*)\];\s*$/;

function unescape(text: string): string {
  return text.replace(/\\(.)/g, (_, ch) => (ch === "n" ? "\n" : ch));
}

function parseAttrs(text: string): Record<string, string> {
  const attrs: Record<string, string> = {};
  const re = /([\w]+)=("(?:[^"\\]|\\.)*"|[^,\]\s]+)/g;
  for (const match of text.matchAll(re)) {
    let value = match[2];
    if (value.startsWith('"')) value = unescape(value.slice(1, -1));
    attrs[match[1]] = value;
  }
  return attrs;
}

export function parseDot(text: string): DotGraph {
  const nodes: DotNode[] = [];
  const edges: DotEdge[] = [];
  for (const line of text.split("\n")) {
    const edgeMatch = line.match(EDGE_RE);
    if (edgeMatch) {
      const attrs = parseAttrs(edgeMatch[3]);
      const color = attrs.color ?? "#000000";
      edges.push({
        source: unescape(edgeMatch[1]),
        target: unescape(edgeMatch[2]),
        color: color.split(":")[0],
        variable: color.includes(":"),
      });
      continue;
    }
    const nodeMatch = line.match(NODE_RE);
    if (!nodeMatch) continue;
    const id = unescape(nodeMatch[1]);
    const attrs = parseAttrs(nodeMatch[2]);
    const kind = id.startsWith("place:") ? "place" : "transition";
    const name = id.replace(/^(place|trans):/, "");
    const rawLabel = attrs.label ?? name;
    const [label, ...rest] = rawLabel.split("\n");
    nodes.push({
      id,
      kind,
      name,
      label: kind === "transition" && !rawLabel ? "" : label || name,
      annotation: rest.length ? rest.join("\n") : null,
      color: attrs.color ?? attrs.fillcolor ?? null,
      objectType: attrs.xlabel ?? null,
      silent: kind === "transition" && !attrs.label,
    });
  }
  return { nodes, edges };
}

/** The displayed badge: the value part of a "measure agg: value" annotation. */
export function badgeText(annotation: string | null): string {
  if (!annotation) return "n/a";
  const idx = annotation.indexOf(": ");
  return idx < 0 ? annotation : annotation.slice(idx + 2);
}
