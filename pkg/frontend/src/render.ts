// SVG rendering of the whiteboard. Full redraw per change; at the scale of a
// hand-built board that is cheaper than bookkeeping incremental updates.

import type { BoardState } from "./board.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const NODE_RADIUS = 16;
const LABEL_OFFSET = 30;

export interface BoardHandlers {
  onNodePointerDown(iri: string, ev: PointerEvent): void;
  onNodeClick(iri: string, ev: MouseEvent): void;
  onNodeDoubleClick(iri: string): void;
  onBackgroundClick(): void;
}

function kindClass(kind: string): string {
  if (kind === "prov:Person") return "person";
  if (kind === "frbr:Expression") return "expression";
  if (kind === "urb:Folksonomy") return "subject";
  return "plain";
}

function el(name: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS(SVG_NS, name);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  return node;
}

export function renderBoard(
  svg: SVGSVGElement,
  state: BoardState,
  stale: Set<string>,
  handlers: BoardHandlers,
): void {
  svg.textContent = "";

  const edgeGroup = el("g", { class: "edges" });
  const byIri = new Map(state.nodes.map((n) => [n.iri, n]));
  for (const edge of state.edges) {
    const a = byIri.get(edge.source);
    const b = byIri.get(edge.target);
    if (!a || !b) continue;
    const line = el("line", {
      class: "edge",
      x1: String(a.x),
      y1: String(a.y),
      x2: String(b.x),
      y2: String(b.y),
      "data-predicate": edge.predicate,
      "data-source": edge.source,
      "data-target": edge.target,
    });
    const caption = el("title", {});
    caption.textContent = edge.predicate;
    line.appendChild(caption);
    edgeGroup.appendChild(line);
  }
  svg.appendChild(edgeGroup);

  const nodeGroup = el("g", { class: "nodes" });
  for (const node of state.nodes) {
    const classes = ["node", kindClass(node.kind)];
    if (state.selection === node.iri) classes.push("selected");
    if (stale.has(node.iri)) classes.push("stale");
    const g = el("g", {
      class: classes.join(" "),
      transform: `translate(${node.x},${node.y})`,
      "data-iri": node.iri,
    });
    g.appendChild(el("circle", { r: String(NODE_RADIUS) }));
    const label = el("text", { y: String(LABEL_OFFSET), "text-anchor": "middle" });
    label.textContent = node.label;
    g.appendChild(label);
    const hint = el("title", {});
    hint.textContent = `${node.label}\ndouble-click to expand, click for details`;
    g.appendChild(hint);

    g.addEventListener("pointerdown", (ev) => handlers.onNodePointerDown(node.iri, ev as PointerEvent));
    g.addEventListener("click", (ev) => {
      ev.stopPropagation();
      handlers.onNodeClick(node.iri, ev as MouseEvent);
    });
    g.addEventListener("dblclick", (ev) => {
      ev.stopPropagation();
      handlers.onNodeDoubleClick(node.iri);
    });
    nodeGroup.appendChild(g);
  }
  svg.appendChild(nodeGroup);
}

/** Wires the background click once; render wipes children, not svg listeners. */
export function bindBackground(svg: SVGSVGElement, handlers: BoardHandlers): void {
  svg.addEventListener("click", (ev) => {
    if (ev.target === svg || (ev.target as Element).classList?.contains("edges")) {
      handlers.onBackgroundClick();
    }
  });
}

/** Board coordinates for a pointer event, tolerant of an unlaid-out svg. */
export function boardPoint(svg: SVGSVGElement, ev: { clientX: number; clientY: number }): { x: number; y: number } {
  const rect = svg.getBoundingClientRect();
  return { x: ev.clientX - rect.left, y: ev.clientY - rect.top };
}
