// Whiteboard state: immutable snapshots, one history entry per user action.

export interface BoardNode {
  iri: string;
  label: string;
  /** Primary rdf type in short form ("prov:Person"); "" when the source response carried none. */
  kind: string;
  x: number;
  y: number;
}

export interface BoardEdge {
  source: string;
  predicate: string;
  target: string;
}

export interface ExpandCursor {
  /** Offset of the next unfetched page. */
  offset: number;
  total: number;
  done: boolean;
}

export interface BoardState {
  nodes: BoardNode[];
  edges: BoardEdge[];
  selection: string | null;
  cursors: Record<string, ExpandCursor>;
}

export function emptyBoard(): BoardState {
  return { nodes: [], edges: [], selection: null, cursors: {} };
}

/** Cursor key for one predicate group of one node. Keys are opaque; iri goes last. */
export function expandKey(iri: string, predicate: string, direction: string): string {
  return `${direction} ${predicate} ${iri}`;
}

export function findNode(state: BoardState, iri: string): BoardNode | undefined {
  return state.nodes.find((n) => n.iri === iri);
}

export function hasEdge(state: BoardState, edge: BoardEdge): boolean {
  return state.edges.some(
    (e) => e.source === edge.source && e.predicate === edge.predicate && e.target === edge.target,
  );
}

/** No-op (returns the same reference) when the node is already on the board. */
export function addNode(state: BoardState, node: BoardNode): BoardState {
  if (findNode(state, node.iri)) return state;
  const placed = { ...node, x: Math.round(node.x), y: Math.round(node.y) };
  return { ...state, nodes: [...state.nodes, placed] };
}

export function moveNode(state: BoardState, iri: string, x: number, y: number): BoardState {
  const node = findNode(state, iri);
  if (!node) return state;
  const rx = Math.round(x);
  const ry = Math.round(y);
  if (node.x === rx && node.y === ry) return state;
  return {
    ...state,
    nodes: state.nodes.map((n) => (n.iri === iri ? { ...n, x: rx, y: ry } : n)),
  };
}

/** Removes the node, its incident edges, and its expansion cursors. */
export function removeNode(state: BoardState, iri: string): BoardState {
  if (!findNode(state, iri)) return state;
  const cursors: Record<string, ExpandCursor> = {};
  for (const [key, cursor] of Object.entries(state.cursors)) {
    if (!key.endsWith(` ${iri}`)) cursors[key] = cursor;
  }
  return {
    nodes: state.nodes.filter((n) => n.iri !== iri),
    edges: state.edges.filter((e) => e.source !== iri && e.target !== iri),
    selection: state.selection === iri ? null : state.selection,
    cursors,
  };
}

export function select(state: BoardState, iri: string | null): BoardState {
  if (state.selection === iri) return state;
  if (iri !== null && !findNode(state, iri)) return state;
  return { ...state, selection: iri };
}

/**
 * Applies one fetched expansion page: new nodes, new edges, and the
 * advanced cursor. Nodes and edges already on the board are skipped, so
 * re-expanding after an undo cannot duplicate anything. Edges whose
 * endpoints are not on the board after the node merge are dropped.
 */
export function applyExpansion(
  state: BoardState,
  key: string,
  nodes: BoardNode[],
  edges: BoardEdge[],
  cursor: ExpandCursor,
): BoardState {
  let next: BoardState = { ...state, cursors: { ...state.cursors, [key]: cursor } };
  for (const node of nodes) next = addNode(next, node);
  const accepted = next.edges.slice();
  for (const edge of edges) {
    if (!findNode(next, edge.source) || !findNode(next, edge.target)) continue;
    if (accepted.some((e) => e.source === edge.source && e.predicate === edge.predicate && e.target === edge.target)) {
      continue;
    }
    accepted.push(edge);
  }
  return { ...next, edges: accepted };
}

/** True when every edge endpoint is a board node; render and decode rely on it. */
export function edgesConsistent(state: BoardState): boolean {
  const iris = new Set(state.nodes.map((n) => n.iri));
  return state.edges.every((e) => iris.has(e.source) && iris.has(e.target));
}

export class BoardHistory {
  private past: BoardState[] = [];
  present: BoardState;

  constructor(initial: BoardState = emptyBoard()) {
    this.present = initial;
  }

  /** Records a user action: the prior state becomes undoable. */
  commit(next: BoardState): void {
    if (next === this.present) return;
    this.past.push(this.present);
    this.present = next;
  }

  /** Updates without recording; selection changes use this. */
  replace(next: BoardState): void {
    this.present = next;
  }

  get canUndo(): boolean {
    return this.past.length > 0;
  }

  /** Restores the exact snapshot the last commit replaced. */
  undo(): boolean {
    const prior = this.past.pop();
    if (!prior) return false;
    this.present = prior;
    return true;
  }
}

// URL fragment codec. The whole state travels base64url-encoded under
// "#board=", so sessions are shareable by copying the address.

const FRAGMENT_PREFIX = "board=";

function b64encodeUtf8(text: string): string {
  const bytes = new TextEncoder().encode(text);
  let binary = "";
  for (let i = 0; i < bytes.length; i += 0x1000) {
    binary += String.fromCharCode(...bytes.subarray(i, i + 0x1000));
  }
  return btoa(binary).replace(/\+/g, "-").replace(/\//g, "_").replace(/=+$/, "");
}

function b64decodeUtf8(encoded: string): string {
  const padded = encoded.replace(/-/g, "+").replace(/_/g, "/");
  const binary = atob(padded);
  const bytes = new Uint8Array(binary.length);
  for (let i = 0; i < binary.length; i++) bytes[i] = binary.charCodeAt(i);
  return new TextDecoder().decode(bytes);
}

export function encodeFragment(state: BoardState): string {
  return FRAGMENT_PREFIX + b64encodeUtf8(JSON.stringify(state));
}

/**
 * Parses a "#board=..." fragment back into a BoardState, or null when the
 * fragment is absent or malformed. Edges with missing endpoints and a
 * selection that is not on the board are dropped rather than trusted.
 */
export function decodeFragment(fragment: string): BoardState | null {
  const raw = fragment.startsWith("#") ? fragment.slice(1) : fragment;
  if (!raw.startsWith(FRAGMENT_PREFIX)) return null;
  let parsed: unknown;
  try {
    parsed = JSON.parse(b64decodeUtf8(raw.slice(FRAGMENT_PREFIX.length)));
  } catch {
    return null;
  }
  if (typeof parsed !== "object" || parsed === null) return null;
  const candidate = parsed as Partial<BoardState>;
  if (!Array.isArray(candidate.nodes) || !Array.isArray(candidate.edges)) return null;

  const state = emptyBoard();
  for (const node of candidate.nodes) {
    if (typeof node?.iri !== "string" || typeof node?.label !== "string") return null;
    if (typeof node.x !== "number" || typeof node.y !== "number") return null;
    state.nodes.push({
      iri: node.iri,
      label: node.label,
      kind: typeof node.kind === "string" ? node.kind : "",
      x: Math.round(node.x),
      y: Math.round(node.y),
    });
  }
  const iris = new Set(state.nodes.map((n) => n.iri));
  for (const edge of candidate.edges) {
    if (typeof edge?.source !== "string" || typeof edge?.predicate !== "string" || typeof edge?.target !== "string") {
      return null;
    }
    if (iris.has(edge.source) && iris.has(edge.target)) state.edges.push({ ...edge });
  }
  if (typeof candidate.selection === "string" && iris.has(candidate.selection)) {
    state.selection = candidate.selection;
  }
  if (candidate.cursors && typeof candidate.cursors === "object") {
    for (const [key, cursor] of Object.entries(candidate.cursors)) {
      if (
        typeof cursor?.offset === "number" &&
        typeof cursor?.total === "number" &&
        typeof cursor?.done === "boolean"
      ) {
        state.cursors[key] = { offset: cursor.offset, total: cursor.total, done: cursor.done };
      }
    }
  }
  return state;
}
