// Wires the panes, the whiteboard, and the board history together.

import { ApiError, HttpApi, LatestGate, type Api } from "./api.js";
import {
  BoardHistory,
  addNode,
  applyExpansion,
  decodeFragment,
  emptyBoard,
  encodeFragment,
  expandKey,
  findNode,
  moveNode,
  removeNode,
  select,
  type BoardEdge,
  type BoardNode,
  type BoardState,
  type ExpandCursor,
} from "./board.js";
import { freePosition, ringPositions } from "./layout.js";
import { bindBackground, boardPoint, renderBoard, type BoardHandlers } from "./render.js";
import {
  Banner,
  InfoPane,
  SearchPane,
  Sidebar,
  Tour,
  iriTail,
  type GroupView,
} from "./panes.js";
import type { BrowseEntityRow, EntityResponse, NeighborsResponse, SearchHit } from "./types.js";

const PAGE_SIZE = 8;
const CENTER = { x: 420, y: 250 };
const EXAMPLE_SPOTS = [
  { x: 300, y: 180 },
  { x: 560, y: 300 },
];

export interface AppOptions {
  api?: Api;
  root: HTMLElement;
  /** Fragment to restore; defaults to window.location.hash. */
  fragment?: string | null;
  /** Load a starter board when there is nothing to restore. Default true. */
  exampleBoard?: boolean;
  storage?: Storage;
  /** Mirror the board into location.hash after each change. Default true. */
  syncHash?: boolean;
}

export interface App {
  readonly ready: Promise<void>;
  getState(): BoardState;
  canUndo(): boolean;
  undo(): void;
  /** Resolves once every in-flight request has settled; test hook. */
  whenIdle(): Promise<void>;
}

interface PaneData {
  entity: EntityResponse;
  places: Array<{ country: string; expressions: number }>;
  neighbors: NeighborsResponse | null;
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return err.status ? `${err.message} (${err.status})` : err.message;
  return String(err);
}

export function createApp(opts: AppOptions): App {
  const api = opts.api ?? new HttpApi();
  const root = opts.root;
  const storage = opts.storage ?? window.localStorage;
  const syncHash = opts.syncHash ?? true;

  const history = new BoardHistory(emptyBoard());
  const stale = new Set<string>();

  let pending = 0;
  const idleResolvers: Array<() => void> = [];
  function track(p: Promise<unknown>): void {
    pending++;
    void p
      .catch(() => undefined)
      .finally(() => {
        pending--;
        if (pending === 0) while (idleResolvers.length) idleResolvers.shift()!();
      });
  }

  const searchGate = new LatestGate();
  const paneGate = new LatestGate();
  const browseGate = new LatestGate();

  // --- static skeleton ---

  const banner = new Banner();
  const header = document.createElement("header");
  header.className = "app-header";
  const title = document.createElement("h1");
  title.textContent = "literature graph board";
  header.appendChild(title);
  const undoBtn = document.createElement("button");
  undoBtn.id = "undo-btn";
  undoBtn.textContent = "undo";
  undoBtn.title = "step the board back one action (Ctrl+Z)";
  undoBtn.disabled = true;
  header.appendChild(undoBtn);

  const layout = document.createElement("main");
  layout.className = "layout";
  const left = document.createElement("div");
  left.className = "left-column";
  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg") as SVGSVGElement;
  svg.id = "board";
  svg.setAttribute("viewBox", "0 0 840 520");

  const searchPane = new SearchPane({
    runSearch,
    addHit: (hit) => addHitAt(hit, freePosition(history.present, CENTER.x, CENTER.y)),
    beginHitDrag,
  });
  const sidebar = new Sidebar({
    browseFacet,
    browseValue,
    addEntity: addBrowseEntity,
  });
  const infoPane = new InfoPane({
    expandGroup,
    removeNode: removeNodeAction,
    browseValue,
  });

  left.appendChild(searchPane.root);
  left.appendChild(sidebar.root);
  layout.appendChild(left);
  layout.appendChild(svg);
  layout.appendChild(infoPane.root);

  root.appendChild(banner.root);
  const tour = Tour.maybeCreate(storage);
  if (tour) root.appendChild(tour.root);
  root.appendChild(header);
  root.appendChild(layout);

  // --- state plumbing ---

  function syncBoard(): void {
    renderBoard(svg, history.present, stale, handlers);
    undoBtn.disabled = !history.canUndo;
    if (syncHash) {
      window.history.replaceState(null, "", `#${encodeFragment(history.present)}`);
    }
  }

  function commitState(next: BoardState, record: boolean): void {
    if (next === history.present) return;
    if (record) history.commit(next);
    else history.replace(next);
    syncBoard();
  }

  function groupViews(entity: EntityResponse): GroupView[] {
    const state = history.present;
    return entity.edge_counts.map((row) => {
      const added = state.edges.filter((e) =>
        row.direction === "in"
          ? e.target === entity.iri && e.predicate === row.predicate
          : e.source === entity.iri && e.predicate === row.predicate,
      ).length;
      const cursor = state.cursors[expandKey(entity.iri, row.predicate, row.direction)];
      return {
        predicate: row.predicate,
        direction: row.direction,
        count: row.count,
        added,
        done: cursor?.done || added >= row.count,
      };
    });
  }

  /** Turns one fetched neighbor page into board nodes, edges, and a cursor. */
  function expansionFromPage(
    state: BoardState,
    iri: string,
    page: NeighborsResponse,
    offset: number,
  ): { nodes: BoardNode[]; edges: BoardEdge[]; cursor: ExpandCursor } {
    const anchor = findNode(state, iri);
    const fresh = page.edges.filter((e) => e.other !== iri && !findNode(state, e.other));
    const spots = anchor
      ? ringPositions(state, anchor, fresh.length, offset)
      : fresh.map(() => freePosition(state, CENTER.x, CENTER.y));
    const nodes = fresh.map((edge, i) => ({
      iri: edge.other,
      label: edge.other_label ?? iriTail(edge.other),
      kind: "",
      x: spots[i].x,
      y: spots[i].y,
    }));
    const edges = page.edges.map((edge) =>
      edge.direction === "in"
        ? { source: edge.other, predicate: edge.predicate, target: iri }
        : { source: iri, predicate: edge.predicate, target: edge.other },
    );
    const nextOffset = offset + page.edges.length;
    const done = page.edges.length === 0 || nextOffset >= page.total;
    return { nodes, edges, cursor: { offset: nextOffset, total: page.total, done } };
  }

  function handleNodeError(iri: string, err: unknown, retry: () => void): void {
    if (err instanceof ApiError && err.status === 404) {
      stale.add(iri);
      syncBoard();
      banner.show(`"${iriTail(iri)}" is no longer in the graph; the node is marked stale`);
    } else {
      banner.show(describe(err), retry);
    }
  }

  // --- actions ---

  function runSearch(query: string): void {
    track(
      searchGate
        .run(() => api.search(query, undefined, 20))
        .then((res) => {
          if (res) searchPane.renderHits(res.results);
        })
        .catch((err) => banner.show(`search failed: ${describe(err)}`, () => runSearch(query))),
    );
  }

  function addHitAt(hit: SearchHit, at: { x: number; y: number }): void {
    const node: BoardNode = {
      iri: hit.iri,
      label: hit.label,
      kind: hit.types[0] ?? "",
      x: at.x,
      y: at.y,
    };
    commitState(addNode(history.present, node), true);
  }

  function addBrowseEntity(row: BrowseEntityRow): void {
    track(
      (async () => {
        try {
          const entity = await api.entity(row.iri);
          const spot = freePosition(history.present, CENTER.x, CENTER.y);
          const node: BoardNode = {
            iri: row.iri,
            label: entity.labels[0] ?? row.label ?? iriTail(row.iri),
            kind: entity.types[0] ?? "",
            x: spot.x,
            y: spot.y,
          };
          commitState(addNode(history.present, node), true);
        } catch (err) {
          banner.show(describe(err), () => addBrowseEntity(row));
        }
      })(),
    );
  }

  function expandGroup(iri: string, predicate: string, direction: string): void {
    const key = expandKey(iri, predicate, direction);
    const cursor = history.present.cursors[key];
    if (cursor?.done) return;
    const offset = cursor?.offset ?? 0;
    track(
      (async () => {
        try {
          const page = await api.neighbors(iri, { predicate, direction, limit: PAGE_SIZE, offset });
          if (!findNode(history.present, iri)) return; // removed while in flight
          const { nodes, edges, cursor: advanced } = expansionFromPage(history.present, iri, page, offset);
          commitState(applyExpansion(history.present, key, nodes, edges, advanced), true);
          refreshInfoPane();
        } catch (err) {
          handleNodeError(iri, err, () => expandGroup(iri, predicate, direction));
        }
      })(),
    );
  }

  /** Double-click: expand attributed works first, else the first open group. */
  function expandDefault(iri: string): void {
    track(
      (async () => {
        try {
          const entity = await api.entity(iri);
          const groups = groupViews(entity);
          const target =
            groups.find((g) => g.predicate === "prov:wasAttributedTo" && !g.done) ??
            groups.find((g) => !g.done);
          if (target) expandGroup(iri, target.predicate, target.direction);
        } catch (err) {
          handleNodeError(iri, err, () => expandDefault(iri));
        }
      })(),
    );
  }

  function removeNodeAction(iri: string): void {
    commitState(removeNode(history.present, iri), true);
    refreshInfoPane();
  }

  function selectNode(iri: string | null): void {
    commitState(select(history.present, iri), false);
    refreshInfoPane();
  }

  function doUndo(): void {
    if (!history.undo()) return;
    syncBoard();
    refreshInfoPane();
  }

  // --- info pane ---

  async function fetchPaneData(iri: string): Promise<PaneData> {
    const entity = await api.entity(iri);
    const places = entity.types.includes("prov:Person") ? (await api.places(iri)).places : [];
    const neighbors = entity.types.includes("frbr:Expression")
      ? await api.neighbors(iri, { limit: 100 })
      : null;
    return { entity, places, neighbors };
  }

  function refreshInfoPane(): void {
    const iri = history.present.selection;
    if (!iri) {
      infoPane.renderEmpty();
      return;
    }
    const node = findNode(history.present, iri);
    infoPane.renderLoading(node?.label ?? iriTail(iri));
    track(
      paneGate
        .run(() => fetchPaneData(iri))
        .then((data) => {
          if (!data) return; // a later selection overtook this fetch
          if (history.present.selection !== iri) return;
          const groups = groupViews(data.entity);
          if (data.entity.types.includes("prov:Person")) {
            infoPane.renderPerson(data.entity, data.places, groups);
          } else if (data.entity.types.includes("frbr:Expression") && data.neighbors) {
            infoPane.renderExpression(data.entity, data.neighbors, groups);
          } else {
            infoPane.renderGeneric(data.entity, groups);
          }
        })
        .catch((err) => {
          if (err instanceof ApiError && err.status === 404) {
            stale.add(iri);
            syncBoard();
          }
          infoPane.renderError(describe(err), () => refreshInfoPane());
        }),
    );
  }

  // --- browse sidebar ---

  function browseFacet(facet: string): void {
    track(
      browseGate
        .run(() => api.browse(facet))
        .then((res) => {
          if (res) sidebar.renderValues(facet, res.values ?? []);
        })
        .catch((err) => sidebar.renderError(describe(err), () => browseFacet(facet))),
    );
  }

  function browseValue(facet: string, value: string): void {
    track(
      browseGate
        .run(() => api.browse(facet, value))
        .then((res) => {
          if (res) sidebar.renderEntities(facet, value, res.entities ?? []);
        })
        .catch((err) => sidebar.renderError(describe(err), () => browseValue(facet, value))),
    );
  }

  // --- pointer interactions ---

  interface HitDrag {
    hit: SearchHit;
    ghost: HTMLElement;
  }
  interface NodeDrag {
    iri: string;
    clientX0: number;
    clientY0: number;
    origX: number;
    origY: number;
    moved: boolean;
  }
  let hitDrag: HitDrag | null = null;
  let nodeDrag: NodeDrag | null = null;
  let suppressClick = false;

  function beginHitDrag(hit: SearchHit, ev: PointerEvent): void {
    ev.preventDefault();
    const ghost = document.createElement("div");
    ghost.className = "drag-ghost";
    ghost.textContent = hit.label;
    ghost.style.left = `${ev.clientX}px`;
    ghost.style.top = `${ev.clientY}px`;
    document.body.appendChild(ghost);
    hitDrag = { hit, ghost };
  }

  const handlers: BoardHandlers = {
    onNodePointerDown(iri, ev) {
      const node = findNode(history.present, iri);
      if (!node) return;
      ev.preventDefault();
      nodeDrag = {
        iri,
        clientX0: ev.clientX,
        clientY0: ev.clientY,
        origX: node.x,
        origY: node.y,
        moved: false,
      };
    },
    onNodeClick(iri) {
      if (suppressClick) {
        suppressClick = false;
        return;
      }
      selectNode(iri);
    },
    onNodeDoubleClick(iri) {
      expandDefault(iri);
    },
    onBackgroundClick() {
      selectNode(null);
    },
  };

  function dragPosition(drag: NodeDrag, ev: { clientX: number; clientY: number }): { x: number; y: number } {
    return { x: drag.origX + (ev.clientX - drag.clientX0), y: drag.origY + (ev.clientY - drag.clientY0) };
  }

  document.addEventListener("pointermove", (ev) => {
    if (hitDrag) {
      hitDrag.ghost.style.left = `${ev.clientX}px`;
      hitDrag.ghost.style.top = `${ev.clientY}px`;
      return;
    }
    if (nodeDrag) {
      const { x, y } = dragPosition(nodeDrag, ev);
      if (x !== nodeDrag.origX || y !== nodeDrag.origY) nodeDrag.moved = true;
      // Live feedback without touching history: move the group and its edges.
      const quoted = nodeDrag.iri.replace(/(["\\])/g, "\\$1");
      const g = svg.querySelector(`g[data-iri="${quoted}"]`);
      g?.setAttribute("transform", `translate(${x},${y})`);
      for (const line of svg.querySelectorAll("line.edge")) {
        if (line.getAttribute("data-source") === nodeDrag.iri) {
          line.setAttribute("x1", String(x));
          line.setAttribute("y1", String(y));
        }
        if (line.getAttribute("data-target") === nodeDrag.iri) {
          line.setAttribute("x2", String(x));
          line.setAttribute("y2", String(y));
        }
      }
    }
  });

  document.addEventListener("pointerup", (ev) => {
    if (hitDrag) {
      const drag = hitDrag;
      hitDrag = null;
      drag.ghost.remove();
      const target = ev.target as Node | null;
      if (target && (target === svg || svg.contains(target))) {
        addHitAt(drag.hit, boardPoint(svg, ev));
      }
      return;
    }
    if (nodeDrag) {
      const drag = nodeDrag;
      nodeDrag = null;
      if (drag.moved) {
        suppressClick = true;
        const { x, y } = dragPosition(drag, ev);
        commitState(moveNode(history.present, drag.iri, x, y), true);
      }
    }
  });

  undoBtn.addEventListener("click", doUndo);
  document.addEventListener("keydown", (ev) => {
    const tag = (document.activeElement?.tagName ?? "").toLowerCase();
    if (tag === "input" || tag === "textarea") return;
    if ((ev.ctrlKey || ev.metaKey) && ev.key.toLowerCase() === "z") {
      ev.preventDefault();
      doUndo();
    } else if (ev.key === "Delete" && history.present.selection) {
      removeNodeAction(history.present.selection);
    }
  });
  bindBackground(svg, handlers);

  // --- startup ---

  async function loadExample(): Promise<void> {
    try {
      const browse = await api.browse("role", "Transnational", 2);
      const rows = (browse.entities ?? []).slice(0, EXAMPLE_SPOTS.length);
      let state = emptyBoard();
      for (let i = 0; i < rows.length; i++) {
        const entity = await api.entity(rows[i].iri);
        state = addNode(state, {
          iri: rows[i].iri,
          label: entity.labels[0] ?? rows[i].label ?? iriTail(rows[i].iri),
          kind: entity.types[0] ?? "",
          x: EXAMPLE_SPOTS[i].x,
          y: EXAMPLE_SPOTS[i].y,
        });
      }
      if (rows.length) {
        const first = rows[0].iri;
        const page = await api.neighbors(first, {
          predicate: "prov:wasAttributedTo",
          direction: "in",
          limit: PAGE_SIZE,
          offset: 0,
        });
        const key = expandKey(first, "prov:wasAttributedTo", "in");
        const { nodes, edges, cursor } = expansionFromPage(state, first, page, 0);
        state = applyExpansion(state, key, nodes, edges, cursor);
      }
      history.replace(state); // the example is the baseline, not an undoable step
      syncBoard();
    } catch (err) {
      banner.show(`could not load the example board: ${describe(err)}`, () => {
        track(loadExample());
      });
    }
  }

  async function start(): Promise<void> {
    const fragment = opts.fragment !== undefined ? opts.fragment : window.location.hash;
    const restored = fragment ? decodeFragment(fragment) : null;
    if (restored) {
      history.replace(restored);
      syncBoard();
      refreshInfoPane();
      return;
    }
    syncBoard();
    if (opts.exampleBoard ?? true) await loadExample();
  }

  const ready = start();
  track(ready);

  return {
    ready,
    getState: () => history.present,
    canUndo: () => history.canUndo,
    undo: doUndo,
    whenIdle: () => (pending === 0 ? Promise.resolve() : new Promise((r) => idleResolvers.push(r))),
  };
}

export function main(): void {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app container");
  createApp({ api: new HttpApi(), root });
}
