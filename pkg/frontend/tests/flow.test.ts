// Drives the assembled app through the DOM: search, drag onto the board,
// expand, inspect, undo. The API is canned; everything else is real.

import { beforeEach, describe, expect, it } from "vitest";

import { createApp, type App, type AppOptions } from "../src/app.js";
import type { Api } from "../src/api.js";
import { ACHEBE, ARROW, AZEM, FakeApi, NO_LONGER, TFA, TFA_OL } from "./fake_api.js";

function mount(): HTMLElement {
  document.body.innerHTML = "";
  const root = document.createElement("div");
  root.id = "app";
  document.body.appendChild(root);
  return root;
}

function newApp(api: Api, opts: Partial<AppOptions> = {}): App {
  return createApp({
    api,
    root: mount(),
    fragment: null,
    exampleBoard: false,
    syncHash: false,
    ...opts,
  });
}

async function settle(app: App): Promise<void> {
  await app.ready;
  await app.whenIdle();
}

function $(selector: string): HTMLElement {
  const el = document.querySelector<HTMLElement>(selector);
  if (!el) throw new Error(`missing element: ${selector}`);
  return el;
}

function fire(el: Element | Document, type: string, init: MouseEventInit = {}): void {
  el.dispatchEvent(new MouseEvent(type, { bubbles: true, cancelable: true, ...init }));
}

async function typeSearch(app: App, text: string): Promise<void> {
  const input = $(".search-pane input") as HTMLInputElement;
  input.value = text;
  input.dispatchEvent(new Event("input", { bubbles: true }));
  await app.whenIdle();
}

/** Adds an entity through the search pane's + button. */
async function addViaSearch(app: App, query: string, iri: string): Promise<void> {
  await typeSearch(app, query);
  const hit = $(`.search-hit[data-iri="${iri}"] .hit-add`);
  fire(hit, "click");
  await app.whenIdle();
}

async function selectNode(app: App, iri: string): Promise<void> {
  fire($(`g[data-iri="${iri}"]`), "click");
  await app.whenIdle();
}

function paneFacts(): Array<[string, string]> {
  return [...document.querySelectorAll(".info-pane table.facts tr")].map((row) => [
    row.querySelector("th")?.textContent ?? "",
    row.querySelector("td")?.textContent ?? "",
  ]);
}

beforeEach(() => {
  window.localStorage.clear();
  window.localStorage.setItem("litkg-tour-dismissed", "1");
});

describe("search, drag, expand, inspect, undo", () => {
  it("walks the whole exploration loop", async () => {
    const api = new FakeApi();
    const app = newApp(api);
    await settle(app);
    expect(app.getState().nodes).toEqual([]);

    // Search pane lists the author with a drag handle.
    await typeSearch(app, "Achebe");
    const hit = $(`.search-hit[data-iri="${ACHEBE}"]`);
    expect(hit.textContent).toContain("Chinua Achebe");

    // Drag the hit onto the whiteboard.
    fire(hit, "pointerdown", { clientX: 12, clientY: 30 });
    fire(document, "pointermove", { clientX: 200, clientY: 140 });
    expect(document.querySelector(".drag-ghost")).not.toBeNull();
    fire($("#board"), "pointerup", { clientX: 400, clientY: 250 });
    await app.whenIdle();

    expect(document.querySelector(".drag-ghost")).toBeNull();
    expect(app.getState().nodes).toEqual([
      { iri: ACHEBE, label: "Chinua Achebe", kind: "prov:Person", x: 400, y: 250 },
    ]);
    expect(app.canUndo()).toBe(true);

    // Selecting shows the person view with the role badge.
    await selectNode(app, ACHEBE);
    expect($(".info-pane h2").textContent).toBe("Chinua Achebe");
    expect($(".badge-transnational").textContent).toBe("Transnational");
    expect(paneFacts()).toContainEqual(["dates", "1930–2013"]);
    expect($(".info-places").textContent).toContain("GB ×2");

    const before = app.getState();

    // Expand the attributed-works group.
    const row = $('.group-row[data-predicate="prov:wasAttributedTo"]');
    expect(row.textContent).toContain("4 more");
    fire($('.group-row[data-predicate="prov:wasAttributedTo"] .group-expand'), "click");
    await app.whenIdle();

    const state = app.getState();
    expect(state.nodes.map((n) => n.iri).sort()).toEqual(
      [ACHEBE, TFA, NO_LONGER, TFA_OL, ARROW].sort(),
    );
    // Only the expanded group's edges arrive, each pointing at the author.
    expect(state.edges).toHaveLength(4);
    for (const edge of state.edges) {
      expect(edge.predicate).toBe("prov:wasAttributedTo");
      expect(edge.target).toBe(ACHEBE);
    }
    expect(document.querySelector(`g[data-iri="${TFA}"]`)).not.toBeNull();
    expect(
      document.querySelector(`line.edge[data-source="${TFA}"][data-target="${ACHEBE}"]`),
    ).not.toBeNull();
    // The group now reads as exhausted.
    expect($('.group-row[data-predicate="prov:wasAttributedTo"]').textContent).toContain("all shown");
    expect(document.querySelector('.group-row[data-predicate="prov:wasAttributedTo"] .group-expand')).toBeNull();

    // Selecting the work shows its rating.
    await selectNode(app, TFA);
    expect($(".info-pane h2").textContent).toBe("Things Fall Apart");
    expect($(".info-subtitle").textContent).toBe("work");
    expect(paneFacts()).toContainEqual(["rating", "3.98"]);
    expect(paneFacts()).toContainEqual(["publisher", "Anchor Books"]);
    // Derived facts keep their marker all the way into the DOM.
    const publisherRow = [...document.querySelectorAll(".info-pane table.facts tr")].find(
      (r) => r.querySelector("th")?.textContent === "publisher",
    );
    expect(publisherRow?.className).toBe("derived");

    // Undo restores the exact pre-expansion snapshot.
    fire($("#undo-btn"), "click");
    await app.whenIdle();
    expect(app.getState()).toBe(before);
    expect(document.querySelector(`g[data-iri="${TFA}"]`)).toBeNull();
    expect(document.querySelector(`g[data-iri="${ACHEBE}"]`)).not.toBeNull();
    expect($(".info-pane h2").textContent).toBe("Chinua Achebe");

    // A second undo clears the drag as well.
    app.undo();
    await app.whenIdle();
    expect(app.getState().nodes).toEqual([]);
    expect(app.canUndo()).toBe(false);
    expect(($("#undo-btn") as HTMLButtonElement).disabled).toBe(true);
  });

  it("first load shows the example board", async () => {
    const api = new FakeApi();
    const app = createApp({ api, root: mount(), fragment: null, syncHash: false });
    await settle(app);

    const state = app.getState();
    expect(state.nodes.map((n) => n.iri)).toContain(ACHEBE);
    expect(state.nodes.map((n) => n.iri)).toContain(AZEM);
    expect(state.nodes.length).toBe(6); // two authors plus one page of works
    expect(state.edges.length).toBe(4);
    expect(document.querySelectorAll("g.node").length).toBe(6);
    // The example is the baseline, not an undoable action.
    expect(app.canUndo()).toBe(false);
  });
});

describe("search pane edges", () => {
  it("an empty query shows the prompt and never calls the API", async () => {
    const api = new FakeApi();
    const app = newApp(api);
    await settle(app);

    await typeSearch(app, "   ");
    expect($(".search-prompt").textContent).toBe("type to search");
    expect(api.calls.filter((c) => c.startsWith("search"))).toEqual([]);
  });

  it("a dead service raises the banner; retry recovers", async () => {
    const api = new FakeApi();
    const app = newApp(api);
    await settle(app);

    api.failing = true;
    await typeSearch(app, "Achebe");
    const banner = $(".banner");
    expect(banner.className).not.toContain("hidden");
    expect(banner.textContent).toContain("search failed");

    api.failing = false;
    fire($(".banner-retry"), "click");
    await app.whenIdle();
    expect($(".banner").className).toContain("hidden");
    expect(document.querySelector(`.search-hit[data-iri="${ACHEBE}"]`)).not.toBeNull();
  });
});

describe("expansion edges", () => {
  it("double-click prefers works, then the next open group, then nothing", async () => {
    const api = new FakeApi();
    const app = newApp(api);
    await settle(app);
    await addViaSearch(app, "Achebe", ACHEBE);

    fire($(`g[data-iri="${ACHEBE}"]`), "dblclick");
    await app.whenIdle();
    expect(app.getState().nodes).toHaveLength(5); // author plus four works

    fire($(`g[data-iri="${ACHEBE}"]`), "dblclick");
    await app.whenIdle();
    const withPage = app.getState();
    expect(withPage.nodes).toHaveLength(6); // the wikipedia page joined
    expect(withPage.nodes.some((n) => n.label === "Chinua_Achebe")).toBe(true);

    // Every group is exhausted now: no further fetch, no change.
    const neighborCalls = api.calls.filter((c) => c.startsWith("neighbors")).length;
    fire($(`g[data-iri="${ACHEBE}"]`), "dblclick");
    await app.whenIdle();
    expect(app.getState()).toBe(withPage);
    expect(api.calls.filter((c) => c.startsWith("neighbors")).length).toBe(neighborCalls);
  });

  it("flags a node stale when the graph no longer has it", async () => {
    const api = new FakeApi();
    const app = newApp(api);
    await settle(app);
    await addViaSearch(app, "Achebe", ACHEBE);

    api.corpus.delete(ACHEBE); // the graph was rebuilt without this author
    await selectNode(app, ACHEBE);

    expect($(".info-error").textContent).toContain("no such entity");
    expect($(`g[data-iri="${ACHEBE}"]`).classList.contains("stale")).toBe(true);
  });

  it("re-expanding after an undo duplicates nothing", async () => {
    const api = new FakeApi();
    const app = newApp(api);
    await settle(app);
    await addViaSearch(app, "Achebe", ACHEBE);
    await selectNode(app, ACHEBE);

    fire($('.group-row[data-predicate="prov:wasAttributedTo"] .group-expand'), "click");
    await app.whenIdle();
    app.undo();
    await app.whenIdle();
    fire($('.group-row[data-predicate="prov:wasAttributedTo"] .group-expand'), "click");
    await app.whenIdle();

    const state = app.getState();
    expect(state.nodes).toHaveLength(5);
    expect(state.edges).toHaveLength(4);
    const keys = state.edges.map((e) => `${e.source} ${e.predicate} ${e.target}`);
    expect(new Set(keys).size).toBe(keys.length);
  });
});

describe("info pane concurrency", () => {
  it("rapid reselection keeps only the newest pane", async () => {
    const api = new FakeApi();
    const app = newApp(api);
    await settle(app);
    await addViaSearch(app, "Achebe", ACHEBE);
    await typeSearch(app, "Things Fall Apart");
    fire($(`.search-hit[data-iri="${TFA}"] .hit-add`), "click");
    await app.whenIdle();

    // Two clicks back to back; only the second selection may win the pane.
    fire($(`g[data-iri="${ACHEBE}"]`), "click");
    fire($(`g[data-iri="${TFA}"]`), "click");
    await app.whenIdle();

    expect(app.getState().selection).toBe(TFA);
    expect($(".info-pane h2").textContent).toBe("Things Fall Apart");
    expect($(".info-subtitle").textContent).toBe("work");
  });
});

describe("browse sidebar", () => {
  it("facet, value, entity, add: the whole pivot path", async () => {
    const api = new FakeApi();
    const app = newApp(api);
    await settle(app);

    fire($('.facet-btn[data-facet="subject"]'), "click");
    await app.whenIdle();
    const valueButtons = [...document.querySelectorAll(".browse-value button")];
    expect(valueButtons.map((b) => b.textContent)).toEqual(["africa (1)", "classics (2)"]);

    fire(valueButtons[1], "click");
    await app.whenIdle();
    expect($(".browse-crumb").textContent).toBe("subject = classics");

    fire($(`.browse-entity[data-iri="${TFA}"] .hit-add`), "click");
    await app.whenIdle();
    const node = app.getState().nodes.find((n) => n.iri === TFA);
    expect(node?.kind).toBe("frbr:Expression");
    expect($(`g[data-iri="${TFA}"]`).classList.contains("expression")).toBe(true);
  });

  it("subject chips in the work view pivot into the sidebar", async () => {
    const api = new FakeApi();
    const app = newApp(api);
    await settle(app);
    await addViaSearch(app, "Things Fall Apart", TFA);
    await selectNode(app, TFA);

    const chips = [...document.querySelectorAll(".subject-chip")];
    expect(chips.map((c) => c.textContent)).toEqual(["africa", "classics"]);
    fire(chips[1], "click");
    await app.whenIdle();
    expect($(".browse-crumb").textContent).toBe("subject = classics");
    expect(document.querySelectorAll(".browse-entity").length).toBe(2);
  });
});

describe("board housekeeping", () => {
  it("remove clears the node and undo brings it back", async () => {
    const api = new FakeApi();
    const app = newApp(api);
    await settle(app);
    await addViaSearch(app, "Achebe", ACHEBE);
    await selectNode(app, ACHEBE);

    fire($(".info-remove"), "click");
    await app.whenIdle();
    expect(app.getState().nodes).toEqual([]);
    expect(app.getState().selection).toBeNull();
    expect(document.querySelector(".info-empty")).not.toBeNull();

    app.undo();
    await app.whenIdle();
    expect(app.getState().nodes.map((n) => n.iri)).toEqual([ACHEBE]);
  });

  it("dragging a board node moves it and records one action", async () => {
    const api = new FakeApi();
    const app = newApp(api);
    await settle(app);
    await addViaSearch(app, "Achebe", ACHEBE);
    const start = app.getState().nodes[0];

    const g = $(`g[data-iri="${ACHEBE}"]`);
    fire(g, "pointerdown", { clientX: start.x, clientY: start.y });
    fire(document, "pointermove", { clientX: start.x + 90, clientY: start.y + 40 });
    expect($(`g[data-iri="${ACHEBE}"]`).getAttribute("transform")).toBe(
      `translate(${start.x + 90},${start.y + 40})`,
    );
    fire(document, "pointerup", { clientX: start.x + 90, clientY: start.y + 40 });
    await app.whenIdle();

    expect(app.getState().nodes[0]).toMatchObject({ x: start.x + 90, y: start.y + 40 });

    // The click that trails a drag must not change the selection.
    fire($(`g[data-iri="${ACHEBE}"]`), "click");
    expect(app.getState().selection).toBeNull();

    app.undo();
    await app.whenIdle();
    expect(app.getState().nodes[0]).toMatchObject({ x: start.x, y: start.y });
  });

  it("mirrors the board into the fragment and restores it in a fresh app", async () => {
    const api = new FakeApi();
    window.history.replaceState(null, "", "/");
    const app = createApp({ api, root: mount(), fragment: null, exampleBoard: false, syncHash: true });
    await settle(app);
    await addViaSearch(app, "Achebe", ACHEBE);

    expect(window.location.hash.startsWith("#board=")).toBe(true);
    const fragment = window.location.hash;
    const boardBefore = app.getState();

    const browseCallsBefore = api.calls.filter((c) => c.startsWith("browse")).length;
    const restored = createApp({ api, root: mount(), fragment, syncHash: false });
    await settle(restored);

    expect(restored.getState().nodes).toEqual(boardBefore.nodes);
    expect(restored.getState().edges).toEqual(boardBefore.edges);
    expect(restored.canUndo()).toBe(false);
    // A restored session must not pull the example board over the top.
    expect(api.calls.filter((c) => c.startsWith("browse")).length).toBe(browseCallsBefore);
  });
});

describe("first-run tour", () => {
  it("walks its steps once and stays dismissed", async () => {
    window.localStorage.clear();
    const api = new FakeApi();
    const app = newApp(api);
    await settle(app);

    const tour = $(".tour");
    expect(tour.textContent).toContain("drag a result onto the board");
    fire($(".tour-next"), "click");
    expect($(".tour-text").textContent).toContain("double-click a board node");
    fire($(".tour-next"), "click");
    expect($(".tour-text").textContent).toContain("undo steps the board back");
    fire($(".tour-next"), "click"); // past the last step: dismisses
    expect(document.querySelector(".tour")).toBeNull();

    const again = newApp(api);
    await settle(again);
    expect(document.querySelector(".tour")).toBeNull();
  });
});
