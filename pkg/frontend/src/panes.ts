// Search pane, info pane, browse sidebar, error banner, and the first-run tour.

import type {
  BrowseEntityRow,
  BrowseValueRow,
  EntityResponse,
  NeighborsResponse,
  PlaceRow,
  SearchHit,
} from "./types.js";

function h(tag: string, className?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function literalValues(entity: EntityResponse, predicate: string): string[] {
  return entity.literals.filter((row) => row.predicate === predicate).map((row) => row.value);
}

function firstLiteral(entity: EntityResponse, predicate: string): string | undefined {
  return literalValues(entity, predicate)[0];
}

/** Last path-ish segment of an IRI, the fallback label for unlabeled nodes. */
export function iriTail(iri: string): string {
  const trimmed = iri.replace(/[/#]+$/, "");
  const cut = Math.max(trimmed.lastIndexOf("/"), trimmed.lastIndexOf("#"));
  return cut >= 0 ? trimmed.slice(cut + 1) : trimmed;
}

// --- error banner ---------------------------------------------------------

export class Banner {
  readonly root: HTMLElement;

  constructor() {
    this.root = h("div", "banner hidden");
    this.root.setAttribute("role", "alert");
  }

  show(message: string, retry?: () => void): void {
    this.root.textContent = "";
    this.root.className = "banner";
    this.root.appendChild(h("span", "banner-msg", message));
    if (retry) {
      const button = h("button", "banner-retry", "retry");
      button.addEventListener("click", () => {
        this.hide();
        retry();
      });
      this.root.appendChild(button);
    }
    const dismiss = h("button", "banner-dismiss", "×");
    dismiss.title = "dismiss";
    dismiss.addEventListener("click", () => this.hide());
    this.root.appendChild(dismiss);
  }

  hide(): void {
    this.root.className = "banner hidden";
    this.root.textContent = "";
  }
}

// --- search pane ----------------------------------------------------------

export interface SearchCallbacks {
  runSearch(query: string): void;
  addHit(hit: SearchHit): void;
  beginHitDrag(hit: SearchHit, ev: PointerEvent): void;
}

export class SearchPane {
  readonly root: HTMLElement;
  readonly input: HTMLInputElement;
  private readonly results: HTMLElement;

  constructor(private readonly cb: SearchCallbacks) {
    this.root = h("section", "search-pane");
    this.root.appendChild(h("h2", undefined, "search"));
    this.input = document.createElement("input");
    this.input.type = "search";
    this.input.placeholder = "writer or work";
    this.input.title = "search the graph, then drag a hit onto the board";
    this.root.appendChild(this.input);
    this.results = h("ul", "search-results");
    this.root.appendChild(this.results);
    this.renderPrompt();

    // An empty query never reaches the API.
    this.input.addEventListener("input", () => {
      const query = this.input.value.trim();
      if (query === "") this.renderPrompt();
      else this.cb.runSearch(query);
    });
  }

  renderPrompt(): void {
    this.results.textContent = "";
    this.results.appendChild(h("li", "search-prompt", "type to search"));
  }

  renderHits(hits: SearchHit[]): void {
    this.results.textContent = "";
    if (hits.length === 0) {
      this.results.appendChild(h("li", "search-prompt", "no matches"));
      return;
    }
    for (const hit of hits) {
      const item = h("li", "search-hit");
      item.dataset.iri = hit.iri;
      item.title = "drag onto the board, or press +";
      const label = h("span", "hit-label", hit.label);
      item.appendChild(label);
      if (hit.types.length) item.appendChild(h("span", "hit-type", hit.types[0]));
      const add = h("button", "hit-add", "+");
      add.title = "add to board";
      add.addEventListener("click", (ev) => {
        ev.stopPropagation();
        this.cb.addHit(hit);
      });
      item.appendChild(add);
      item.addEventListener("pointerdown", (ev) => this.cb.beginHitDrag(hit, ev as PointerEvent));
      this.results.appendChild(item);
    }
  }
}

// --- info pane ------------------------------------------------------------

export interface GroupView {
  predicate: string;
  direction: string;
  count: number;
  added: number;
  done: boolean;
}

export interface InfoCallbacks {
  expandGroup(iri: string, predicate: string, direction: string): void;
  removeNode(iri: string): void;
  browseValue(facet: string, value: string): void;
}

export class InfoPane {
  readonly root: HTMLElement;

  constructor(private readonly cb: InfoCallbacks) {
    this.root = h("aside", "info-pane");
    this.renderEmpty();
  }

  renderEmpty(): void {
    this.root.textContent = "";
    this.root.appendChild(h("p", "info-empty", "select a node to see its details"));
  }

  renderLoading(label: string): void {
    this.root.textContent = "";
    this.root.appendChild(h("p", "info-loading", `loading ${label}…`));
  }

  renderError(message: string, retry: () => void): void {
    this.root.textContent = "";
    this.root.appendChild(h("p", "info-error", message));
    const button = h("button", "info-retry", "retry");
    button.addEventListener("click", retry);
    this.root.appendChild(button);
  }

  private header(entity: EntityResponse, subtitle: string): void {
    const head = h("header", "info-head");
    head.appendChild(h("h2", undefined, entity.labels[0] ?? iriTail(entity.iri)));
    head.appendChild(h("p", "info-subtitle", subtitle));
    if (entity.source) {
      head.appendChild(h("p", "info-source", `${entity.source.source}: ${entity.source.source_id}`));
    }
    const remove = h("button", "info-remove", "remove from board");
    remove.addEventListener("click", () => this.cb.removeNode(entity.iri));
    head.appendChild(remove);
    this.root.appendChild(head);
  }

  private factRow(table: HTMLElement, name: string, value: string, derived = false): void {
    const row = h("tr", derived ? "derived" : undefined);
    row.appendChild(h("th", undefined, name));
    const cell = h("td", undefined, value);
    if (derived) cell.title = "derived during the build, not asserted by a source";
    row.appendChild(cell);
    table.appendChild(row);
  }

  private groupSection(iri: string, groups: GroupView[]): void {
    if (groups.length === 0) return;
    const section = h("section", "info-groups");
    section.appendChild(h("h3", undefined, "connections"));
    for (const group of groups) {
      const row = h("div", "group-row");
      row.dataset.predicate = group.predicate;
      row.dataset.direction = group.direction;
      const arrow = group.direction === "in" ? "←" : "→";
      row.appendChild(h("span", "group-name", `${arrow} ${group.predicate}`));
      const remaining = group.count - group.added;
      if (group.done || remaining <= 0) {
        row.appendChild(h("span", "group-state done", "all shown"));
      } else {
        row.appendChild(h("span", "group-state", `${remaining} more`));
        const expand = h("button", "group-expand", "expand");
        expand.addEventListener("click", () => this.cb.expandGroup(iri, group.predicate, group.direction));
        row.appendChild(expand);
      }
      section.appendChild(row);
    }
    this.root.appendChild(section);
  }

  renderPerson(entity: EntityResponse, places: PlaceRow[], groups: GroupView[]): void {
    this.root.textContent = "";
    this.header(entity, "person");

    const roles = literalValues(entity, "dul:hasRole");
    if (roles.length) {
      const strip = h("div", "badges");
      for (const role of roles) {
        strip.appendChild(h("span", role === "Transnational" ? "badge badge-transnational" : "badge", role));
      }
      this.root.appendChild(strip);
    }

    const table = h("table", "facts");
    const born = firstLiteral(entity, "urw:birthYear");
    const died = firstLiteral(entity, "urw:deathYear");
    if (born) this.factRow(table, "dates", died ? `${born}–${died}` : `${born}–`);
    const birthCountry = firstLiteral(entity, "urw:birthCountry");
    if (birthCountry) this.factRow(table, "born in", birthCountry);
    const citizenships = literalValues(entity, "urw:citizenship");
    if (citizenships.length) this.factRow(table, "citizenship", citizenships.join(", "));
    const gender = firstLiteral(entity, "urw:gender");
    if (gender) this.factRow(table, "gender", gender);
    const occupations = literalValues(entity, "urw:occupation");
    if (occupations.length) this.factRow(table, "occupation", occupations.join(", "));
    if (table.childNodes.length) this.root.appendChild(table);

    if (places.length) {
      const section = h("section", "info-places");
      section.appendChild(h("h3", undefined, "published in"));
      const list = h("ul", "place-list");
      for (const place of places) {
        list.appendChild(h("li", undefined, `${place.country} ×${place.expressions}`));
      }
      section.appendChild(list);
      this.root.appendChild(section);
    }

    this.groupSection(entity.iri, groups);
  }

  renderExpression(entity: EntityResponse, neighbors: NeighborsResponse, groups: GroupView[]): void {
    this.root.textContent = "";
    this.header(entity, "work");

    const table = h("table", "facts");
    const rows: Array<[string, string]> = [
      ["rating", "urb:rated"],
      ["ratings", "urb:numberOfRatings"],
      ["readers", "urb:numberOfReaders"],
      ["publisher", "urb:publisher"],
      ["language", "urb:language"],
      ["published", "urb:publicationYear"],
      ["country", "urb:publicationCountry"],
    ];
    for (const [name, predicate] of rows) {
      const row = entity.literals.find((r) => r.predicate === predicate);
      if (row) this.factRow(table, name, row.value, row.derived);
    }
    if (table.childNodes.length) this.root.appendChild(table);

    const editions = neighbors.edges.filter(
      (edge) => edge.predicate === "frbr:embodiment" && edge.direction === "out",
    );
    if (editions.length) {
      const section = h("section", "info-editions");
      section.appendChild(h("h3", undefined, "editions"));
      const list = h("ul", "edition-list");
      for (const edge of editions) {
        list.appendChild(h("li", undefined, edge.other_label ?? iriTail(edge.other)));
      }
      section.appendChild(list);
      this.root.appendChild(section);
    }

    const subjects = neighbors.edges.filter(
      (edge) => edge.predicate === "urb:subject" && edge.direction === "out",
    );
    if (subjects.length) {
      const section = h("section", "info-subjects");
      section.appendChild(h("h3", undefined, "subjects"));
      const strip = h("div", "subject-chips");
      for (const edge of subjects) {
        const value = edge.other_label ?? iriTail(edge.other);
        const chip = h("button", "subject-chip", value);
        chip.title = `browse all works tagged "${value}"`;
        chip.addEventListener("click", () => this.cb.browseValue("subject", value));
        strip.appendChild(chip);
      }
      section.appendChild(strip);
      this.root.appendChild(section);
    }

    this.groupSection(entity.iri, groups);
  }

  /** Publication events, subjects, anything that is neither person nor work. */
  renderGeneric(entity: EntityResponse, groups: GroupView[]): void {
    this.root.textContent = "";
    this.header(entity, entity.types[0] ?? "entity");
    const table = h("table", "facts");
    for (const row of entity.literals) {
      this.factRow(table, row.predicate, row.value, row.derived);
    }
    if (table.childNodes.length) this.root.appendChild(table);
    this.groupSection(entity.iri, groups);
  }
}

// --- browse sidebar -------------------------------------------------------

const FACETS: Array<[string, string]> = [
  ["birth_country", "country of birth"],
  ["citizenship", "citizenship"],
  ["ethnic_group", "minority group"],
  ["subject", "subject"],
];

export interface BrowseCallbacks {
  browseFacet(facet: string): void;
  browseValue(facet: string, value: string): void;
  addEntity(row: BrowseEntityRow): void;
}

export class Sidebar {
  readonly root: HTMLElement;
  private readonly body: HTMLElement;

  constructor(private readonly cb: BrowseCallbacks) {
    this.root = h("section", "browse-pane");
    this.root.appendChild(h("h2", undefined, "browse"));
    const strip = h("div", "facet-strip");
    for (const [facet, label] of FACETS) {
      const button = h("button", "facet-btn", label);
      button.dataset.facet = facet;
      button.title = `list every ${label} in the graph`;
      button.addEventListener("click", () => this.cb.browseFacet(facet));
      strip.appendChild(button);
    }
    this.root.appendChild(strip);
    this.body = h("div", "browse-body");
    this.root.appendChild(this.body);
  }

  renderValues(facet: string, rows: BrowseValueRow[]): void {
    this.body.textContent = "";
    const list = h("ul", "browse-values");
    for (const row of rows) {
      const item = h("li", "browse-value");
      const button = h("button", undefined, `${row.value} (${row.count})`);
      button.addEventListener("click", () => this.cb.browseValue(facet, row.value));
      item.appendChild(button);
      list.appendChild(item);
    }
    if (!rows.length) list.appendChild(h("li", "browse-empty", "nothing here"));
    this.body.appendChild(list);
  }

  renderEntities(facet: string, value: string, rows: BrowseEntityRow[]): void {
    this.body.textContent = "";
    this.body.appendChild(h("p", "browse-crumb", `${facet} = ${value}`));
    const list = h("ul", "browse-entities");
    for (const row of rows) {
      const item = h("li", "browse-entity");
      item.dataset.iri = row.iri;
      item.appendChild(h("span", undefined, row.label ?? iriTail(row.iri)));
      const add = h("button", "hit-add", "+");
      add.title = "add to board";
      add.addEventListener("click", () => this.cb.addEntity(row));
      item.appendChild(add);
      list.appendChild(item);
    }
    if (!rows.length) list.appendChild(h("li", "browse-empty", "no entities"));
    this.body.appendChild(list);
  }

  renderError(message: string, retry: () => void): void {
    this.body.textContent = "";
    this.body.appendChild(h("p", "browse-error", message));
    const button = h("button", undefined, "retry");
    button.addEventListener("click", retry);
    this.body.appendChild(button);
  }
}

// --- first-run tour -------------------------------------------------------

const TOUR_KEY = "litkg-tour-dismissed";
const TOUR_STEPS = [
  "search for a writer or a work, then drag a result onto the board (the + button works too)",
  "double-click a board node, or use the connection groups in the detail pane, to pull in its neighbors",
  "click any node for details; undo steps the board back one action at a time",
];

export class Tour {
  readonly root: HTMLElement;
  private step = 0;
  private readonly text: HTMLElement;
  private readonly next: HTMLElement;

  private constructor(private readonly storage: Storage) {
    this.root = h("div", "tour");
    this.text = h("span", "tour-text", TOUR_STEPS[0]);
    this.root.appendChild(this.text);
    this.next = h("button", "tour-next", "next");
    this.next.addEventListener("click", () => this.advance());
    this.root.appendChild(this.next);
    const done = h("button", "tour-dismiss", "got it");
    done.addEventListener("click", () => this.dismiss());
    this.root.appendChild(done);
  }

  /** Shows the tour strip once per browser; returns null when already dismissed. */
  static maybeCreate(storage: Storage): Tour | null {
    if (storage.getItem(TOUR_KEY)) return null;
    return new Tour(storage);
  }

  private advance(): void {
    this.step++;
    if (this.step >= TOUR_STEPS.length) {
      this.dismiss();
      return;
    }
    this.text.textContent = TOUR_STEPS[this.step];
    if (this.step === TOUR_STEPS.length - 1) this.next.textContent = "done";
  }

  private dismiss(): void {
    this.storage.setItem(TOUR_KEY, "1");
    this.root.remove();
  }
}
