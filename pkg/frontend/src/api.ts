import type {
  BrowseResponse,
  EntityResponse,
  NeighborsResponse,
  PlacesResponse,
  SearchResponse,
  StatsResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
    this.name = "ApiError";
  }
}

export interface NeighborOptions {
  predicate?: string;
  direction?: string;
  limit?: number;
  offset?: number;
}

/** What the panes depend on; tests substitute a canned implementation. */
export interface Api {
  search(q: string, type?: string, limit?: number): Promise<SearchResponse>;
  entity(iri: string): Promise<EntityResponse>;
  neighbors(iri: string, opts?: NeighborOptions): Promise<NeighborsResponse>;
  places(iri: string): Promise<PlacesResponse>;
  stats(): Promise<StatsResponse>;
  browse(facet: string, value?: string, limit?: number, offset?: number): Promise<BrowseResponse>;
}

type Params = Record<string, string | number | undefined>;

export class HttpApi implements Api {
  constructor(private readonly baseUrl: string = "") {}

  private async get<T>(path: string, params?: Params): Promise<T> {
    const pairs: string[] = [];
    for (const [key, value] of Object.entries(params ?? {})) {
      if (value === undefined) continue;
      pairs.push(`${key}=${encodeURIComponent(String(value))}`);
    }
    const query = pairs.length ? `?${pairs.join("&")}` : "";
    let response: Response;
    try {
      response = await fetch(`${this.baseUrl}${path}${query}`);
    } catch (err) {
      throw new ApiError(0, `service unreachable: ${String(err)}`);
    }
    if (!response.ok) {
      let detail = `${response.status}`;
      try {
        const body = await response.json();
        if (body && typeof body.detail === "string") detail = body.detail;
      } catch {
        // non-JSON error body, keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  search(q: string, type?: string, limit?: number): Promise<SearchResponse> {
    return this.get("/api/search", { q, type, limit });
  }

  entity(iri: string): Promise<EntityResponse> {
    return this.get(`/api/entity/${encodeURIComponent(iri)}`);
  }

  neighbors(iri: string, opts: NeighborOptions = {}): Promise<NeighborsResponse> {
    return this.get(`/api/entity/${encodeURIComponent(iri)}/neighbors`, {
      predicate: opts.predicate,
      direction: opts.direction,
      limit: opts.limit,
      offset: opts.offset,
    });
  }

  places(iri: string): Promise<PlacesResponse> {
    return this.get(`/api/entity/${encodeURIComponent(iri)}/places`);
  }

  stats(): Promise<StatsResponse> {
    return this.get("/api/stats");
  }

  browse(facet: string, value?: string, limit?: number, offset?: number): Promise<BrowseResponse> {
    return this.get("/api/browse", { facet, value, limit, offset });
  }
}

/**
 * Keeps only the newest in-flight request per pane: a response that was
 * overtaken by a later call resolves to undefined instead of its value.
 */
export class LatestGate {
  private seq = 0;

  async run<T>(task: () => Promise<T>): Promise<T | undefined> {
    const ticket = ++this.seq;
    const value = await task();
    return ticket === this.seq ? value : undefined;
  }
}
