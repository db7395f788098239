// Response shapes of the query service, mirrored field for field.

export interface SearchHit {
  iri: string;
  label: string;
  types: string[];
}

export interface SearchResponse {
  query: string;
  type: string | null;
  count: number;
  results: SearchHit[];
}

export interface LiteralRow {
  predicate: string;
  value: string;
  datatype: string;
  lang: string | null;
  derived: boolean;
}

export interface EdgeCountRow {
  predicate: string;
  direction: string;
  count: number;
}

export interface EntitySource {
  source: string;
  source_id: string;
  kind: string;
}

export interface EntityResponse {
  iri: string;
  labels: string[];
  types: string[];
  source: EntitySource | null;
  literals: LiteralRow[];
  edge_counts: EdgeCountRow[];
}

export interface EdgeRow {
  predicate: string;
  direction: string;
  other: string;
  other_label: string | null;
}

export interface NeighborsResponse {
  iri: string;
  total: number;
  limit: number;
  offset: number;
  counts: EdgeCountRow[];
  edges: EdgeRow[];
}

export interface PlaceRow {
  country: string;
  expressions: number;
}

export interface PlacesResponse {
  iri: string;
  places: PlaceRow[];
}

export interface IdentifierStatsRow {
  namespace: string;
  authors: number;
  percent: number | null;
}

export interface SourceStatsRow {
  source: string;
  works: number;
  authors_with_works: number;
  transnational_authors: number;
  transnational_percent: number | null;
  ratings_sum: number;
  readers_sum: number;
  avg_rating: string | null;
}

export interface RoleStatsRow {
  role: string;
  authors: number;
  percent: number | null;
}

export interface StatsResponse {
  total_authors: number;
  identifiers: IdentifierStatsRow[];
  sources: SourceStatsRow[];
  roles: RoleStatsRow[];
}

export interface BrowseValueRow {
  value: string;
  count: number;
}

export interface BrowseEntityRow {
  iri: string;
  label: string | null;
}

export interface BrowseResponse {
  facet: string;
  value: string | null;
  total: number;
  values: BrowseValueRow[] | null;
  entities: BrowseEntityRow[] | null;
}
