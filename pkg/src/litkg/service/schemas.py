"""Request/response shapes for the query service."""
from __future__ import annotations

from pydantic import BaseModel, Field


class SearchHit(BaseModel):
    iri: str
    label: str
    types: list[str] = Field(default_factory=list)


class SearchResponse(BaseModel):
    query: str
    type: str | None = None
    count: int
    results: list[SearchHit]


class LiteralRow(BaseModel):
    predicate: str
    value: str
    datatype: str
    lang: str | None = None
    derived: bool = False


class EdgeCountRow(BaseModel):
    predicate: str
    direction: str
    count: int


class EntitySource(BaseModel):
    source: str
    source_id: str
    kind: str


class EntityResponse(BaseModel):
    iri: str
    labels: list[str]
    types: list[str]
    source: EntitySource | None = None
    literals: list[LiteralRow]
    edge_counts: list[EdgeCountRow]


class EdgeRow(BaseModel):
    predicate: str
    direction: str
    other: str
    other_label: str | None = None


class NeighborsResponse(BaseModel):
    iri: str
    total: int
    limit: int
    offset: int
    counts: list[EdgeCountRow]
    edges: list[EdgeRow]


class PlaceRow(BaseModel):
    country: str
    expressions: int


class PlacesResponse(BaseModel):
    iri: str
    places: list[PlaceRow]


class IdentifierStatsRow(BaseModel):
    namespace: str
    authors: int
    percent: float | None = None


class SourceStatsRow(BaseModel):
    source: str
    works: int
    authors_with_works: int
    transnational_authors: int
    transnational_percent: float | None = None
    ratings_sum: int
    readers_sum: int
    avg_rating: str | None = None


class RoleStatsRow(BaseModel):
    role: str
    authors: int
    percent: float | None = None


class StatsResponse(BaseModel):
    total_authors: int
    identifiers: list[IdentifierStatsRow]
    sources: list[SourceStatsRow]
    roles: list[RoleStatsRow]


class BrowseValueRow(BaseModel):
    value: str
    count: int


class BrowseEntityRow(BaseModel):
    iri: str
    label: str | None = None


class BrowseResponse(BaseModel):
    facet: str
    value: str | None = None
    total: int
    values: list[BrowseValueRow] | None = None
    entities: list[BrowseEntityRow] | None = None
