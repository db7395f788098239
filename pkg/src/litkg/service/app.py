"""FastAPI application exposing read-only graph queries.

The service wraps an immutable, fully built GraphStore; rebuilding the
graph means restarting with the new file. Entity addresses are full
IRIs (percent-encoded by the caller) or ``_:label`` for graph-local
nodes such as publication events.
"""
from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.staticfiles import StaticFiles

from ..config import Config
from ..errors import ModelError, UnknownTermError
from ..model import VOCAB, Iri, Literal, LocalNode, Node
from ..store import GraphStore, RDF_TYPE
from ..model import parse_entity_iri
from . import schemas

_CLASS_FACETS = {
    "birth_country": "birthCountry",
    "citizenship": "citizenship",
    "ethnic_group": "ethnicGroup",
    "role": "hasRole",
}
FACETS = tuple(sorted(_CLASS_FACETS)) + ("subject",)

MAX_LIMIT = 500


def _pref(iri: Iri) -> str:
    return VOCAB.prefixed(iri) or iri.value


def _node_from_param(raw: str) -> Node:
    if raw.startswith("_:"):
        label = raw[2:]
        try:
            return LocalNode(label)
        except ModelError:
            raise HTTPException(400, f"invalid local node id: {raw!r}")
    try:
        return Iri(raw)
    except ModelError:
        raise HTTPException(400, f"not a valid entity IRI: {raw!r}")


def _node_key(node: Node) -> str:
    return node.value if isinstance(node, Iri) else f"_:{node.id}"


def _types_of(store: GraphStore, node: Node) -> list[str]:
    return [_pref(t.object) for t in store.match(node, RDF_TYPE, None) if isinstance(t.object, Iri)]


def _existing_node(store: GraphStore, raw: str) -> Node:
    node = _node_from_param(raw)
    if not store.has_node(node):
        raise HTTPException(404, f"no such entity: {raw}")
    return node


def _limit_offset(limit: int, offset: int) -> tuple[int, int]:
    if limit < 1 or limit > MAX_LIMIT:
        raise HTTPException(400, f"limit must be within 1..{MAX_LIMIT}")
    if offset < 0:
        raise HTTPException(400, "offset must be non-negative")
    return limit, offset


def create_app(store: GraphStore, cfg: Config | None = None, base: str | None = None) -> FastAPI:
    app = FastAPI(title="literature graph query service", docs_url="/api/docs", openapi_url="/api/openapi.json")
    app.state.store = store
    iri_base = base or (cfg.base_iri if cfg else None) or "http://litkg.example/"
    if cfg and cfg.cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=cfg.cors_origins,
            allow_methods=["GET"],
            allow_headers=["*"],
        )

    @app.get("/api/search", response_model=schemas.SearchResponse)
    def search(
        request: Request,
        q: str | None = Query(default=None),
        type: str | None = Query(default=None),
        limit: int = Query(default=20),
    ) -> schemas.SearchResponse:
        if q is None or not q.strip():
            raise HTTPException(400, "query parameter 'q' is required")
        if limit < 1 or limit > MAX_LIMIT:
            raise HTTPException(400, f"limit must be within 1..{MAX_LIMIT}")
        type_iri = None
        if type is not None:
            try:
                type_iri = VOCAB.lookup(type)
            except UnknownTermError:
                raise HTTPException(400, f"unknown type filter: {type!r}")
        hits = store.search_labels(q, type_iri, limit)
        results = [
            schemas.SearchHit(iri=_node_key(node), label=label, types=_types_of(store, node))
            for node, label in hits
        ]
        return schemas.SearchResponse(query=q, type=type, count=len(results), results=results)

    @app.get("/api/entity/{iri:path}/neighbors", response_model=schemas.NeighborsResponse)
    def neighbors(
        iri: str,
        direction: str = Query(default="both"),
        predicate: str | None = Query(default=None),
        limit: int = Query(default=50),
        offset: int = Query(default=0),
    ) -> schemas.NeighborsResponse:
        node = _existing_node(store, iri)
        limit, offset = _limit_offset(limit, offset)
        if direction not in ("in", "out", "both"):
            raise HTTPException(400, f"direction must be in, out, or both; got {direction!r}")
        predicates = None
        if predicate is not None:
            try:
                predicates = [VOCAB.lookup(predicate)]
            except UnknownTermError:
                try:
                    predicates = [Iri(predicate)]
                except ModelError:
                    raise HTTPException(400, f"unknown predicate filter: {predicate!r}")
        page = store.neighborhood(node, direction, predicates, limit, offset)
        return schemas.NeighborsResponse(
            iri=iri,
            total=page.total,
            limit=limit,
            offset=offset,
            counts=[
                schemas.EdgeCountRow(predicate=_pref(c.predicate), direction=c.direction, count=c.count)
                for c in page.counts
            ],
            edges=[
                schemas.EdgeRow(
                    predicate=_pref(e.predicate),
                    direction=e.direction,
                    other=_node_key(e.other),
                    other_label=e.other_label,
                )
                for e in page.edges
            ],
        )

    @app.get("/api/entity/{iri:path}/places", response_model=schemas.PlacesResponse)
    def places(iri: str) -> schemas.PlacesResponse:
        node = _existing_node(store, iri)
        rows = store.publication_places(node) if isinstance(node, Iri) else []
        return schemas.PlacesResponse(
            iri=iri,
            places=[schemas.PlaceRow(country=c, expressions=n) for c, n in rows],
        )

    @app.get("/api/entity/{iri:path}", response_model=schemas.EntityResponse)
    def entity(iri: str) -> schemas.EntityResponse:
        node = _existing_node(store, iri)
        literals = [
            schemas.LiteralRow(
                predicate=_pref(t.predicate),
                value=t.object.value,
                datatype=t.object.datatype,
                lang=t.object.lang,
                derived=VOCAB.is_derived(t.predicate),
            )
            for t in store.match(node, None, None)
            if isinstance(t.object, Literal)
        ]
        parsed = parse_entity_iri(node, iri_base) if isinstance(node, Iri) else None
        source = (
            schemas.EntitySource(source=parsed[0], source_id=parsed[1], kind=parsed[2])
            if parsed
            else None
        )
        counts = store.neighborhood(node).counts
        return schemas.EntityResponse(
            iri=iri,
            labels=store.labels_of(node),
            types=_types_of(store, node),
            source=source,
            literals=literals,
            edge_counts=[
                schemas.EdgeCountRow(predicate=_pref(c.predicate), direction=c.direction, count=c.count)
                for c in counts
            ],
        )

    @app.get("/api/stats", response_model=schemas.StatsResponse)
    def stats() -> schemas.StatsResponse:
        return schemas.StatsResponse(**store.stats(iri_base).to_dict())

    @app.get("/api/browse", response_model=schemas.BrowseResponse)
    def browse(
        facet: str = Query(...),
        value: str | None = Query(default=None),
        limit: int = Query(default=50),
        offset: int = Query(default=0),
    ) -> schemas.BrowseResponse:
        limit, offset = _limit_offset(limit, offset)
        if facet not in FACETS:
            raise HTTPException(400, f"facet must be one of {list(FACETS)}")
        if facet == "subject":
            subject_prop = VOCAB.lookup("subject")
            tags = store.nodes_of_type(VOCAB.lookup("Folksonomy"))
            if value is None:
                rows = []
                for tag in tags:
                    label = store.label_of(tag) or _node_key(tag)
                    count = len(store.match(None, subject_prop, tag))
                    rows.append((label, count))
                rows.sort(key=lambda r: (-r[1], r[0]))
                page = rows[offset : offset + limit]
                return schemas.BrowseResponse(
                    facet=facet,
                    total=len(rows),
                    values=[schemas.BrowseValueRow(value=v, count=c) for v, c in page],
                )
            works: list[Node] = []
            for tag in tags:
                if store.label_of(tag) == value:
                    works.extend(t.subject for t in store.match(None, subject_prop, tag))
            works = sorted(set(works), key=_node_key)
            page_nodes = works[offset : offset + limit]
            return schemas.BrowseResponse(
                facet=facet,
                value=value,
                total=len(works),
                entities=[
                    schemas.BrowseEntityRow(iri=_node_key(n), label=store.label_of(n))
                    for n in page_nodes
                ],
            )
        prop = VOCAB.lookup(_CLASS_FACETS[facet])
        if value is None:
            grouped: dict[str, set[Node]] = {}
            for t in store.match(None, prop, None):
                if isinstance(t.object, Literal):
                    grouped.setdefault(t.object.value, set()).add(t.subject)
            rows = sorted(((v, len(s)) for v, s in grouped.items()), key=lambda r: (-r[1], r[0]))
            page = rows[offset : offset + limit]
            return schemas.BrowseResponse(
                facet=facet,
                total=len(rows),
                values=[schemas.BrowseValueRow(value=v, count=c) for v, c in page],
            )
        subjects = sorted(
            {t.subject for t in store.match(None, prop, Literal.text(value))}, key=_node_key
        )
        page_nodes = subjects[offset : offset + limit]
        return schemas.BrowseResponse(
            facet=facet,
            value=value,
            total=len(subjects),
            entities=[
                schemas.BrowseEntityRow(iri=_node_key(n), label=store.label_of(n))
                for n in page_nodes
            ],
        )

    ui_dir = cfg.ui_dir if cfg else None
    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")
    else:

        @app.get("/")
        def root() -> dict:
            return {
                "service": "literature graph query service",
                "endpoints": [
                    "/api/search",
                    "/api/entity/{iri}",
                    "/api/entity/{iri}/neighbors",
                    "/api/entity/{iri}/places",
                    "/api/stats",
                    "/api/browse",
                ],
            }

    return app
