"""Pipeline stages connecting ingest, alignment, classification, and
the graph build. Each stage writes a deterministic staging file under
the configured output directory so stages can run as separate
invocations; nothing written here carries timestamps.
"""
from __future__ import annotations

import json
from dataclasses import asdict
from decimal import Decimal
from pathlib import Path

from . import align, connectors
from .classify import load_region_table, roles_for
from .config import Config
from .errors import ConfigError
from .graphbuild import BuildResult, build_graph
from .ingest import (
    RecordError,
    SourceAuthorRecord,
    SourceWorkRecord,
    load_viaf_isbns,
    parse_dump,
    select_authors,
)
from .model import AuthorEntity

AUTHORS_FILE = "authors.json"
ALIGNMENT_FILE = "alignment.json"
ROLES_FILE = "roles.json"
GRAPH_FILE = "graph.nt"
REPORT_FILE = "build_report.json"


def _write_json(path: Path, payload) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n", "utf-8"
    )


def _author_to_dict(record: SourceAuthorRecord) -> dict:
    data = asdict(record)
    data["citizenships"] = list(record.citizenships)
    data["occupations"] = list(record.occupations)
    return data


def _author_from_dict(data: dict) -> SourceAuthorRecord:
    return SourceAuthorRecord(
        source=data["source"],
        source_id=data["source_id"],
        name=data["name"],
        line_no=data["line_no"],
        birth_year=data.get("birth_year"),
        death_year=data.get("death_year"),
        birth_country=data.get("birth_country"),
        citizenships=tuple(data.get("citizenships") or ()),
        ethnic_group=data.get("ethnic_group"),
        gender=data.get("gender"),
        occupations=tuple(data.get("occupations") or ()),
        external_ids=dict(data.get("external_ids") or {}),
        wikipedia_url=data.get("wikipedia_url"),
    )


def run_ingest(cfg: Config) -> dict:
    """Parse the author dump, select qualifying authors, stage them."""
    result = parse_dump(cfg.require("wikidata_dump"), "wikidata")
    selected, rejected = select_authors(result.authors)
    payload = {
        "selected": [_author_to_dict(r) for r in selected],
        "rejected": dict(sorted(rejected.items())),
        "errors": [{"line_no": e.line_no, "message": e.message} for e in result.errors],
        "works_in_dump": len(result.works),
    }
    _write_json(cfg.out_dir / AUTHORS_FILE, payload)
    return payload


def load_selected_authors(cfg: Config) -> list[SourceAuthorRecord]:
    path = cfg.out_dir / AUTHORS_FILE
    if not path.exists():
        raise ConfigError(f"{path} not found; run the ingest stage first")
    payload = json.loads(path.read_text("utf-8"))
    return [_author_from_dict(d) for d in payload["selected"]]


def make_client(cfg: Config, offline: bool = False) -> connectors.HttpClient:
    mode = "replay" if offline else None
    return connectors.HttpClient(cache_dir=cfg.cache_dir, mode=mode)


def _candidate_to_dict(cand: align.AlignmentCandidate) -> dict:
    return {
        "left": asdict(cand.left),
        "right": asdict(cand.right),
        "similarity": cand.similarity,
        "heuristic": cand.heuristic,
        "accepted": cand.accepted,
    }


def _candidate_from_dict(data: dict) -> align.AlignmentCandidate:
    return align.AlignmentCandidate(
        left=align.NameRef(**data["left"]),
        right=align.NameRef(**data["right"]),
        similarity=data["similarity"],
        heuristic=data["heuristic"],
        accepted=data["accepted"],
    )


def run_align(cfg: Config, offline: bool = False, threshold: float | None = None) -> dict:
    """Generate, score, and resolve candidate links; stage the outcome."""
    authors = load_selected_authors(cfg)
    client = make_client(cfg, offline)
    candidates: list[align.AlignmentCandidate] = []

    candidates.extend(
        align.preexisting_link_candidates(
            authors,
            "openlibrary",
            lambda ext_id: connectors.openlibrary_author_get(client, ext_id, cfg.openlibrary_base),
        )
    )
    candidates.extend(
        align.preexisting_link_candidates(
            authors,
            "goodreads",
            lambda ext_id: connectors.goodreads_author_name(client, ext_id, cfg.goodreads_base),
        )
    )
    search_hits = {
        author.source_id: connectors.openlibrary_author_search(
            client, author.name, cfg.openlibrary_base
        )
        for author in authors
        if not author.external_ids.get("openlibrary")
    }
    candidates.extend(align.exact_match_candidates(authors, "openlibrary", search_hits))
    entries = connectors.sitemap_author_names(client, cfg.goodreads_sitemap)
    sitemap_pool = [a for a in authors if not a.external_ids.get("goodreads")]
    candidates.extend(align.sitemap_match_candidates(sitemap_pool, "goodreads", entries))

    isbns, isbn_errors = load_viaf_isbns(cfg.require("viaf_isbns"))
    for target, name_of in (
        ("openlibrary", lambda i: connectors.openlibrary_author_get(client, i, cfg.openlibrary_base)),
        ("goodreads", lambda i: connectors.goodreads_author_name(client, i, cfg.goodreads_base)),
    ):
        pool = [a for a in authors if not a.external_ids.get(target)]
        candidates.extend(
            align.isbn_bridge_candidates(
                pool,
                target,
                isbns,
                lambda isbn, t=target: connectors.isbn_lookup(client, t, isbn),
                name_of,
            )
        )

    candidates = align.apply_threshold(
        candidates, cfg.threshold if threshold is None else threshold
    )
    candidates = align.resolve_conflicts(candidates)
    links = align.accepted_links(candidates)
    payload = {
        "candidates": [_candidate_to_dict(c) for c in candidates],
        "links": links,
        "isbn_errors": [{"line_no": e.line_no, "message": e.message} for e in isbn_errors],
    }
    _write_json(cfg.out_dir / ALIGNMENT_FILE, payload)
    return payload


def load_candidates(cfg: Config) -> list[align.AlignmentCandidate]:
    path = cfg.out_dir / ALIGNMENT_FILE
    if not path.exists():
        raise ConfigError(f"{path} not found; run the align stage first")
    payload = json.loads(path.read_text("utf-8"))
    return [_candidate_from_dict(d) for d in payload["candidates"]]


def load_links(cfg: Config) -> dict[str, dict[str, str]]:
    path = cfg.out_dir / ALIGNMENT_FILE
    if not path.exists():
        raise ConfigError(f"{path} not found; run the align stage first")
    return json.loads(path.read_text("utf-8"))["links"]


def run_classify(cfg: Config) -> dict[str, list[str]]:
    """Compute roles for every staged author and stage the mapping."""
    authors = load_selected_authors(cfg)
    table = load_region_table()
    roles = {author.source_id: list(roles_for(author, table)) for author in authors}
    _write_json(cfg.out_dir / ROLES_FILE, roles)
    return roles


def load_roles(cfg: Config) -> dict[str, list[str]]:
    path = cfg.out_dir / ROLES_FILE
    if not path.exists():
        raise ConfigError(f"{path} not found; run the classify stage first")
    return json.loads(path.read_text("utf-8"))


def author_entities(cfg: Config) -> list[AuthorEntity]:
    """Unified author entities from the staged ingest/align/classify output.

    Platform ids come only from accepted links; authority-file ids pass
    through from the source dump.
    """
    records = load_selected_authors(cfg)
    links = load_links(cfg)
    roles = load_roles(cfg)
    entities = []
    for record in records:
        external: dict[str, str] = {}
        viaf = record.external_ids.get("viaf")
        if viaf:
            external["viaf"] = viaf
        external.update(links.get(record.source_id, {}))
        entities.append(
            AuthorEntity(
                source_id=record.source_id,
                name=record.name,
                birth_year=record.birth_year,
                birth_country=record.birth_country,
                death_year=record.death_year,
                gender=record.gender,
                ethnic_group=record.ethnic_group,
                citizenships=record.citizenships,
                occupations=tuple(sorted(set(record.occupations))),
                roles=tuple(roles.get(record.source_id, ())),
                external_ids=tuple(sorted(external.items())),
                wikipedia_url=record.wikipedia_url,
            )
        )
    return entities


def work_records(cfg: Config) -> list[SourceWorkRecord]:
    """All work records, in fixed source order then file order."""
    out: list[SourceWorkRecord] = []
    for source, path_key in (
        ("wikidata", "wikidata_dump"),
        ("openlibrary", "openlibrary_dump"),
        ("goodreads", "goodreads_dump"),
    ):
        path = getattr(cfg, path_key)
        if path is None:
            continue
        out.extend(parse_dump(path, source).works)
    return out


def run_build(cfg: Config, materialize: bool = True) -> BuildResult:
    """Assemble the graph and write the canonical export plus report."""
    result = build_graph(
        authors=author_entities(cfg),
        work_records=work_records(cfg),
        links=load_links(cfg),
        base=cfg.base_iri,
        materialize=materialize,
    )
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    result.store.export(cfg.out_dir / GRAPH_FILE, "nt")
    _write_json(cfg.out_dir / REPORT_FILE, result.report.to_dict())
    return result


def staged_graph_path(cfg: Config) -> Path:
    path = cfg.out_dir / GRAPH_FILE
    if not path.exists():
        raise ConfigError(f"{path} not found; run the build stage first")
    return path
