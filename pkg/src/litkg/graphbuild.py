"""Turning entities into triples and assembling the full graph.

The emitted shape: authors are persons with literal facts and roles;
works are expressions attributed to authors and embodied in editions;
each edition participates in a reified publication event carrying
year, country, language, and the people involved (publisher and other
contributors as associated agents with roles). Convenience properties
that shortcut the expression-edition-publication chain are materialized
as derived triples on top of the base graph.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import BuildError
from .ingest import SourceWorkRecord, normalize_name
from .model import (
    DEFAULT_BASE,
    SOURCES,
    VOCAB,
    AuthorEntity,
    Edition,
    Iri,
    Literal,
    LocalNode,
    PublicationEvent,
    Triple,
    WorkExpression,
    mint_iri,
    subject_iri,
)
from .store import GraphStore

_T = VOCAB.lookup
_ID_PROPS = {
    "wikidata": "wikidataId",
    "viaf": "viafId",
    "openlibrary": "openLibraryId",
    "goodreads": "goodreadsId",
}

_UNSAFE = re.compile(r"[^A-Za-z0-9_-]")


def _local_id(*parts: str) -> str:
    return _UNSAFE.sub("_", "-".join(parts))


def source_node(source: str, base: str = DEFAULT_BASE) -> Iri:
    if source not in SOURCES:
        raise BuildError(f"unknown source: {source!r}")
    if not base.endswith("/"):
        base = base + "/"
    return Iri(f"{base}source/{source}")


def reception_filter(works: Iterable[WorkExpression]) -> tuple[list[WorkExpression], int]:
    """Keep works with any reception at all (a rating or a reader).

    Returns the kept works in input order and the dropped count.
    """
    kept = []
    dropped = 0
    for work in works:
        if work.has_reception:
            kept.append(work)
        else:
            dropped += 1
    return kept, dropped


def work_expression_from(record: SourceWorkRecord, author_id: str) -> WorkExpression:
    """Construct the expression entity (with editions and publication
    events) for one source work record attributed to a unified author.

    Publication event ids are derived from the source and edition id,
    so rebuilding the same dump always yields the same local nodes.
    """
    editions = []
    for ed in record.editions:
        event_id = _local_id("pub", record.source, ed.edition_id)
        has_facts = any((ed.year, ed.country, ed.language, ed.publisher)) or ed.contributors
        publication = (
            PublicationEvent(
                event_id=event_id,
                year=ed.year,
                country=ed.country,
                language=ed.language,
                publisher=normalize_name(ed.publisher) if ed.publisher else None,
                contributors=tuple(
                    (normalize_name(name), normalize_name(role)) for name, role in ed.contributors
                ),
            )
            if has_facts
            else None
        )
        editions.append(
            Edition(source=record.source, source_id=ed.edition_id, publication=publication)
        )
    return WorkExpression(
        source=record.source,
        source_id=record.source_id,
        title=record.title,
        author_id=author_id,
        subjects=tuple(normalize_name(s) for s in record.subjects),
        avg_rating=record.avg_rating,
        ratings_count=record.ratings_count,
        readers_count=record.readers_count,
        editions=tuple(editions),
    )


def emit_author_triples(author: AuthorEntity, base: str = DEFAULT_BASE) -> list[Triple]:
    node = mint_iri("wikidata", author.source_id, "author", base)
    out = [
        Triple(node, _T("type"), _T("Person")),
        Triple(node, _T("label"), Literal.text(author.name)),
        Triple(node, _T("birthYear"), Literal.integer(author.birth_year)),
        Triple(node, _T("birthCountry"), Literal.text(author.birth_country)),
        Triple(node, _T("wikidataId"), Literal.text(author.source_id)),
    ]
    if author.death_year is not None:
        out.append(Triple(node, _T("deathYear"), Literal.integer(author.death_year)))
    if author.gender:
        out.append(Triple(node, _T("gender"), Literal.text(author.gender)))
    if author.ethnic_group:
        out.append(Triple(node, _T("ethnicGroup"), Literal.text(author.ethnic_group)))
    for occupation in author.occupations:
        out.append(Triple(node, _T("occupation"), Literal.text(occupation)))
    for citizenship in author.citizenships:
        out.append(Triple(node, _T("citizenship"), Literal.text(citizenship)))
    for role in author.roles:
        out.append(Triple(node, _T("hasRole"), Literal.text(role)))
    for namespace, ext_id in author.external_ids:
        prop = _ID_PROPS.get(namespace)
        if prop is None:
            raise BuildError(f"author {author.source_id}: no property for id namespace {namespace!r}")
        if namespace == "wikidata" and ext_id == author.source_id:
            continue  # already asserted above
        out.append(Triple(node, _T(prop), Literal.text(ext_id)))
    if author.wikipedia_url:
        out.append(Triple(node, _T("wikipediaPage"), Iri(author.wikipedia_url)))
    return out


def emit_work_triples(work: WorkExpression, base: str = DEFAULT_BASE) -> list[Triple]:
    node = mint_iri(work.source, work.source_id, "work", base)
    author_node = mint_iri("wikidata", work.author_id, "author", base)
    out = [
        Triple(node, _T("type"), _T("Expression")),
        Triple(node, _T("label"), Literal.text(work.title)),
        Triple(node, _T("wasAttributedTo"), author_node),
        Triple(node, _T("wasDerivedFrom"), source_node(work.source, base)),
    ]
    if work.avg_rating is not None:
        out.append(Triple(node, _T("rated"), Literal.decimal(work.avg_rating)))
    if work.ratings_count is not None:
        out.append(Triple(node, _T("numberOfRatings"), Literal.integer(work.ratings_count)))
    if work.readers_count is not None:
        out.append(Triple(node, _T("numberOfReaders"), Literal.integer(work.readers_count)))
    for label in work.subjects:
        tag = subject_iri(label, base)
        out.append(Triple(node, _T("subject"), tag))
        out.append(Triple(tag, _T("type"), _T("Folksonomy")))
        out.append(Triple(tag, _T("label"), Literal.text(label)))
    for edition in work.editions:
        ed_node = mint_iri(edition.source, edition.source_id, "edition", base)
        out.append(Triple(node, _T("embodiment"), ed_node))
        out.append(Triple(ed_node, _T("type"), _T("Edition")))
        event = edition.publication
        if event is None:
            continue
        ev_node = LocalNode(event.event_id)
        out.append(Triple(ed_node, _T("isParticipantIn"), ev_node))
        out.append(Triple(ev_node, _T("hasParticipant"), ed_node))
        out.append(Triple(ev_node, _T("type"), _T("Publication")))
        if event.year is not None:
            out.append(Triple(ev_node, _T("year"), Literal.integer(event.year)))
        if event.country:
            out.append(Triple(ev_node, _T("country"), Literal.text(event.country)))
        if event.language:
            out.append(Triple(ev_node, _T("language"), Literal.text(event.language)))
        agents = []
        if event.publisher:
            agents.append((event.publisher, "publisher"))
        agents.extend(event.contributors)
        for index, (name, role) in enumerate(agents):
            agent = LocalNode(_local_id("agent", event.event_id, str(index)))
            out.append(Triple(ev_node, _T("wasAssociatedWith"), agent))
            out.append(Triple(agent, _T("label"), Literal.text(name)))
            out.append(Triple(agent, _T("hasRole"), Literal.text(role)))
    return out


def materialize_property_chains(store: GraphStore) -> list[Triple]:
    """Derive the expression-level shortcuts through the publication
    pattern: publication year and country, publisher, and translator.

    Returns new triples only; asserting them is the caller's call.
    """
    embodiment = _T("embodiment")
    participant = _T("isParticipantIn")
    year_prop = _T("year")
    country_prop = _T("country")
    associated = _T("wasAssociatedWith")
    has_role = _T("hasRole")
    label_prop = _T("label")

    chains = (
        (year_prop, _T("publicationYear")),
        (country_prop, _T("publicationCountry")),
    )
    out: list[Triple] = []
    for work in store.nodes_of_type(_T("Expression")):
        for t_edition in store.match(work, embodiment, None):
            edition = t_edition.object
            if not isinstance(edition, (Iri, LocalNode)):
                continue
            for t_event in store.match(edition, participant, None):
                event = t_event.object
                if not isinstance(event, (Iri, LocalNode)):
                    continue
                for source_prop, target_prop in chains:
                    for t_value in store.match(event, source_prop, None):
                        if isinstance(t_value.object, Literal):
                            out.append(Triple(work, target_prop, t_value.object))
                for t_agent in store.match(event, associated, None):
                    agent = t_agent.object
                    if not isinstance(agent, (Iri, LocalNode)):
                        continue
                    roles = {
                        o.object.value
                        for o in store.match(agent, has_role, None)
                        if isinstance(o.object, Literal)
                    }
                    for role, target in (("publisher", _T("publisher")), ("translator", _T("translator"))):
                        if role in roles:
                            for t_label in store.match(agent, label_prop, None):
                                if isinstance(t_label.object, Literal):
                                    out.append(Triple(work, target, t_label.object))
    deduped = []
    seen = set()
    for t in out:
        if t not in seen and t not in store:
            seen.add(t)
            deduped.append(t)
    return deduped


@dataclass
class BuildReport:
    """What the build did, per source and in total."""

    authors: int = 0
    works_considered: Counter = field(default_factory=Counter)
    works_kept: Counter = field(default_factory=Counter)
    works_dropped_no_reception: Counter = field(default_factory=Counter)
    works_unmatched_author: Counter = field(default_factory=Counter)
    triples_base: int = 0
    triples_derived: int = 0

    def total(self, counter_name: str) -> int:
        return sum(getattr(self, counter_name).values())

    def to_dict(self) -> dict:
        def table(counter: Counter) -> dict:
            row = {source: counter.get(source, 0) for source in SOURCES}
            row["total"] = sum(row.values())
            return row

        return {
            "authors": self.authors,
            "works_considered": table(self.works_considered),
            "works_kept": table(self.works_kept),
            "works_dropped_no_reception": table(self.works_dropped_no_reception),
            "works_unmatched_author": table(self.works_unmatched_author),
            "triples_base": self.triples_base,
            "triples_derived": self.triples_derived,
        }

    def to_text(self) -> str:
        data = self.to_dict()
        lines = [f"authors: {data['authors']}"]
        header = f"  {'works':<26}" + "".join(f"{s:>13}" for s in SOURCES) + f"{'total':>13}"
        lines.append(header)
        for key in (
            "works_considered",
            "works_kept",
            "works_dropped_no_reception",
            "works_unmatched_author",
        ):
            row = data[key]
            label = key.removeprefix("works_")
            lines.append(
                f"  {label:<26}"
                + "".join(f"{row[s]:>13}" for s in SOURCES)
                + f"{row['total']:>13}"
            )
        lines.append(f"triples: {data['triples_base']} base + {data['triples_derived']} derived")
        return "\n".join(lines) + "\n"


@dataclass
class BuildResult:
    store: GraphStore
    report: BuildReport


def build_graph(
    authors: Sequence[AuthorEntity],
    work_records: Sequence[SourceWorkRecord],
    links: dict[str, dict[str, str]],
    base: str = DEFAULT_BASE,
    materialize: bool = True,
) -> BuildResult:
    """Assemble the full graph from unified authors and work records.

    ``links`` maps a unified author id to its accepted platform ids;
    work records resolve to authors through them (wikidata records
    resolve directly). Works by unresolvable authors are counted and
    skipped, and works with no reception are dropped.
    """
    report = BuildReport(authors=len(authors))
    by_platform_id: dict[tuple[str, str], str] = {}
    for author in authors:
        by_platform_id[("wikidata", author.source_id)] = author.source_id
    for author_id, platforms in links.items():
        for platform, platform_id in platforms.items():
            key = (platform, platform_id)
            existing = by_platform_id.get(key)
            if existing is not None and existing != author_id:
                raise BuildError(
                    f"platform id {platform}:{platform_id} is linked to two authors "
                    f"({existing} and {author_id})"
                )
            by_platform_id[key] = author_id

    known_authors = {author.source_id for author in authors}
    works: list[WorkExpression] = []
    for record in work_records:
        report.works_considered[record.source] += 1
        author_id = by_platform_id.get((record.source, record.author_source_id))
        if author_id is None or author_id not in known_authors:
            report.works_unmatched_author[record.source] += 1
            continue
        works.append(work_expression_from(record, author_id))

    kept: list[WorkExpression] = []
    for source in SOURCES:
        subset = [w for w in works if w.source == source]
        kept_source, dropped = reception_filter(subset)
        report.works_kept[source] = len(kept_source)
        report.works_dropped_no_reception[source] = dropped
        kept.extend(kept_source)

    store = GraphStore()
    for source in SOURCES:
        node = source_node(source, base)
        store.insert(Triple(node, _T("label"), Literal.text(source)))
    for author in authors:
        store.insert_all(emit_author_triples(author, base))
    person = _T("Person")
    attributed = _T("wasAttributedTo")
    for work in kept:
        triples = emit_work_triples(work, base)
        for t in triples:
            if t.predicate == attributed and not store.match(t.object, _T("type"), person):
                raise BuildError(
                    f"work {work.source}:{work.source_id} is attributed to a missing author"
                )
        store.insert_all(triples)
    report.triples_base = len(store)
    if materialize:
        derived = materialize_property_chains(store)
        store.insert_all(derived)
        report.triples_derived = len(derived)
    return BuildResult(store=store, report=report)
