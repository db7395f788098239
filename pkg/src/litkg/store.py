"""In-memory triple store with the three lookup indexes and the
read-side queries the service exposes (search, neighborhood, places,
stats, export/import).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal
from pathlib import Path
from typing import Iterable, Iterator

from .errors import ModelError
from .ingest import normalize_name
from .model import (
    VOCAB,
    Iri,
    Literal,
    LocalNode,
    Node,
    Term,
    Triple,
    parse_entity_iri,
    DEFAULT_BASE,
    SOURCES,
)
from . import rdfio

RDF_TYPE = VOCAB.lookup("type")
RDFS_LABEL = VOCAB.lookup("label")


class GraphStore:
    """Triple set plus three indexes:

    - subject -> predicate -> objects
    - (predicate, object) -> subjects
    - object -> predicate -> subjects
    """

    def __init__(self, triples: Iterable[Triple] = ()):
        self._triples: set[Triple] = set()
        self._spo: dict[Node, dict[Iri, set[Term]]] = {}
        self._pos: dict[tuple[Iri, Term], set[Node]] = {}
        self._osp: dict[Term, dict[Iri, set[Node]]] = {}
        self._labels: dict[Node, list[str]] = {}
        for t in triples:
            self.insert(t)

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __contains__(self, triple: Triple) -> bool:
        return triple in self._triples

    def insert(self, triple: Triple) -> bool:
        """Add one triple; duplicate inserts are no-ops returning False."""
        if not isinstance(triple, Triple):
            raise ModelError(f"not a triple: {triple!r}")
        if triple in self._triples:
            return False
        self._triples.add(triple)
        self._spo.setdefault(triple.subject, {}).setdefault(triple.predicate, set()).add(
            triple.object
        )
        self._pos.setdefault((triple.predicate, triple.object), set()).add(triple.subject)
        self._osp.setdefault(triple.object, {}).setdefault(triple.predicate, set()).add(
            triple.subject
        )
        if triple.predicate == RDFS_LABEL and isinstance(triple.object, Literal):
            self._labels.setdefault(triple.subject, []).append(triple.object.value)
        return True

    def insert_all(self, triples: Iterable[Triple]) -> int:
        return sum(1 for t in triples if self.insert(t))

    def sorted_triples(self) -> list[Triple]:
        return sorted(self._triples, key=rdfio.triple_sort_key)

    def match(
        self, subject: Node | None = None, predicate: Iri | None = None, obj: Term | None = None
    ) -> list[Triple]:
        """All triples matching the pattern; None is a wildcard.

        Results come back in canonical sorted order for every one of
        the eight binding patterns.
        """
        s, p, o = subject, predicate, obj
        out: list[Triple]
        if s is not None and p is not None and o is not None:
            t = Triple(s, p, o)
            out = [t] if t in self._triples else []
        elif s is not None and p is not None:
            out = [Triple(s, p, x) for x in self._spo.get(s, {}).get(p, ())]
        elif s is not None and o is not None:
            out = [
                Triple(s, pred, o)
                for pred, objs in self._spo.get(s, {}).items()
                if o in objs
            ]
        elif s is not None:
            out = [
                Triple(s, pred, x)
                for pred, objs in self._spo.get(s, {}).items()
                for x in objs
            ]
        elif p is not None and o is not None:
            out = [Triple(x, p, o) for x in self._pos.get((p, o), ())]
        elif o is not None:
            out = [
                Triple(x, pred, o)
                for pred, subs in self._osp.get(o, {}).items()
                for x in subs
            ]
        elif p is not None:
            out = [t for t in self._triples if t.predicate == p]
        else:
            out = list(self._triples)
        out.sort(key=rdfio.triple_sort_key)
        return out

    def label_of(self, node: Node) -> str | None:
        labels = self._labels.get(node)
        return min(labels) if labels else None

    def labels_of(self, node: Node) -> list[str]:
        return sorted(self._labels.get(node, ()))

    def has_node(self, node: Node) -> bool:
        return node in self._spo or node in self._osp

    def nodes_of_type(self, class_iri: Iri) -> list[Node]:
        return sorted(self._pos.get((RDF_TYPE, class_iri), ()), key=rdfio.nt_term)

    # -- search ---------------------------------------------------------

    def search_labels(
        self, query: str, type_filter: Iri | str | None = None, limit: int = 20
    ) -> list[tuple[Node, str]]:
        """Entities whose label matches the query, best matches first.

        Ranking: exact label, then label prefix, then substring, each
        tier ordered by (label, entity token). Matching ignores case.
        """
        needle = normalize_name(query, fold_case=True)
        if not needle:
            return []
        type_iri: Iri | None = None
        if type_filter is not None:
            type_iri = type_filter if isinstance(type_filter, Iri) else VOCAB.lookup(type_filter)
        ranked = []
        for node, labels in self._labels.items():
            if type_iri is not None and node not in self._pos.get((RDF_TYPE, type_iri), ()):
                continue
            for label in labels:
                folded = normalize_name(label, fold_case=True)
                if needle == folded:
                    tier = 0
                elif folded.startswith(needle):
                    tier = 1
                elif needle in folded:
                    tier = 2
                else:
                    continue
                ranked.append((tier, label, rdfio.nt_term(node), node))
        ranked.sort(key=lambda row: row[:3])
        return [(node, label) for _, label, _, node in ranked[: max(limit, 0)]]

    # -- neighborhood ---------------------------------------------------

    def neighborhood(
        self,
        node: Node,
        direction: str = "both",
        predicates: Iterable[Iri] | None = None,
        limit: int = 50,
        offset: int = 0,
    ) -> "NeighborhoodPage":
        """Entity-to-entity edges around a node, paginated.

        Only edges whose far endpoint is another node count; literal
        properties belong to the entity view, not the neighborhood.
        """
        if direction not in ("in", "out", "both"):
            raise ModelError(f"direction must be in/out/both, got {direction!r}")
        wanted = set(predicates) if predicates is not None else None
        edges = []
        if direction in ("out", "both"):
            for pred, objs in self._spo.get(node, {}).items():
                # type assertions point at vocabulary classes, not entities
                if pred == RDF_TYPE or (wanted is not None and pred not in wanted):
                    continue
                for other in objs:
                    if isinstance(other, (Iri, LocalNode)):
                        edges.append(Edge(pred, "out", other, self.label_of(other)))
        if direction in ("in", "both"):
            for pred, subs in self._osp.get(node, {}).items():
                if pred == RDF_TYPE or (wanted is not None and pred not in wanted):
                    continue
                for other in subs:
                    edges.append(Edge(pred, "in", other, self.label_of(other)))
        edges.sort(key=lambda e: (e.direction, rdfio.nt_term(e.predicate), rdfio.nt_term(e.other)))
        counts: dict[tuple[str, str], int] = {}
        for edge in edges:
            key = (edge.direction, edge.predicate.value)
            counts[key] = counts.get(key, 0) + 1
        summaries = [
            EdgeCount(direction=d, predicate=Iri(p), count=n)
            for (d, p), n in sorted(counts.items())
        ]
        page = edges[max(offset, 0) : max(offset, 0) + max(limit, 0)]
        return NeighborhoodPage(node=node, total=len(edges), edges=page, counts=summaries)

    # -- places ---------------------------------------------------------

    def publication_places(self, author: Iri) -> list[tuple[str, int]]:
        """Publication countries across an author's expressions.

        Counted per expression (an expression published twice in one
        country counts once); ordered by count descending then country.
        """
        attributed = VOCAB.lookup("wasAttributedTo")
        embodiment = VOCAB.lookup("embodiment")
        participant = VOCAB.lookup("isParticipantIn")
        country_prop = VOCAB.lookup("country")
        per_country: dict[str, set[Node]] = {}
        for expression in self._pos.get((attributed, author), ()):
            countries = set()
            for edition in self._spo.get(expression, {}).get(embodiment, ()):
                if not isinstance(edition, (Iri, LocalNode)):
                    continue
                for event in self._spo.get(edition, {}).get(participant, ()):
                    if not isinstance(event, (Iri, LocalNode)):
                        continue
                    for value in self._spo.get(event, {}).get(country_prop, ()):
                        if isinstance(value, Literal):
                            countries.add(value.value)
            for country in countries:
                per_country.setdefault(country, set()).add(expression)
        rows = [(country, len(exprs)) for country, exprs in per_country.items()]
        rows.sort(key=lambda row: (-row[1], row[0]))
        return rows

    # -- stats ----------------------------------------------------------

    def stats(self, base: str = DEFAULT_BASE) -> "StatsReport":
        person = VOCAB.lookup("Person")
        expression = VOCAB.lookup("Expression")
        attributed = VOCAB.lookup("wasAttributedTo")
        has_role = VOCAB.lookup("hasRole")
        rated = VOCAB.lookup("rated")
        n_ratings = VOCAB.lookup("numberOfRatings")
        n_readers = VOCAB.lookup("numberOfReaders")

        authors = self.nodes_of_type(person)
        author_set = set(authors)
        transnational = {
            node
            for node in self._pos.get((has_role, Literal.text("Transnational")), ())
            if node in author_set
        }

        id_props = ("viafId", "openLibraryId", "goodreadsId")
        identifier_rows = []
        for prop in id_props:
            prop_iri = VOCAB.lookup(prop)
            count = sum(1 for a in authors if self._spo.get(a, {}).get(prop_iri))
            identifier_rows.append(
                IdentifierRow(namespace=prop, authors=count, percent=_pct(count, len(authors)))
            )

        per_source: dict[str, dict] = {
            s: {"works": 0, "authors": set(), "ratings": 0, "readers": 0, "rated": []}
            for s in SOURCES
        }
        for expr in self.nodes_of_type(expression):
            parsed = parse_entity_iri(expr, base) if isinstance(expr, Iri) else None
            if parsed is None:
                continue
            source, _, _ = parsed
            cell = per_source[source]
            cell["works"] += 1
            for author in self._spo.get(expr, {}).get(attributed, ()):
                if author in author_set:
                    cell["authors"].add(author)
            for value in self._spo.get(expr, {}).get(n_ratings, ()):
                cell["ratings"] += int(value.to_python())
            for value in self._spo.get(expr, {}).get(n_readers, ()):
                cell["readers"] += int(value.to_python())
            for value in self._spo.get(expr, {}).get(rated, ()):
                cell["rated"].append(Decimal(value.value))

        source_rows = []
        union_authors: set[Node] = set()
        all_rated: list[Decimal] = []
        for source in SOURCES:
            cell = per_source[source]
            union_authors |= cell["authors"]
            all_rated.extend(cell["rated"])
            trans = cell["authors"] & transnational
            source_rows.append(
                SourceRow(
                    source=source,
                    works=cell["works"],
                    authors_with_works=len(cell["authors"]),
                    transnational_authors=len(trans),
                    transnational_percent=_pct(len(trans), len(cell["authors"])),
                    ratings_sum=cell["ratings"],
                    readers_sum=cell["readers"],
                    avg_rating=_mean(cell["rated"]),
                )
            )
        union_trans = union_authors & transnational
        source_rows.append(
            SourceRow(
                source="total",
                works=sum(r.works for r in source_rows),
                authors_with_works=len(union_authors),
                transnational_authors=len(union_trans),
                transnational_percent=_pct(len(union_trans), len(union_authors)),
                ratings_sum=sum(r.ratings_sum for r in source_rows),
                readers_sum=sum(r.readers_sum for r in source_rows),
                avg_rating=_mean(all_rated),
            )
        )

        role_rows = [
            RoleRow(
                role="Transnational",
                authors=len(transnational),
                percent=_pct(len(transnational), len(authors)),
            )
        ]
        return StatsReport(
            total_authors=len(authors),
            identifier_rows=identifier_rows,
            source_rows=source_rows,
            role_rows=role_rows,
        )

    # -- persistence ----------------------------------------------------

    def export(self, path: str | Path, fmt: str = "nt", include_derived: bool = True) -> None:
        with open(path, "w", encoding="utf-8") as fp:
            rdfio.dump_graph(self.sorted_triples(), fp, fmt, include_derived)

    @classmethod
    def load(cls, path: str | Path, fmt: str | None = None) -> "GraphStore":
        path = Path(path)
        if fmt is None:
            fmt = "ttl" if path.suffix in (".ttl", ".turtle") else "nt"
        with open(path, "r", encoding="utf-8") as fp:
            return cls(rdfio.load_graph(fp, fmt))


def _pct(count: int, total: int) -> float | None:
    if not total:
        return None
    return round(100.0 * count / total, 1)


def _mean(values: list[Decimal]) -> Decimal | None:
    if not values:
        return None
    return (sum(values) / len(values)).quantize(Decimal("0.01"))


@dataclass(frozen=True)
class Edge:
    predicate: Iri
    direction: str  # "in" | "out"
    other: Node
    other_label: str | None


@dataclass(frozen=True)
class EdgeCount:
    direction: str
    predicate: Iri
    count: int


@dataclass(frozen=True)
class NeighborhoodPage:
    node: Node
    total: int
    edges: list[Edge]
    counts: list[EdgeCount]


@dataclass(frozen=True)
class IdentifierRow:
    namespace: str
    authors: int
    percent: float | None


@dataclass(frozen=True)
class SourceRow:
    source: str
    works: int
    authors_with_works: int
    transnational_authors: int
    transnational_percent: float | None
    ratings_sum: int
    readers_sum: int
    avg_rating: Decimal | None


@dataclass(frozen=True)
class RoleRow:
    role: str
    authors: int
    percent: float | None


@dataclass(frozen=True)
class StatsReport:
    total_authors: int
    identifier_rows: list[IdentifierRow]
    source_rows: list[SourceRow]
    role_rows: list[RoleRow]

    def to_dict(self) -> dict:
        return {
            "total_authors": self.total_authors,
            "identifiers": [
                {"namespace": r.namespace, "authors": r.authors, "percent": r.percent}
                for r in self.identifier_rows
            ],
            "sources": [
                {
                    "source": r.source,
                    "works": r.works,
                    "authors_with_works": r.authors_with_works,
                    "transnational_authors": r.transnational_authors,
                    "transnational_percent": r.transnational_percent,
                    "ratings_sum": r.ratings_sum,
                    "readers_sum": r.readers_sum,
                    "avg_rating": str(r.avg_rating) if r.avg_rating is not None else None,
                }
                for r in self.source_rows
            ],
            "roles": [
                {"role": r.role, "authors": r.authors, "percent": r.percent}
                for r in self.role_rows
            ],
        }

    def to_csv(self) -> str:
        """Long-form CSV: section,label,metric,value (one fact per row)."""
        lines = ["section,label,metric,value"]

        def emit(section: str, label: str, metric: str, value) -> None:
            if value is None:
                rendered = ""
            else:
                rendered = str(value)
            lines.append(f"{section},{label},{metric},{rendered}")

        emit("authors", "all", "count", self.total_authors)
        for row in self.identifier_rows:
            emit("identifiers", row.namespace, "authors", row.authors)
            emit("identifiers", row.namespace, "percent", row.percent)
        for row in self.source_rows:
            emit("sources", row.source, "works", row.works)
            emit("sources", row.source, "authors_with_works", row.authors_with_works)
            emit("sources", row.source, "transnational_authors", row.transnational_authors)
            emit("sources", row.source, "transnational_percent", row.transnational_percent)
            emit("sources", row.source, "ratings_sum", row.ratings_sum)
            emit("sources", row.source, "readers_sum", row.readers_sum)
            emit("sources", row.source, "avg_rating", row.avg_rating)
        for row in self.role_rows:
            emit("roles", row.role, "authors", row.authors)
            emit("roles", row.role, "percent", row.percent)
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        out = [f"authors: {self.total_authors}", "", "identifier coverage:"]
        for row in self.identifier_rows:
            pct = f"{row.percent}%" if row.percent is not None else "n/a"
            out.append(f"  {row.namespace:<14} {row.authors:>6}  {pct}")
        out.append("")
        out.append("per source:")
        header = (
            f"  {'source':<12} {'works':>6} {'authors':>8} {'transnat.':>10} "
            f"{'pct':>6} {'ratings':>9} {'readers':>9} {'avg':>6}"
        )
        out.append(header)
        for row in self.source_rows:
            pct = f"{row.transnational_percent}" if row.transnational_percent is not None else "n/a"
            avg = str(row.avg_rating) if row.avg_rating is not None else "n/a"
            out.append(
                f"  {row.source:<12} {row.works:>6} {row.authors_with_works:>8} "
                f"{row.transnational_authors:>10} {pct:>6} {row.ratings_sum:>9} "
                f"{row.readers_sum:>9} {avg:>6}"
            )
        out.append("")
        out.append("roles:")
        for row in self.role_rows:
            pct = f"{row.percent}%" if row.percent is not None else "n/a"
            out.append(f"  {row.role:<14} {row.authors:>6}  {pct}")
        return "\n".join(out) + "\n"
