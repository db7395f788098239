"""Core graph terms, vocabulary, IRI minting, and domain entities.

Everything downstream (store, builders, service) speaks in the types
defined here: ``Iri``, ``LocalNode``, ``Literal``, ``Triple``, and the
frozen domain entities that the graph builder turns into triples.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from decimal import Decimal
from importlib import resources
from urllib.parse import quote, unquote

from .errors import ModelError, UnknownTermError

DEFAULT_BASE = "http://litkg.example/"

SOURCES = ("wikidata", "openlibrary", "goodreads")
ENTITY_KINDS = ("author", "work", "edition")

MIN_BIRTH_YEAR = 1809

_IRI_FORBIDDEN = re.compile(r'[\x00-\x20<>"{}|^`\\]')


@dataclass(frozen=True)
class Iri:
    """An absolute IRI used as a graph term."""

    value: str

    def __post_init__(self):
        if not self.value or _IRI_FORBIDDEN.search(self.value):
            raise ModelError(f"invalid IRI: {self.value!r}")
        scheme, sep, rest = self.value.partition(":")
        if not sep or not rest or not re.fullmatch(r"[A-Za-z][A-Za-z0-9+.-]*", scheme):
            raise ModelError(f"IRI has no valid scheme: {self.value!r}")

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class LocalNode:
    """A graph-local node with no global IRI (reified events, agents)."""

    id: str

    def __post_init__(self):
        if not re.fullmatch(r"[A-Za-z0-9_][A-Za-z0-9_-]*", self.id):
            raise ModelError(f"invalid local node id: {self.id!r}")

    def __str__(self) -> str:
        return f"_:{self.id}"


# Literal datatypes are a closed set; the graph never needs more.
STRING = "string"
INTEGER = "integer"
DECIMAL = "decimal"

_INTEGER_FORM = re.compile(r"[+-]?[0-9]+")
_DECIMAL_FORM = re.compile(r"[+-]?(?:[0-9]+\.?[0-9]*|\.[0-9]+)")


@dataclass(frozen=True)
class Literal:
    """A typed literal term. ``value`` is the exact lexical form."""

    value: str
    datatype: str = STRING
    lang: str | None = None

    def __post_init__(self):
        if self.datatype not in (STRING, INTEGER, DECIMAL):
            raise ModelError(f"unsupported literal datatype: {self.datatype!r}")
        if self.lang is not None and self.datatype != STRING:
            raise ModelError("language tags only apply to string literals")
        if self.lang is not None and not re.fullmatch(r"[A-Za-z]+(-[A-Za-z0-9]+)*", self.lang):
            raise ModelError(f"invalid language tag: {self.lang!r}")
        if self.datatype == INTEGER and not _INTEGER_FORM.fullmatch(self.value):
            raise ModelError(f"not an integer lexical form: {self.value!r}")
        if self.datatype == DECIMAL and not _DECIMAL_FORM.fullmatch(self.value):
            raise ModelError(f"not a decimal lexical form: {self.value!r}")

    @classmethod
    def text(cls, value: str, lang: str | None = None) -> "Literal":
        return cls(value, STRING, lang)

    @classmethod
    def integer(cls, value: int) -> "Literal":
        return cls(str(int(value)), INTEGER)

    @classmethod
    def decimal(cls, value: "Decimal | str") -> "Literal":
        dec = Decimal(value)
        if not dec.is_finite():
            raise ModelError(f"decimal literal must be finite: {value!r}")
        text = str(dec)
        if "E" in text or "e" in text:
            # Re-render exponent forms; xsd:decimal has no exponent syntax.
            text = format(dec, "f")
        return cls(text, DECIMAL)

    def to_python(self):
        if self.datatype == INTEGER:
            return int(self.value)
        if self.datatype == DECIMAL:
            return Decimal(self.value)
        return self.value


Node = Iri | LocalNode
Term = Iri | LocalNode | Literal


@dataclass(frozen=True)
class Triple:
    subject: Node
    predicate: Iri
    object: Term

    def __post_init__(self):
        if not isinstance(self.subject, (Iri, LocalNode)):
            raise ModelError(f"triple subject must be a node, got {type(self.subject).__name__}")
        if not isinstance(self.predicate, Iri):
            raise ModelError(f"triple predicate must be an IRI, got {type(self.predicate).__name__}")
        if not isinstance(self.object, (Iri, LocalNode, Literal)):
            raise ModelError(f"triple object must be a term, got {type(self.object).__name__}")


class Vocabulary:
    """The closed term set the graph is written with.

    Terms resolve by bare short name ("publicationYear") or prefixed
    form ("urb:publicationYear"); both map to one absolute IRI.
    """

    def __init__(self, namespaces: dict[str, str], terms: list[dict]):
        self.namespaces = dict(namespaces)
        self._by_name: dict[str, Iri] = {}
        self._derived: set[str] = set()
        self._kinds: dict[str, str] = {}
        self._prefixed_of: dict[str, str] = {}
        for term in terms:
            prefix, _, local = term["prefixed"].partition(":")
            if prefix not in self.namespaces:
                raise ModelError(f"term {term['prefixed']!r} uses unknown prefix {prefix!r}")
            iri = Iri(self.namespaces[prefix] + local)
            for name in (term["short"], term["prefixed"]):
                if name in self._by_name and self._by_name[name] != iri:
                    raise ModelError(f"vocabulary name collision: {name!r}")
                self._by_name[name] = iri
            self._kinds[iri.value] = term["kind"]
            self._prefixed_of[iri.value] = term["prefixed"]
            if term.get("derived"):
                self._derived.add(iri.value)

    @classmethod
    def load_default(cls) -> "Vocabulary":
        raw = json.loads(
            resources.files("litkg.data").joinpath("vocabulary.json").read_text("utf-8")
        )
        return cls(raw["namespaces"], raw["terms"])

    def lookup(self, name: str) -> Iri:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownTermError(f"unknown vocabulary term: {name!r}") from None

    def is_derived(self, predicate: Iri) -> bool:
        return predicate.value in self._derived

    def prefixed(self, iri: Iri) -> str | None:
        return self._prefixed_of.get(iri.value)

    def terms(self) -> list[tuple[str, Iri]]:
        seen = {}
        for name, iri in self._by_name.items():
            if ":" not in name:
                seen[name] = iri
        return sorted(seen.items())


VOCAB = Vocabulary.load_default()


def vocabulary_lookup(name: str) -> Iri:
    """Resolve a vocabulary short name to its IRI; unknown names raise."""
    return VOCAB.lookup(name)


def mint_iri(source: str, source_id: str, kind: str, base: str = DEFAULT_BASE) -> Iri:
    """Mint the canonical IRI for a source-native entity.

    Layout is ``{base}{kind}/{source}/{percent-encoded id}`` so that any
    printable source id round-trips and two sources can never collide.
    """
    if source not in SOURCES:
        raise ModelError(f"unknown source: {source!r}")
    if kind not in ENTITY_KINDS:
        raise ModelError(f"unknown entity kind: {kind!r}")
    if not source_id or not source_id.strip():
        raise ModelError("source id must be non-empty")
    if any(ord(c) < 0x20 or ord(c) == 0x7F for c in source_id):
        raise ModelError(f"source id contains control characters: {source_id!r}")
    if not base.endswith("/"):
        base = base + "/"
    return Iri(f"{base}{kind}/{source}/{quote(source_id, safe='')}")


def parse_entity_iri(iri: Iri | str, base: str = DEFAULT_BASE) -> tuple[str, str, str] | None:
    """Invert :func:`mint_iri`. Returns (source, source_id, kind) or None."""
    text = iri.value if isinstance(iri, Iri) else iri
    if not base.endswith("/"):
        base = base + "/"
    if not text.startswith(base):
        return None
    parts = text[len(base):].split("/")
    if len(parts) != 3:
        return None
    kind, source, encoded = parts
    if kind not in ENTITY_KINDS or source not in SOURCES or not encoded:
        return None
    return source, unquote(encoded), kind


def subject_iri(label: str, base: str = DEFAULT_BASE) -> Iri:
    """IRI for a folksonomy subject node, derived from its label."""
    if not label or not label.strip():
        raise ModelError("subject label must be non-empty")
    if not base.endswith("/"):
        base = base + "/"
    return Iri(f"{base}subject/{quote(label, safe='')}")


def _check_year(year: int | None, what: str) -> None:
    if year is not None and not (0 < year < 3000):
        raise ModelError(f"{what} out of range: {year}")


@dataclass(frozen=True)
class AuthorEntity:
    """A unified author after selection, alignment, and classification."""

    source_id: str  # wikidata id; authors are anchored on the wikidata dump
    name: str
    birth_year: int
    birth_country: str
    death_year: int | None = None
    gender: str | None = None
    ethnic_group: str | None = None
    citizenships: tuple[str, ...] = ()
    occupations: tuple[str, ...] = ()
    roles: tuple[str, ...] = ()
    external_ids: tuple[tuple[str, str], ...] = ()  # (namespace, id) pairs
    wikipedia_url: str | None = None

    def __post_init__(self):
        if not self.name.strip():
            raise ModelError(f"author {self.source_id}: empty name")
        if self.birth_year < MIN_BIRTH_YEAR:
            raise ModelError(
                f"author {self.source_id}: birth year {self.birth_year} "
                f"before {MIN_BIRTH_YEAR}"
            )
        _check_year(self.birth_year, "birth year")
        _check_year(self.death_year, "death year")
        if not self.birth_country:
            raise ModelError(f"author {self.source_id}: birth country required")
        seen = set()
        for namespace, ext_id in self.external_ids:
            if namespace in seen:
                raise ModelError(
                    f"author {self.source_id}: duplicate external id namespace {namespace!r}"
                )
            seen.add(namespace)
            if not ext_id:
                raise ModelError(f"author {self.source_id}: empty {namespace} id")

    def external_id(self, namespace: str) -> str | None:
        for ns, ext_id in self.external_ids:
            if ns == namespace:
                return ext_id
        return None


@dataclass(frozen=True)
class PublicationEvent:
    """A reified publication of one edition.

    The event node carries the bibliographic facts (year, country,
    language) and the people involved; every field is optional but an
    event with no populated field at all is rejected.
    """

    event_id: str  # deterministic graph-local id
    year: int | None = None
    country: str | None = None
    language: str | None = None
    publisher: str | None = None
    contributors: tuple[tuple[str, str], ...] = ()  # (name, role) pairs

    def __post_init__(self):
        _check_year(self.year, "publication year")
        LocalNode(self.event_id)  # validates the id shape
        if (
            self.year is None
            and self.country is None
            and self.language is None
            and self.publisher is None
            and not self.contributors
        ):
            raise ModelError(f"publication {self.event_id}: no populated fields")
        for name, role in self.contributors:
            if not name or not role:
                raise ModelError(f"publication {self.event_id}: blank contributor entry")


@dataclass(frozen=True)
class Edition:
    """One manifestation of an expression on one source platform."""

    source: str
    source_id: str
    publication: PublicationEvent | None = None

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ModelError(f"edition {self.source_id}: unknown source {self.source!r}")
        if not self.source_id:
            raise ModelError("edition id must be non-empty")


@dataclass(frozen=True)
class WorkExpression:
    """A work as expressed on one source platform, with reception counts."""

    source: str
    source_id: str
    title: str
    author_id: str  # wikidata id of the unified author
    subjects: tuple[str, ...] = ()
    avg_rating: Decimal | None = None
    ratings_count: int | None = None
    readers_count: int | None = None
    editions: tuple[Edition, ...] = ()

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ModelError(f"work {self.source_id}: unknown source {self.source!r}")
        if not self.source_id or not self.title.strip():
            raise ModelError(f"work {self.source_id!r}: id and title required")
        if self.ratings_count is not None and self.ratings_count < 0:
            raise ModelError(f"work {self.source_id}: negative ratings count")
        if self.readers_count is not None and self.readers_count < 0:
            raise ModelError(f"work {self.source_id}: negative readers count")
        if self.avg_rating is not None:
            if not (0 <= self.avg_rating <= 5):
                raise ModelError(f"work {self.source_id}: rating {self.avg_rating} outside 0..5")
            if not self.ratings_count:
                raise ModelError(
                    f"work {self.source_id}: average rating requires a ratings count"
                )

    @property
    def has_reception(self) -> bool:
        return bool(self.ratings_count) or bool(self.readers_count)
