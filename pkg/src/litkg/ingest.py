"""Reading and filtering the three JSONL source dumps.

Every line is one JSON record (author or work). Records are validated
against bundled JSON schemas; a bad line is collected as an error with
its line number and parsing continues. Ratings are decoded with
``Decimal`` so their lexical form survives a round trip.
"""
from __future__ import annotations

import json
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from decimal import Decimal
from importlib import resources
from pathlib import Path

import jsonschema

from .errors import IngestError
from .model import MIN_BIRTH_YEAR, SOURCES

DEFAULT_OCCUPATIONS = frozenset({"writer", "novelist", "poet"})

_WS_RUN = re.compile(r"\s+")


def normalize_name(raw: str, fold_case: bool = False) -> str:
    """Canonicalize a person or work name for comparison and display.

    Applies Unicode NFC, strips outer whitespace, and collapses inner
    whitespace runs to single spaces. Case folding is off by default:
    the sources use consistent casing and folding loses information.
    """
    text = _WS_RUN.sub(" ", unicodedata.normalize("NFC", raw).strip())
    return text.casefold() if fold_case else text


def isbn13_valid(value: str) -> bool:
    """Check the ISBN-13 mod-10 weighted checksum; separators allowed."""
    digits = value.replace("-", "").replace(" ", "")
    if len(digits) != 13 or not digits.isdigit():
        return False
    total = sum(int(d) * (1 if i % 2 == 0 else 3) for i, d in enumerate(digits))
    return total % 10 == 0


@dataclass(frozen=True)
class SourceAuthorRecord:
    source: str
    source_id: str
    name: str
    line_no: int
    birth_year: int | None = None
    death_year: int | None = None
    birth_country: str | None = None
    citizenships: tuple[str, ...] = ()
    ethnic_group: str | None = None
    gender: str | None = None
    occupations: tuple[str, ...] = ()
    external_ids: dict[str, str] = field(default_factory=dict)
    wikipedia_url: str | None = None


@dataclass(frozen=True)
class SourceEditionRecord:
    edition_id: str
    year: int | None = None
    country: str | None = None
    language: str | None = None
    publisher: str | None = None
    isbn13: tuple[str, ...] = ()
    contributors: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class SourceWorkRecord:
    source: str
    source_id: str
    author_source_id: str
    title: str
    line_no: int
    subjects: tuple[str, ...] = ()
    avg_rating: Decimal | None = None
    ratings_count: int | None = None
    readers_count: int | None = None
    editions: tuple[SourceEditionRecord, ...] = ()


@dataclass(frozen=True)
class RecordError:
    line_no: int
    message: str


@dataclass
class ParseResult:
    authors: list[SourceAuthorRecord] = field(default_factory=list)
    works: list[SourceWorkRecord] = field(default_factory=list)
    errors: list[RecordError] = field(default_factory=list)


def _load_schema(name: str) -> jsonschema.Draft202012Validator:
    raw = json.loads(resources.files("litkg.schemas").joinpath(name).read_text("utf-8"))
    return jsonschema.Draft202012Validator(raw)


_AUTHOR_SCHEMA = _load_schema("author_record.json")
_WORK_SCHEMA = _load_schema("work_record.json")
_VIAF_SCHEMA = _load_schema("viaf_isbns.json")


def _load_occupation_codes() -> dict[str, str]:
    raw = resources.files("litkg.data").joinpath("occupation_codes.json").read_text("utf-8")
    return json.loads(raw)


OCCUPATION_CODES = _load_occupation_codes()


def _first_schema_error(validator, record) -> str | None:
    for error in sorted(validator.iter_errors(record), key=lambda e: list(e.absolute_path)):
        where = ".".join(str(p) for p in error.absolute_path)
        return f"{where}: {error.message}" if where else error.message
    return None


def _author_from(record: dict, line_no: int) -> SourceAuthorRecord:
    occupations = tuple(
        OCCUPATION_CODES.get(occ, occ) for occ in record.get("occupations") or ()
    )
    return SourceAuthorRecord(
        source=record["source"],
        source_id=record["source_id"],
        name=normalize_name(record["name"]),
        line_no=line_no,
        birth_year=record.get("birth_year"),
        death_year=record.get("death_year"),
        birth_country=record.get("birth_country"),
        citizenships=tuple(record.get("citizenships") or ()),
        ethnic_group=record.get("ethnic_group"),
        gender=record.get("gender"),
        occupations=occupations,
        external_ids=dict(record.get("external_ids") or {}),
        wikipedia_url=record.get("wikipedia_url"),
    )


def _work_from(record: dict, line_no: int) -> SourceWorkRecord:
    editions = tuple(
        SourceEditionRecord(
            edition_id=ed["edition_id"],
            year=ed.get("year"),
            country=ed.get("country"),
            language=ed.get("language"),
            publisher=ed.get("publisher"),
            isbn13=tuple(ed.get("isbn13") or ()),
            contributors=tuple(
                (c["name"], c["role"]) for c in ed.get("contributors") or ()
            ),
        )
        for ed in record.get("editions") or ()
    )
    rating = record.get("avg_rating")
    if rating is not None and not isinstance(rating, Decimal):
        rating = Decimal(str(rating))
    return SourceWorkRecord(
        source=record["source"],
        source_id=record["source_id"],
        author_source_id=record["author_source_id"],
        title=normalize_name(record["title"]),
        line_no=line_no,
        subjects=tuple(record.get("subjects") or ()),
        avg_rating=rating,
        ratings_count=record.get("ratings_count"),
        readers_count=record.get("readers_count"),
        editions=editions,
    )


def parse_dump(path: str | Path, source: str) -> ParseResult:
    """Read one JSONL dump, keeping file order and collecting bad lines.

    ``source`` declares which platform the file claims to hold; records
    tagged with any other source are rejected rather than silently mixed
    into the wrong graph segment.
    """
    if source not in SOURCES:
        raise IngestError(f"unknown source: {source!r}")
    result = ParseResult()
    try:
        text = Path(path).read_text("utf-8")
    except OSError as exc:
        raise IngestError(f"cannot read dump {path}: {exc}") from exc
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line, parse_float=Decimal)
        except json.JSONDecodeError as exc:
            result.errors.append(RecordError(line_no, f"invalid JSON: {exc.msg}"))
            continue
        if not isinstance(record, dict):
            result.errors.append(RecordError(line_no, "record is not a JSON object"))
            continue
        record_type = record.get("record_type")
        if record_type == "author":
            schema = _AUTHOR_SCHEMA
        elif record_type == "work":
            schema = _WORK_SCHEMA
        else:
            result.errors.append(RecordError(line_no, f"unknown record_type: {record_type!r}"))
            continue
        message = _first_schema_error(schema, record)
        if message:
            result.errors.append(RecordError(line_no, message))
            continue
        if record["source"] != source:
            result.errors.append(
                RecordError(line_no, f"record tagged {record['source']!r} in a {source!r} dump")
            )
            continue
        if record_type == "author":
            result.authors.append(_author_from(record, line_no))
        else:
            result.works.append(_work_from(record, line_no))
    return result


def select_authors(
    records: list[SourceAuthorRecord],
    occupations: frozenset[str] = DEFAULT_OCCUPATIONS,
    min_birth_year: int = MIN_BIRTH_YEAR,
) -> tuple[list[SourceAuthorRecord], Counter]:
    """Keep authors that qualify for the graph.

    A kept author writes in one of the allowed occupations, was born in
    ``min_birth_year`` or later, and has a known birth country. Each
    rejected author is counted under its primary reason, checked in
    that fixed order.
    """
    kept = []
    rejected: Counter = Counter()
    for record in records:
        if not set(record.occupations) & occupations:
            rejected["occupation"] += 1
        elif record.birth_year is None or record.birth_year < min_birth_year:
            rejected["birth_year"] += 1
        elif not record.birth_country:
            rejected["birth_country"] += 1
        else:
            kept.append(record)
    return kept, rejected


def load_viaf_isbns(path: str | Path) -> tuple[dict[str, list[str]], list[RecordError]]:
    """Read the authority-file ISBN lists: {author_id: [isbn13, ...]}.

    ISBNs failing the checksum are dropped and reported; duplicate
    ISBNs within one author are collapsed keeping first position.
    """
    isbns: dict[str, list[str]] = {}
    errors: list[RecordError] = []
    try:
        text = Path(path).read_text("utf-8")
    except OSError as exc:
        raise IngestError(f"cannot read isbn list {path}: {exc}") from exc
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            errors.append(RecordError(line_no, f"invalid JSON: {exc.msg}"))
            continue
        message = _first_schema_error(_VIAF_SCHEMA, record) if isinstance(record, dict) else "not an object"
        if message:
            errors.append(RecordError(line_no, message))
            continue
        bucket = isbns.setdefault(record["author_id"], [])
        for isbn in record["isbns"]:
            if not isbn13_valid(isbn):
                errors.append(RecordError(line_no, f"invalid ISBN-13: {isbn}"))
            elif isbn not in bucket:
                bucket.append(isbn)
    return isbns, errors
