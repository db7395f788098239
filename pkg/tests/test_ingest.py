import json
from decimal import Decimal

import pytest
from hypothesis import given
from hypothesis import strategies as st

from litkg.errors import IngestError
from litkg.ingest import (
    isbn13_valid,
    load_viaf_isbns,
    normalize_name,
    parse_dump,
    select_authors,
)


class TestNormalizeName:
    def test_collapses_whitespace(self):
        assert normalize_name("  J.  K.\tRowling \n") == "J. K. Rowling"

    def test_applies_nfc(self):
        # e + combining acute composes to a single scalar
        assert normalize_name("García") == "García"

    def test_fold_case_switch(self):
        assert normalize_name("McEwan") == "McEwan"
        assert normalize_name("McEwan", fold_case=True) == "mcewan"

    @given(st.text())
    def test_idempotent(self, raw):
        once = normalize_name(raw)
        assert normalize_name(once) == once


class TestIsbn13:
    @pytest.mark.parametrize(
        "isbn", ["9780140449136", "978-0-14-044913-6", "978 0140449136"]
    )
    def test_valid_forms(self, isbn):
        assert isbn13_valid(isbn)

    @pytest.mark.parametrize(
        "isbn", ["9780140449137", "978014044913", "97801404491367", "97801404491ab", ""]
    )
    def test_invalid_forms(self, isbn):
        assert not isbn13_valid(isbn)


def author_line(**overrides):
    rec = {
        "record_type": "author",
        "source": "wikidata",
        "source_id": "Q1",
        "name": "Test Writer",
        "birth_year": 1900,
        "birth_country": "FR",
        "occupations": ["writer"],
    }
    rec.update(overrides)
    return json.dumps(rec)


def work_line(**overrides):
    rec = {
        "record_type": "work",
        "source": "wikidata",
        "source_id": "W1",
        "author_source_id": "Q1",
        "title": "A Title",
    }
    rec.update(overrides)
    return json.dumps(rec)


def write_dump(tmp_path, lines, name="dump.jsonl"):
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n", "utf-8")
    return path


class TestParseDump:
    def test_parses_authors_and_works_in_order(self, tmp_path):
        path = write_dump(
            tmp_path,
            [
                author_line(source_id="Q1"),
                work_line(source_id="W1"),
                author_line(source_id="Q2"),
                work_line(source_id="W2"),
            ],
        )
        result = parse_dump(path, "wikidata")
        assert [a.source_id for a in result.authors] == ["Q1", "Q2"]
        assert [w.source_id for w in result.works] == ["W1", "W2"]
        assert result.errors == []

    def test_bad_json_collected_with_line_number(self, tmp_path):
        path = write_dump(tmp_path, [author_line(), "{not json", work_line()])
        result = parse_dump(path, "wikidata")
        assert len(result.authors) == 1 and len(result.works) == 1
        [err] = result.errors
        assert err.line_no == 2
        assert "invalid JSON" in err.message

    def test_schema_violation_collected(self, tmp_path):
        bad = json.dumps(
            {"record_type": "author", "source": "wikidata", "source_id": "Q1"}
        )
        path = write_dump(tmp_path, [bad])
        result = parse_dump(path, "wikidata")
        assert result.authors == []
        assert "name" in result.errors[0].message

    def test_unknown_record_type_collected(self, tmp_path):
        path = write_dump(tmp_path, [json.dumps({"record_type": "review"})])
        [err] = parse_dump(path, "wikidata").errors
        assert "record_type" in err.message

    def test_wrong_source_tag_rejected(self, tmp_path):
        path = write_dump(tmp_path, [author_line(source="goodreads", source_id="5")])
        result = parse_dump(path, "wikidata")
        assert result.authors == []
        assert "goodreads" in result.errors[0].message

    def test_unknown_source_argument(self, tmp_path):
        path = write_dump(tmp_path, [author_line()])
        with pytest.raises(IngestError):
            parse_dump(path, "viaf")

    def test_missing_file(self, tmp_path):
        with pytest.raises(IngestError):
            parse_dump(tmp_path / "absent.jsonl", "wikidata")

    def test_rating_keeps_lexical_form(self, tmp_path):
        path = write_dump(
            tmp_path, [work_line(avg_rating=3.98, ratings_count=1000)]
        )
        [work] = parse_dump(path, "wikidata").works
        assert work.avg_rating == Decimal("3.98")
        assert str(work.avg_rating) == "3.98"

    def test_names_and_titles_normalized_at_boundary(self, tmp_path):
        path = write_dump(
            tmp_path,
            [
                author_line(name="  Esther   Salaman "),
                work_line(title="Two\tSilver  Roubles"),
            ],
        )
        result = parse_dump(path, "wikidata")
        assert result.authors[0].name == "Esther Salaman"
        assert result.works[0].title == "Two Silver Roubles"

    def test_occupation_codes_mapped(self, tmp_path):
        path = write_dump(tmp_path, [author_line(occupations=["Q36180", "surgeon"])])
        [author] = parse_dump(path, "wikidata").authors
        assert author.occupations == ("writer", "surgeon")

    def test_editions_and_contributors(self, tmp_path):
        line = work_line(
            ratings_count=5,
            editions=[
                {
                    "edition_id": "E1",
                    "year": 1999,
                    "country": "IT",
                    "language": "it",
                    "publisher": "Salani",
                    "contributors": [{"name": "Beatrice Masini", "role": "translator"}],
                }
            ],
        )
        [work] = parse_dump(write_dump(tmp_path, [line]), "wikidata").works
        [ed] = work.editions
        assert ed.year == 1999
        assert ed.contributors == (("Beatrice Masini", "translator"),)

    def test_blank_lines_skipped(self, tmp_path):
        path = write_dump(tmp_path, [author_line(), "", "   ", work_line()])
        result = parse_dump(path, "wikidata")
        assert len(result.authors) == 1 and len(result.works) == 1


class TestSelectAuthors:
    def test_keeps_qualifying_author(self, tmp_path):
        path = write_dump(tmp_path, [author_line()])
        records = parse_dump(path, "wikidata").authors
        kept, rejected = select_authors(records)
        assert len(kept) == 1 and not rejected

    def test_rejection_reasons_in_precedence_order(self, tmp_path):
        lines = [
            # fails occupation AND birth year: counted under occupation
            author_line(source_id="Q1", occupations=["surgeon"], birth_year=1700),
            author_line(source_id="Q2", birth_year=1808),
            author_line(source_id="Q3", birth_year=None),
            author_line(source_id="Q4", birth_country=None),
        ]
        records = parse_dump(write_dump(tmp_path, lines), "wikidata").authors
        kept, rejected = select_authors(records)
        assert kept == []
        assert rejected == {"occupation": 1, "birth_year": 2, "birth_country": 1}

    def test_cutoff_year_is_inclusive(self, tmp_path):
        path = write_dump(tmp_path, [author_line(birth_year=1809)])
        kept, rejected = select_authors(parse_dump(path, "wikidata").authors)
        assert len(kept) == 1

    def test_custom_occupations(self, tmp_path):
        path = write_dump(tmp_path, [author_line(occupations=["playwright"])])
        records = parse_dump(path, "wikidata").authors
        kept, _ = select_authors(records, occupations=frozenset({"playwright"}))
        assert len(kept) == 1


class TestViafIsbns:
    def test_loads_and_dedupes(self, tmp_path):
        lines = [
            json.dumps({"author_id": "Q1", "isbns": ["9780140449136", "9780140449136"]}),
            json.dumps({"author_id": "Q2", "isbns": ["9780311251346"]}),
        ]
        isbns, errors = load_viaf_isbns(write_dump(tmp_path, lines))
        assert isbns == {"Q1": ["9780140449136"], "Q2": ["9780311251346"]}
        assert errors == []

    def test_invalid_isbn_reported_not_kept(self, tmp_path):
        lines = [json.dumps({"author_id": "Q1", "isbns": ["9780140449137"]})]
        isbns, errors = load_viaf_isbns(write_dump(tmp_path, lines))
        assert isbns == {"Q1": []}
        assert "9780140449137" in errors[0].message

    def test_same_author_across_lines_appends(self, tmp_path):
        lines = [
            json.dumps({"author_id": "Q1", "isbns": ["9780140449136"]}),
            json.dumps({"author_id": "Q1", "isbns": ["9780311251346"]}),
        ]
        isbns, _ = load_viaf_isbns(write_dump(tmp_path, lines))
        assert isbns["Q1"] == ["9780140449136", "9780311251346"]

    def test_malformed_rows_collected(self, tmp_path):
        lines = ["[1,2]", json.dumps({"author_id": "Q1"})]
        isbns, errors = load_viaf_isbns(write_dump(tmp_path, lines))
        assert isbns == {}
        assert [e.line_no for e in errors] == [1, 2]
