"""Regenerate the bundled integration fixture under tests/fixture1/.

The fixture is a tiny three-platform corpus (12 authors, 31 work records)
plus a pre-recorded HTTP cache, crafted so that every alignment heuristic,
both reception paths, and all of the classification branches fire at least
once.  Goldens under tests/fixture1/goldens/ are frozen from a verified
run and are NOT rewritten here.

Run from the repository root:

    python3 scripts/gen_fixture.py
"""

from __future__ import annotations

import json
import shutil
from pathlib import Path
from urllib.parse import quote

from litkg.connectors import GOODREADS_BASE, OPENLIBRARY_BASE, HttpCache

ROOT = Path(__file__).resolve().parent.parent
FIXTURE = ROOT / "tests" / "fixture1"
DUMPS = FIXTURE / "dumps"
CACHE = FIXTURE / "cache"

SITEMAP_URL = "https://www.goodreads.com/siteindex.author.xml"


def isbn13(prefix12: str) -> str:
    digits = [int(c) for c in prefix12]
    assert len(digits) == 12
    total = sum(d * (3 if i % 2 else 1) for i, d in enumerate(digits))
    return prefix12 + str((10 - total % 10) % 10)


# Stable ISBNs used by both the VIAF list and the recorded lookups.
ISBN_KAWABATA_1 = isbn13("978039473376")
ISBN_KAWABATA_2 = isbn13("978042550345")
ISBN_MORRISON_1 = isbn13("978140003341")
ISBN_MORRISON_2 = isbn13("978030726457")
ISBN_ASHWORTH_1 = isbn13("978111122233")


def author(source, source_id, name, birth_year, birth_country, **extra):
    rec = {
        "record_type": "author",
        "source": source,
        "source_id": source_id,
        "name": name,
        "birth_year": birth_year,
        "birth_country": birth_country,
    }
    rec.update(extra)
    return rec


def work(source, source_id, title, author_id, **extra):
    rec = {
        "record_type": "work",
        "source": source,
        "source_id": source_id,
        "title": title,
        "author_source_id": author_id,
    }
    rec.update(extra)
    return rec


def edition(edition_id, **extra):
    rec = {"edition_id": edition_id}
    rec.update(extra)
    return rec


WIKIDATA = [
    author(
        "wikidata", "Q155845", "Chinua Achebe", 1930, "NG",
        death_year=2013, gender="male", citizenships=["NG"],
        occupations=["Q36180"], external_ids={"viaf": "66532475"},
        wikipedia_url="https://en.wikipedia.org/wiki/Chinua_Achebe",
    ),
    author(
        "wikidata", "Q9199", "Jacques Derrida", 1930, "DZ",
        death_year=2004, gender="male", citizenships=["FR"],
        occupations=["writer", "philosopher"],
        external_ids={"viaf": "95151565"},
        wikipedia_url="https://en.wikipedia.org/wiki/Jacques_Derrida",
    ),
    author(
        "wikidata", "Q3487036", "Slimane Azem", 1918, "DZ",
        death_year=1983, gender="male", citizenships=["DZ", "FR"],
        occupations=["poet"], external_ids={"viaf": "59233992"},
    ),
    author(
        "wikidata", "Q4405658", "Esther Salaman", 1900, "UA",
        death_year=1995, gender="female", citizenships=["GB"],
        occupations=["novelist", "physicist"],
        external_ids={"viaf": "317107477", "goodreads": "618352"},
    ),
    author(
        "wikidata", "Q5878", "Gabriel García Márquez", 1927, "CO",
        death_year=2014, gender="male", citizenships=["CO"],
        occupations=["Q6625963"], external_ids={"viaf": "54147973"},
    ),
    author(
        "wikidata", "Q72334", "Toni Morrison", 1931, "US",
        death_year=2019, gender="female", citizenships=["US"],
        occupations=["Q6625963", "Q36180"], ethnic_group="African Americans",
        external_ids={"viaf": "44328133"},
        wikipedia_url="https://en.wikipedia.org/wiki/Toni_Morrison",
    ),
    author(
        "wikidata", "Q44306", "Salman Rushdie", 1947, "IN",
        gender="male", citizenships=["GB", "US"],
        occupations=["Q6625963"], external_ids={"viaf": "111557471"},
    ),
    author(
        "wikidata", "Q909", "Jorge Luis Borges", 1899, "AR",
        death_year=1986, gender="male", citizenships=["AR"],
        occupations=["Q36180", "Q49757"],
        external_ids={"viaf": "76317293", "goodreads": "500"},
    ),
    author(
        "wikidata", "Q34660", "J. K. Rowling", 1965, "GB",
        gender="female", citizenships=["GB"],
        occupations=["Q6625963"], external_ids={"viaf": "116796842"},
        wikipedia_url="https://en.wikipedia.org/wiki/J._K._Rowling",
    ),
    author(
        "wikidata", "Q132014", "Yasunari Kawabata", 1899, "JP",
        death_year=1972, gender="male", citizenships=["JP"],
        occupations=["Q6625963"], external_ids={"viaf": "108262269"},
    ),
    author(
        "wikidata", "Q18618", "George Orwell", 1903, "IN",
        death_year=1950, gender="male", citizenships=["GB"],
        occupations=["Q36180"],
        external_ids={"viaf": "97006051", "openlibrary": "OL118077A"},
    ),
    author(
        "wikidata", "Q99901001", "Helen Ashworth", 1920, "GB",
        death_year=2001, gender="female", citizenships=["GB"],
        occupations=["novelist"],
    ),
    # Rejected by the selection rules, in precedence order.
    author(
        "wikidata", "Q77777701", "Immanuel Kant", 1724, "DE",
        occupations=["philosopher"],
    ),
    author(
        "wikidata", "Q77777702", "Old Poet", 1700, "GB",
        occupations=["poet"],
    ),
    author(
        "wikidata", "Q77777703", "Nowhere Novelist", 1950, None,
        occupations=["novelist"],
    ),
    author(
        "wikidata", "Q77777704", "No Birth Year", None, "FR",
        occupations=["writer"],
    ),
    work(
        "wikidata", "QW1001", "De la grammatologie", "Q9199",
        readers_count=2, subjects=["philosophy"],
        editions=[edition("QE1001", year=1967, country="FR", language="fr",
                          publisher="Éditions de Minuit")],
    ),
    work("wikidata", "QW1002", "Glas", "Q9199"),
    work(
        "wikidata", "QW1003", "Ficciones", "Q909",
        readers_count=4, subjects=["short stories"],
        editions=[edition("QE1003", year=1944, country="AR", language="es",
                          publisher="Editorial Sur")],
    ),
    work("wikidata", "QW1004", "El Aleph", "Q909"),
    work(
        "wikidata", "QW1005", "Yukiguni", "Q132014",
        readers_count=3,
        editions=[edition("QE1005", year=1948, country="JP", language="ja",
                          publisher="Sōgensha")],
    ),
    work(
        "wikidata", "QW1006", "Nineteen Eighty-Four", "Q18618",
        readers_count=9, subjects=["dystopia"],
        editions=[edition("QE1006", year=1949, country="GB", language="en",
                          publisher="Secker & Warburg")],
    ),
    work("wikidata", "QW1007", "Two Silver Roubles", "Q4405658"),
    work("wikidata", "QW1008", "The Quiet Meadow", "Q99901001"),
]

OPENLIBRARY = [
    work(
        "openlibrary", "OLW2001", "Things Fall Apart", "OL25112A",
        avg_rating=3.9, ratings_count=321, subjects=["colonialism"],
        editions=[edition("OLE2001", year=1958, country="GB", language="en",
                          publisher="Heinemann")],
    ),
    work(
        "openlibrary", "OLW2002", "Arrow of God", "OL25112A",
        avg_rating=4.1, ratings_count=54,
        editions=[edition("OLE2002", year=1964, country="GB", language="en",
                          publisher="Heinemann")],
    ),
    work(
        "openlibrary", "OLW2003", "Cien años de soledad", "OL4586796A",
        avg_rating=4.2, ratings_count=800, subjects=["magical realism"],
        editions=[edition("OLE2003", year=1967, country="AR", language="es",
                          publisher="Editorial Sudamericana")],
    ),
    work("openlibrary", "OLW2004", "Del amor y otros demonios", "OL4586796A"),
    work(
        "openlibrary", "OLW2005", "Harry Potter and the Prisoner of Azkaban",
        "OL23919A",
        avg_rating=4.5, ratings_count=5600, subjects=["fantasy"],
        editions=[
            edition("OLE2005a", year=1999, country="GB", language="en",
                    publisher="Bloomsbury"),
            edition("OLE2005b", year=2003, country="IT", language="en",
                    publisher="Adriano Salani Editore"),
        ],
    ),
    work("openlibrary", "OLW2006", "Quidditch Through the Ages", "OL23919A"),
    work(
        "openlibrary", "OLW2007", "Snow Country", "OL117915A",
        avg_rating=4.1, ratings_count=145,
        editions=[edition("OLE2007", year=1957, country="US", language="en",
                          publisher="Knopf")],
    ),
    work(
        "openlibrary", "OLW2008", "Thousand Cranes", "OL117915A",
        avg_rating=3.9, ratings_count=98,
    ),
    work(
        "openlibrary", "OLW2009", "Beloved", "OL29049A",
        avg_rating=4.0, ratings_count=950, subjects=["slavery"],
        editions=[edition("OLE2009", year=1987, country="US", language="en",
                          publisher="Alfred A. Knopf")],
    ),
    work("openlibrary", "OLW2010", "Playing in the Dark", "OL29049A"),
]

GOODREADS = [
    work(
        "goodreads", "GRW3001", "Things Fall Apart", "37565",
        avg_rating=3.98, ratings_count=400000,
        subjects=["africa", "classics"],
        editions=[edition("GRE3001", year=1994, country="US", language="en",
                          publisher="Anchor Books")],
    ),
    work(
        "goodreads", "GRW3002", "No Longer at Ease", "37565",
        avg_rating=3.75, ratings_count=18000,
    ),
    work(
        "goodreads", "GRW3003", "Harry Potter e il Prigioniero di Azkaban",
        "1077326",
        avg_rating=4.57, ratings_count=3200, subjects=["fantasy"],
        editions=[edition(
            "GRE3003", year=1999, country="IT", language="it",
            publisher="Salani",
            contributors=[{"name": "Beatrice Masini", "role": "translator"}],
        )],
    ),
    work("goodreads", "GRW3004", "The Casual Vacancy", "1077326"),
    work(
        "goodreads", "GRW3005", "Midnight's Children", "3299",
        avg_rating=3.98, ratings_count=110000, subjects=["india"],
        editions=[edition("GRE3005", year=1981, language="en",
                          publisher="Jonathan Cape")],
    ),
    work("goodreads", "GRW3006", "Grimus", "3299"),
    work(
        "goodreads", "GRW3007", "Beloved", "3534",
        avg_rating=3.95, ratings_count=390000,
        subjects=["slavery", "classics"],
        editions=[edition("GRE3007", year=1987, country="US", language="en",
                          publisher="Knopf")],
    ),
    work(
        "goodreads", "GRW3008", "Song of Solomon", "3534",
        avg_rating=4.08, ratings_count=160000,
    ),
    work(
        "goodreads", "GRW3009", "Cien años de soledad", "13450",
        avg_rating=4.12, ratings_count=950000,
        editions=[edition("GRE3009", year=1970, country="ES", language="es",
                          publisher="Editorial Sudamericana")],
    ),
    work(
        "goodreads", "GRW3010", "A Collection of Moments", "618352",
        avg_rating=4.33, ratings_count=9,
        editions=[edition("GRE3010", year=1985, country="GB", language="en",
                          publisher="Longman")],
    ),
    work(
        "goodreads", "GRW3011", "Izlan", "1333214",
        avg_rating=4.5, ratings_count=12,
        editions=[edition("GRE3011", country="DZ", language="kab")],
    ),
    work("goodreads", "GRW3012", "Chansons berbères", "1333214"),
    # Author 424242 is never linked; exercises the unmatched counter.
    work(
        "goodreads", "GRW3013", "Stray Novel", "424242",
        avg_rating=3.5, ratings_count=5,
    ),
]

VIAF_ISBNS = [
    {"author_id": "Q132014", "isbns": [ISBN_KAWABATA_1, ISBN_KAWABATA_2]},
    {"author_id": "Q72334", "isbns": [ISBN_MORRISON_1, ISBN_MORRISON_2]},
    {"author_id": "Q99901001", "isbns": [ISBN_ASHWORTH_1]},
]


def write_jsonl(path: Path, records) -> None:
    with path.open("w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def search_body(docs) -> str:
    return json.dumps({"numFound": len(docs), "docs": docs})


def author_title_page(title: str) -> str:
    return (
        "<html><head><title>"
        + title
        + " | Goodreads</title></head><body></body></html>"
    )


def sitemap_body() -> str:
    slugs = [
        "37565.Chinua_Achebe",
        "1333214.Slimane_Azem",
        "1077326.J._K._Rowling",
        "3299.Salman_Rushdie",
        "13450." + quote("Gabriel_García_Márquez"),
        "618352.Esther_Polianowsky_Salaman",
        "111.John_Smith",
        "222.John_Smith",
        "444.Grace_Okafor",
    ]
    urls = "".join(
        "<url><loc>https://www.goodreads.com/author/show/%s</loc></url>" % s
        for s in slugs
    )
    return (
        '<?xml version="1.0" encoding="UTF-8"?>'
        '<urlset xmlns="http://www.sitemaps.org/schemas/sitemap/0.9">'
        + urls
        + "</urlset>"
    )


def record_cache() -> None:
    cache = HttpCache(CACHE)

    def put(endpoint, params, status, body):
        from urllib.parse import urlencode

        from litkg.connectors import request_key

        query = urlencode(sorted(params.items())) if params else ""
        cache.put(request_key(endpoint, query), endpoint, query, status, body)

    searches = {
        "Chinua Achebe": [{"key": "/authors/OL25112A",
                           "name": "Chinua Achebe",
                           "birth_date": "16 November 1930"}],
        "Jacques Derrida": [],
        "Slimane Azem": [],
        "Esther Salaman": [{"key": "/authors/OL5313A",
                            "name": "Esther Salaman",
                            "birth_date": "1900"}],
        "Gabriel García Márquez": [{"key": "/authors/OL4586796A",
                                    "name": "Gabriel García Márquez",
                                    "birth_date": "6 March 1927"}],
        "Toni Morrison": [{"key": "/authors/OL29049A",
                           "name": "Toni Morrison",
                           "birth_date": "1931"}],
        "Salman Rushdie": [{"key": "/authors/OL1392722A",
                            "name": "Salman Rushdie"}],
        "Jorge Luis Borges": [{"key": "/authors/OL114077A",
                               "name": "Jorge Luis Borges",
                               "birth_date": "1900"}],
        "J. K. Rowling": [{"key": "/authors/OL23919A",
                           "name": "J. K. Rowling",
                           "birth_date": "31 July 1965"}],
        "Yasunari Kawabata": [{"key": "/authors/OL999A",
                               "name": "Yasunari Kawabata"}],
        "Helen Ashworth": [],
    }
    for name, docs in searches.items():
        put(f"{OPENLIBRARY_BASE}/search/authors.json", {"q": name},
            200, search_body(docs))

    put(f"{OPENLIBRARY_BASE}/authors/OL118077A.json", {},
        200, json.dumps({"key": "/authors/OL118077A",
                         "name": "Eric Arthur Blair"}))
    put(f"{OPENLIBRARY_BASE}/authors/OL117915A.json", {},
        200, json.dumps({"key": "/authors/OL117915A",
                         "name": "Yasunari Kawabata"}))
    put(f"{OPENLIBRARY_BASE}/authors/OL29049A.json", {},
        200, json.dumps({"key": "/authors/OL29049A",
                         "name": "Toni Morrison"}))

    pages = {
        "618352": "Esther Polianowsky Salaman (Author of A Collection of Moments)",
        "500": "J.L. Borges (Author of Ficciones)",
        "3534": "Toni Morrison (Author of Beloved)",
        "99999": "Toni Morrison Estate (Author of Collected Letters)",
    }
    for gr_id, title in pages.items():
        put(f"{GOODREADS_BASE}/author/show/{gr_id}", {},
            200, author_title_page(title))

    put(SITEMAP_URL, {}, 200, sitemap_body())

    ol_isbn = {
        ISBN_KAWABATA_1: (200, json.dumps(
            {"title": "Snow Country",
             "authors": [{"key": "/authors/OL117915A"}]})),
        ISBN_KAWABATA_2: (200, json.dumps(
            {"title": "Thousand Cranes",
             "authors": [{"key": "/authors/OL117915A"}]})),
        ISBN_MORRISON_1: (200, json.dumps(
            {"title": "Beloved",
             "authors": [{"key": "/authors/OL29049A"}]})),
        ISBN_MORRISON_2: (404, json.dumps({"error": "notfound"})),
        ISBN_ASHWORTH_1: (404, json.dumps({"error": "notfound"})),
    }
    for isbn, (status, body) in ol_isbn.items():
        put(f"{OPENLIBRARY_BASE}/isbn/{isbn}.json", {}, status, body)

    gr_isbn = {
        ISBN_KAWABATA_1: (404, "<html>not found</html>"),
        ISBN_KAWABATA_2: (404, "<html>not found</html>"),
        ISBN_MORRISON_1: (200, '<html><body><a href="/author/show/3534.'
                               'Toni_Morrison">Toni Morrison</a></body></html>'),
        ISBN_MORRISON_2: (200, '<html><body><a href="/author/show/99999.'
                               'Toni_Morrison_Estate">Toni Morrison Estate</a>'
                               "</body></html>"),
        ISBN_ASHWORTH_1: (404, "<html>not found</html>"),
    }
    for isbn, (status, body) in gr_isbn.items():
        put(f"{GOODREADS_BASE}/book/isbn/{isbn}", {}, status, body)


def main() -> None:
    if CACHE.exists():
        shutil.rmtree(CACHE)
    DUMPS.mkdir(parents=True, exist_ok=True)
    CACHE.mkdir(parents=True)

    write_jsonl(DUMPS / "wikidata.jsonl", WIKIDATA)
    write_jsonl(DUMPS / "openlibrary.jsonl", OPENLIBRARY)
    write_jsonl(DUMPS / "goodreads.jsonl", GOODREADS)
    write_jsonl(DUMPS / "viaf_isbns.jsonl", VIAF_ISBNS)
    record_cache()
    print("fixture written to", FIXTURE)


if __name__ == "__main__":
    main()
