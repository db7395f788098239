"""Query service over the reference graph."""
from urllib.parse import quote

import pytest
from fastapi.testclient import TestClient

from conftest import GOLDENS
from litkg.config import Config
from litkg.service.app import create_app
from litkg.store import GraphStore

DERRIDA = "http://litkg.example/author/wikidata/Q9199"
ROWLING = "http://litkg.example/author/wikidata/Q34660"
WORK_WITH_EVENT = "http://litkg.example/work/goodreads/GRW3001"
EVENT = "_:pub-wikidata-QE1001"


def entity_path(iri: str) -> str:
    # the IRI goes into the path percent-encoded as one segment
    return f"/api/entity/{quote(iri, safe='')}"


@pytest.fixture(scope="module")
def store():
    return GraphStore.load(GOLDENS / "graph.nt")


@pytest.fixture(scope="module")
def client(store):
    return TestClient(create_app(store))


class TestRoot:
    def test_endpoint_listing(self, client):
        body = client.get("/").json()
        assert "/api/search" in body["endpoints"]
        assert "/api/browse" in body["endpoints"]


class TestSearch:
    def test_exact_hit(self, client):
        body = client.get("/api/search", params={"q": "Jacques Derrida"}).json()
        assert body["count"] == 1
        hit = body["results"][0]
        assert hit["iri"] == DERRIDA
        assert hit["label"] == "Jacques Derrida"
        assert hit["types"] == ["prov:Person"]

    def test_substring_hit(self, client):
        body = client.get("/api/search", params={"q": "derrida"}).json()
        assert [h["iri"] for h in body["results"]] == [DERRIDA]

    def test_type_filter(self, client):
        body = client.get(
            "/api/search", params={"q": "the", "type": "Expression"}
        ).json()
        assert body["results"]
        for hit in body["results"]:
            assert hit["types"] == ["frbr:Expression"]

    def test_missing_query_is_400(self, client):
        assert client.get("/api/search").status_code == 400
        assert client.get("/api/search", params={"q": "  "}).status_code == 400

    def test_unknown_type_is_400(self, client):
        r = client.get("/api/search", params={"q": "x", "type": "Novel"})
        assert r.status_code == 400

    def test_limit_bounds(self, client):
        assert client.get("/api/search", params={"q": "a", "limit": 0}).status_code == 400
        assert client.get("/api/search", params={"q": "a", "limit": 501}).status_code == 400


class TestEntity:
    def test_author_view(self, client):
        body = client.get(entity_path(DERRIDA)).json()
        assert body["labels"] == ["Jacques Derrida"]
        assert body["types"] == ["prov:Person"]
        assert body["source"] == {"source": "wikidata", "source_id": "Q9199", "kind": "author"}
        literals = {(l["predicate"], l["value"]) for l in body["literals"]}
        assert ("urw:birthYear", "1930") in literals
        assert ("urw:birthCountry", "DZ") in literals
        assert ("urw:citizenship", "FR") in literals
        assert ("dul:hasRole", "Transnational") in literals

    def test_derived_literals_are_flagged(self, client):
        body = client.get(entity_path(WORK_WITH_EVENT)).json()
        by_pred = {}
        for row in body["literals"]:
            by_pred.setdefault(row["predicate"], row)
        assert by_pred["urb:publicationYear"]["derived"] is True
        assert by_pred["urb:rated"]["derived"] is False

    def test_local_node_view(self, client):
        body = client.get(f"/api/entity/{EVENT}").json()
        assert body["types"] == ["urb:Publication"]
        assert body["source"] is None
        literals = {(l["predicate"], l["value"]) for l in body["literals"]}
        assert ("urb:year", "1967") in literals
        assert ("urb:country", "FR") in literals

    def test_percent_encoded_iri(self, client):
        # the test client decodes the path twice (a real ASGI server
        # decodes once), so escapes inside the IRI need an extra layer
        iri = "http://litkg.example/subject/magical%20realism"
        body = client.get(f"/api/entity/{quote(quote(iri, safe=''), safe='')}").json()
        assert body["labels"] == ["magical realism"]
        assert body["types"] == ["urb:Folksonomy"]

    def test_unknown_entity_is_404(self, client):
        r = client.get(entity_path("http://litkg.example/author/wikidata/Q404404"))
        assert r.status_code == 404

    def test_invalid_iri_is_400(self, client):
        assert client.get("/api/entity/not-an-iri").status_code == 400
        assert client.get(entity_path("_:bad id")).status_code == 400


class TestNeighbors:
    def test_default_both_directions(self, client):
        body = client.get(entity_path(DERRIDA) + "/neighbors").json()
        assert body["total"] == 2
        edges = {(e["direction"], e["predicate"], e["other"]) for e in body["edges"]}
        assert ("in", "prov:wasAttributedTo",
                "http://litkg.example/work/wikidata/QW1001") in edges
        assert ("out", "urw:wikipediaPage",
                "https://en.wikipedia.org/wiki/Jacques_Derrida") in edges

    def test_edges_carry_labels(self, client):
        body = client.get(entity_path(DERRIDA) + "/neighbors").json()
        labeled = {e["other"]: e["other_label"] for e in body["edges"]}
        assert labeled["http://litkg.example/work/wikidata/QW1001"] == "De la grammatologie"

    def test_type_assertions_never_appear(self, client):
        body = client.get(entity_path(DERRIDA) + "/neighbors").json()
        assert all(e["predicate"] != "rdf:type" for e in body["edges"])
        assert all(c["predicate"] != "rdf:type" for c in body["counts"])

    def test_direction_filter(self, client):
        body = client.get(
            entity_path(DERRIDA) + "/neighbors", params={"direction": "in"}
        ).json()
        assert body["total"] == 1
        assert body["edges"][0]["direction"] == "in"

    def test_predicate_filter_short_and_full(self, client):
        short = client.get(
            entity_path(DERRIDA) + "/neighbors", params={"predicate": "wasAttributedTo"}
        ).json()
        full = client.get(
            entity_path(DERRIDA) + "/neighbors",
            params={"predicate": "http://www.w3.org/ns/prov#wasAttributedTo"},
        ).json()
        assert short["edges"] == full["edges"]
        assert short["total"] == 1

    def test_pagination_keeps_counts(self, client):
        first = client.get(
            entity_path(DERRIDA) + "/neighbors", params={"limit": 1}
        ).json()
        second = client.get(
            entity_path(DERRIDA) + "/neighbors", params={"limit": 1, "offset": 1}
        ).json()
        assert first["total"] == second["total"] == 2
        assert len(first["edges"]) == len(second["edges"]) == 1
        assert first["edges"] != second["edges"]
        # the per-predicate counts describe the whole neighborhood
        assert first["counts"] == second["counts"]

    def test_parameter_validation(self, client):
        path = entity_path(DERRIDA) + "/neighbors"
        assert client.get(path, params={"direction": "sideways"}).status_code == 400
        assert client.get(path, params={"predicate": "notAThing"}).status_code == 400
        assert client.get(path, params={"limit": 0}).status_code == 400
        assert client.get(path, params={"offset": -1}).status_code == 400


class TestPlaces:
    def test_countries_ranked_by_expressions(self, client):
        body = client.get(entity_path(ROWLING) + "/places").json()
        assert body["places"] == [
            {"country": "IT", "expressions": 2},
            {"country": "GB", "expressions": 1},
        ]

    def test_local_nodes_have_no_places(self, client):
        body = client.get(f"/api/entity/{EVENT}/places").json()
        assert body["places"] == []

    def test_missing_entity_404(self, client):
        r = client.get(entity_path("http://litkg.example/author/wikidata/Q0") + "/places")
        assert r.status_code == 404


class TestStats:
    def test_matches_store_report(self, client, store):
        body = client.get("/api/stats").json()
        assert body == store.stats("http://litkg.example/").to_dict()
        assert body["total_authors"] == 12

    def test_known_rows(self, client):
        body = client.get("/api/stats").json()
        ids = {row["namespace"]: row for row in body["identifiers"]}
        assert ids["viafId"]["authors"] == 11
        assert ids["viafId"]["percent"] == 91.7
        sources = {row["source"]: row for row in body["sources"]}
        assert sources["goodreads"]["works"] == 9
        assert sources["goodreads"]["avg_rating"] == "4.14"
        roles = {row["role"]: row for row in body["roles"]}
        assert roles["Transnational"]["authors"] == 7


class TestBrowse:
    def test_role_value_counts(self, client):
        body = client.get("/api/browse", params={"facet": "role"}).json()
        assert body["values"] == [
            {"value": "publisher", "count": 17},
            {"value": "Transnational", "count": 7},
            {"value": "translator", "count": 1},
        ]

    def test_role_members(self, client):
        body = client.get(
            "/api/browse", params={"facet": "role", "value": "Transnational"}
        ).json()
        assert body["total"] == 7
        assert DERRIDA in [e["iri"] for e in body["entities"]]

    def test_birth_country_counts(self, client):
        body = client.get("/api/browse", params={"facet": "birth_country"}).json()
        assert body["total"] == 9
        assert body["values"][:3] == [
            {"value": "DZ", "count": 2},
            {"value": "GB", "count": 2},
            {"value": "IN", "count": 2},
        ]

    def test_citizenship_members_sorted(self, client):
        body = client.get(
            "/api/browse", params={"facet": "citizenship", "value": "FR"}
        ).json()
        assert [e["iri"] for e in body["entities"]] == [
            "http://litkg.example/author/wikidata/Q3487036",
            DERRIDA,
        ]

    def test_subject_values(self, client):
        body = client.get("/api/browse", params={"facet": "subject"}).json()
        assert body["total"] == 10
        assert body["values"][:3] == [
            {"value": "classics", "count": 2},
            {"value": "fantasy", "count": 2},
            {"value": "slavery", "count": 2},
        ]

    def test_subject_members(self, client):
        body = client.get(
            "/api/browse", params={"facet": "subject", "value": "classics"}
        ).json()
        assert body["total"] == 2
        assert all(e["iri"].startswith("http://litkg.example/work/") for e in body["entities"])

    def test_value_pagination(self, client):
        body = client.get(
            "/api/browse", params={"facet": "birth_country", "limit": 3, "offset": 3}
        ).json()
        assert body["total"] == 9
        assert len(body["values"]) == 3
        assert all(v["count"] == 1 for v in body["values"])

    def test_unknown_facet_is_400(self, client):
        assert client.get("/api/browse", params={"facet": "height"}).status_code == 400

    def test_missing_facet_is_validation_error(self, client):
        assert client.get("/api/browse").status_code == 422

    def test_bad_limit_is_400(self, client):
        r = client.get("/api/browse", params={"facet": "role", "limit": 0})
        assert r.status_code == 400


class TestDeterminism:
    @pytest.mark.parametrize(
        "path",
        [
            "/api/stats",
            "/api/search?q=the",
            "/api/browse?facet=role",
            entity_path(DERRIDA),
            entity_path(DERRIDA) + "/neighbors",
        ],
    )
    def test_responses_are_byte_stable(self, client, path):
        assert client.get(path).content == client.get(path).content


class TestUiMount:
    def test_static_bundle_served_when_configured(self, store, tmp_path):
        ui = tmp_path / "dist"
        ui.mkdir()
        (ui / "index.html").write_text("<!doctype html><title>board</title>", "utf-8")
        app = create_app(store, Config(ui_dir=ui))
        client = TestClient(app)
        r = client.get("/")
        assert r.status_code == 200
        assert "board" in r.text
        # the API keeps working alongside the mount
        assert client.get("/api/stats").status_code == 200

    def test_cors_headers_when_configured(self, store):
        app = create_app(store, Config(cors_origins=["http://localhost:5173"]))
        client = TestClient(app)
        r = client.get("/api/stats", headers={"Origin": "http://localhost:5173"})
        assert r.headers.get("access-control-allow-origin") == "http://localhost:5173"
