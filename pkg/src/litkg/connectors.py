"""Remote source access with a record/replay cache.

Every outward request is keyed by SHA-256 of its endpoint plus a
whitespace-normalized query text. Three modes, chosen by the
``LITKG_HTTP_MODE`` environment variable or per client:

- ``live``: always fetch, never touch the cache
- ``record`` (default): serve from the cache, fetch and store misses
- ``replay``: cache only; a miss is an error (fully offline)

Live traffic is throttled to one request per second per host and
retried with exponential backoff on transient failures.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import re
import time
import xml.etree.ElementTree as ET
from pathlib import Path
from urllib.parse import unquote, urlencode, urlsplit

import requests

from .errors import CacheMissError, ConfigError, ConnectorError

log = logging.getLogger(__name__)

MODES = ("live", "record", "replay")
MODE_ENV_VAR = "LITKG_HTTP_MODE"

WIKIDATA_SPARQL = "https://query.wikidata.org/sparql"
OPENLIBRARY_BASE = "https://openlibrary.org"
GOODREADS_BASE = "https://www.goodreads.com"

_RETRY_STATUSES = {429, 500, 502, 503, 504}
_WS = re.compile(r"\s+")


def normalize_query(query: str) -> str:
    """Collapse whitespace runs so formatting changes don't split the cache."""
    return _WS.sub(" ", query).strip()


def request_key(endpoint: str, query: str) -> str:
    digest = hashlib.sha256()
    digest.update(endpoint.encode("utf-8"))
    digest.update(b"\n")
    digest.update(normalize_query(query).encode("utf-8"))
    return digest.hexdigest()


class HttpCache:
    """One directory: an ``index.json`` plus one content file per request."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.index_path = self.directory / "index.json"
        self._index: dict[str, dict] | None = None

    def _load(self) -> dict[str, dict]:
        if self._index is None:
            if self.index_path.exists():
                self._index = json.loads(self.index_path.read_text("utf-8"))
            else:
                self._index = {}
        return self._index

    def get(self, key: str) -> tuple[int, str] | None:
        entry = self._load().get(key)
        if entry is None:
            return None
        payload = json.loads((self.directory / entry["file"]).read_text("utf-8"))
        return payload["status"], payload["body"]

    def put(self, key: str, endpoint: str, query: str, status: int, body: str) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        index = self._load()
        filename = f"{key}.json"
        (self.directory / filename).write_text(
            json.dumps({"status": status, "body": body}, ensure_ascii=False), "utf-8"
        )
        index[key] = {"endpoint": endpoint, "query": normalize_query(query), "file": filename}
        tmp = self.index_path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(index, ensure_ascii=False, indent=2, sort_keys=True), "utf-8")
        tmp.replace(self.index_path)


class HttpClient:
    """Cached, throttled, retrying GET client for the source connectors."""

    def __init__(
        self,
        cache_dir: str | Path | None = None,
        mode: str | None = None,
        session: requests.Session | None = None,
        requests_per_second: float = 1.0,
        max_attempts: int = 5,
        backoff_base: float = 1.0,
        timeout: float = 30.0,
        sleep=time.sleep,
    ):
        self.mode = mode or os.environ.get(MODE_ENV_VAR, "record")
        if self.mode not in MODES:
            raise ConfigError(f"http mode must be one of {MODES}, got {self.mode!r}")
        self.cache = HttpCache(cache_dir) if cache_dir is not None else None
        if self.mode != "live" and self.cache is None:
            raise ConfigError(f"http mode {self.mode!r} needs a cache directory")
        self.session = session or requests.Session()
        self.min_interval = 1.0 / requests_per_second if requests_per_second > 0 else 0.0
        self.max_attempts = max_attempts
        self.backoff_base = backoff_base
        self.timeout = timeout
        self._sleep = sleep
        self._last_request: dict[str, float] = {}

    def _throttle(self, endpoint: str) -> None:
        host = urlsplit(endpoint).netloc
        now = time.monotonic()
        last = self._last_request.get(host)
        if last is not None:
            wait = self.min_interval - (now - last)
            if wait > 0:
                self._sleep(wait)
        self._last_request[host] = time.monotonic()

    def _fetch(self, endpoint: str, params: dict | None) -> tuple[int, str]:
        delay = self.backoff_base
        for attempt in range(1, self.max_attempts + 1):
            try:
                self._throttle(endpoint)
                response = self.session.get(endpoint, params=params, timeout=self.timeout)
                if response.status_code in _RETRY_STATUSES:
                    raise ConnectorError(f"status {response.status_code}")
                return response.status_code, response.text
            except (requests.RequestException, ConnectorError) as exc:
                if attempt == self.max_attempts:
                    raise ConnectorError(
                        f"GET {endpoint} failed after {attempt} attempts: {exc}"
                    ) from exc
                log.warning("GET %s attempt %d failed (%s); backing off %.1fs", endpoint, attempt, exc, delay)
                self._sleep(delay)
                delay *= 2
        raise ConnectorError("unreachable")

    def get(self, endpoint: str, params: dict | None = None, query_text: str | None = None) -> tuple[int, str]:
        """GET returning (status, body). ``query_text`` overrides the
        cache identity when params don't capture it (SPARQL).
        """
        if query_text is None:
            query_text = urlencode(sorted((params or {}).items()))
        key = request_key(endpoint, query_text)
        if self.mode in ("record", "replay") and self.cache is not None:
            hit = self.cache.get(key)
            if hit is not None:
                return hit
            if self.mode == "replay":
                raise CacheMissError(
                    f"no recording for GET {endpoint} with query {normalize_query(query_text)!r}"
                )
        status, body = self._fetch(endpoint, params)
        if self.mode == "record" and self.cache is not None:
            self.cache.put(key, endpoint, query_text, status, body)
        return status, body


def sparql_select(
    client: HttpClient, query: str, endpoint: str = WIKIDATA_SPARQL, page_size: int = 500
) -> list[dict[str, str]]:
    """Run a SELECT with transparent LIMIT/OFFSET paging.

    Pages are requested until one comes back shorter than the page
    size; each page is its own cache entry. Returns binding rows as
    plain {variable: value} dicts.
    """
    if page_size < 1:
        raise ConfigError(f"page size must be positive, got {page_size}")
    rows: list[dict[str, str]] = []
    offset = 0
    while True:
        paged = f"{query} LIMIT {page_size} OFFSET {offset}"
        status, body = client.get(
            endpoint, params={"query": paged, "format": "json"}, query_text=paged
        )
        if status != 200:
            raise ConnectorError(f"SPARQL endpoint returned status {status}")
        try:
            payload = json.loads(body)
            bindings = payload["results"]["bindings"]
        except (json.JSONDecodeError, KeyError) as exc:
            raise ConnectorError(f"malformed SPARQL response: {exc}") from exc
        for binding in bindings:
            rows.append({var: cell.get("value", "") for var, cell in binding.items()})
        if len(bindings) < page_size:
            return rows
        offset += page_size


_YEAR = re.compile(r"\b(\d{4})\b")


def _year_from(text: str | None) -> int | None:
    if not text:
        return None
    m = _YEAR.search(text)
    return int(m.group(1)) if m else None


def openlibrary_author_search(
    client: HttpClient, name: str, base: str = OPENLIBRARY_BASE
) -> list[tuple[str, str, int | None]]:
    """Author search: (author_id, display name, birth year if stated)."""
    status, body = client.get(f"{base}/search/authors.json", params={"q": name})
    if status != 200:
        raise ConnectorError(f"author search returned status {status}")
    try:
        docs = json.loads(body).get("docs", [])
    except json.JSONDecodeError as exc:
        raise ConnectorError(f"malformed author search response: {exc}") from exc
    out = []
    for doc in docs:
        key = (doc.get("key") or "").rsplit("/", 1)[-1]
        if not key or not doc.get("name"):
            continue
        out.append((key, doc["name"], _year_from(doc.get("birth_date"))))
    return out


def openlibrary_author_get(client: HttpClient, author_id: str, base: str = OPENLIBRARY_BASE) -> str | None:
    """Display name for an author id; None when the id does not resolve."""
    status, body = client.get(f"{base}/authors/{author_id}.json", params={})
    if status == 404:
        return None
    if status != 200:
        raise ConnectorError(f"author lookup returned status {status}")
    try:
        return json.loads(body).get("name")
    except json.JSONDecodeError as exc:
        raise ConnectorError(f"malformed author record: {exc}") from exc


def sitemap_author_names(client: HttpClient, url: str) -> list[tuple[str, str]]:
    """Author (id, name) pairs from a sitemap of author page URLs.

    The trailing path segment has the form ``{id}.{Name_with_underscores}``;
    underscores read as spaces and percent-escapes are decoded.
    """
    status, body = client.get(url, params={})
    if status != 200:
        raise ConnectorError(f"sitemap fetch returned status {status}")
    try:
        root = ET.fromstring(body)
    except ET.ParseError as exc:
        raise ConnectorError(f"malformed sitemap XML: {exc}") from exc
    out = []
    for element in root.iter():
        if not element.tag.endswith("loc") or not (element.text or "").strip():
            continue
        slug = urlsplit(element.text.strip()).path.rsplit("/", 1)[-1]
        entry_id, sep, raw_name = slug.partition(".")
        if not sep or not entry_id or not raw_name:
            continue
        out.append((entry_id, unquote(raw_name).replace("_", " ")))
    return out


_TITLE = re.compile(r"<title>(.*?)</title>", re.IGNORECASE | re.DOTALL)


def goodreads_author_name(client: HttpClient, author_id: str, base: str = GOODREADS_BASE) -> str | None:
    """Scrape the display name from an author page title; None on a miss."""
    status, body = client.get(f"{base}/author/show/{author_id}", params={})
    if status == 404:
        return None
    if status != 200:
        raise ConnectorError(f"author page returned status {status}")
    m = _TITLE.search(body)
    if not m:
        return None
    title = m.group(1).strip()
    for marker in (" (Author of", " | Goodreads"):
        if marker in title:
            title = title.split(marker, 1)[0].strip()
    return title or None


_AUTHOR_LINK = re.compile(r"/author/show/(\d+)")


def isbn_lookup(client: HttpClient, target: str, isbn: str) -> str | None:
    """Resolve an ISBN-13 to a platform author id, if the platform knows it."""
    if target == "openlibrary":
        status, body = client.get(f"{OPENLIBRARY_BASE}/isbn/{isbn}.json", params={})
        if status == 404:
            return None
        if status != 200:
            raise ConnectorError(f"isbn lookup returned status {status}")
        try:
            authors = json.loads(body).get("authors") or []
        except json.JSONDecodeError as exc:
            raise ConnectorError(f"malformed isbn record: {exc}") from exc
        for author in authors:
            key = (author.get("key") or "").rsplit("/", 1)[-1]
            if key:
                return key
        return None
    if target == "goodreads":
        status, body = client.get(f"{GOODREADS_BASE}/book/isbn/{isbn}", params={})
        if status == 404:
            return None
        if status != 200:
            raise ConnectorError(f"isbn page returned status {status}")
        m = _AUTHOR_LINK.search(body)
        return m.group(1) if m else None
    raise ConfigError(f"isbn lookup target must be openlibrary or goodreads, got {target!r}")
