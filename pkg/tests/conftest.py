from pathlib import Path

import pytest

from litkg.config import Config

FIXTURE = Path(__file__).parent / "fixture1"
GOLDENS = FIXTURE / "goldens"


@pytest.fixture
def fixture_dir() -> Path:
    return FIXTURE


@pytest.fixture
def goldens_dir() -> Path:
    return GOLDENS


@pytest.fixture
def fixture_config(tmp_path) -> Config:
    """Config wired to the bundled corpus, writing into a temp dir."""
    return Config(
        wikidata_dump=FIXTURE / "dumps" / "wikidata.jsonl",
        openlibrary_dump=FIXTURE / "dumps" / "openlibrary.jsonl",
        goodreads_dump=FIXTURE / "dumps" / "goodreads.jsonl",
        viaf_isbns=FIXTURE / "dumps" / "viaf_isbns.jsonl",
        cache_dir=FIXTURE / "cache",
        out_dir=tmp_path / "out",
    )


def write_fixture_yaml(tmp_path: Path) -> Path:
    """A litkg.yaml pointing at the bundled corpus, for CLI runs."""
    out = tmp_path / "out"
    text = "\n".join(
        [
            f"wikidata_dump: {FIXTURE / 'dumps' / 'wikidata.jsonl'}",
            f"openlibrary_dump: {FIXTURE / 'dumps' / 'openlibrary.jsonl'}",
            f"goodreads_dump: {FIXTURE / 'dumps' / 'goodreads.jsonl'}",
            f"viaf_isbns: {FIXTURE / 'dumps' / 'viaf_isbns.jsonl'}",
            f"cache_dir: {FIXTURE / 'cache'}",
            f"out_dir: {out}",
            "",
        ]
    )
    path = tmp_path / "litkg.yaml"
    path.write_text(text, "utf-8")
    return path
