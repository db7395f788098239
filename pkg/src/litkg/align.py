"""Author alignment: name similarity, linking heuristics, and QA sampling.

Similarity is the gestalt pattern ratio: twice the total matched length
over the summed lengths, where the matched length comes from recursively
taking the longest common block and matching the pieces on each side.
No junk or popularity heuristics are applied, lengths count Unicode
scalar values, and two empty strings count as identical.
"""
from __future__ import annotations

import csv
import logging
import random
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .errors import ConfigError, QaValidationError
from .ingest import normalize_name

log = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 0.7

PREEXISTING_LINK = "preexisting_link"
EXACT_NAME_BIRTHYEAR = "exact_name_birthyear"
SITEMAP_NAME_MATCH = "sitemap_name_match"
ISBN_BRIDGE = "isbn_bridge"
HEURISTICS = (PREEXISTING_LINK, EXACT_NAME_BIRTHYEAR, SITEMAP_NAME_MATCH, ISBN_BRIDGE)

QA_BUCKETS = tuple((i / 10, (i + 1) / 10) for i in range(7))
QA_BUCKET_SIZE = 100


def _find_longest_block(
    a: str, b: str, alo: int, ahi: int, blo: int, bhi: int, b2j: dict[str, list[int]]
) -> tuple[int, int, int]:
    """Longest common block within a[alo:ahi] x b[blo:bhi].

    Among equally long blocks the one starting earliest in ``a`` wins,
    then earliest in ``b``: the scan visits rows in ascending ``i`` and
    positions in ascending ``j``, and only a strictly longer block may
    displace the current best.
    """
    besti, bestj, bestsize = alo, blo, 0
    lengths: dict[int, int] = {}
    for i in range(alo, ahi):
        row: dict[int, int] = {}
        for j in b2j.get(a[i], ()):
            if j < blo:
                continue
            if j >= bhi:
                break
            size = row[j] = lengths.get(j - 1, 0) + 1
            if size > bestsize:
                besti, bestj, bestsize = i - size + 1, j - size + 1, size
        lengths = row
    return besti, bestj, bestsize


def matched_length(a: str, b: str) -> int:
    """Total length matched by the recursive longest-block decomposition."""
    b2j: dict[str, list[int]] = {}
    for j, ch in enumerate(b):
        b2j.setdefault(ch, []).append(j)
    total = 0
    pending = [(0, len(a), 0, len(b))]
    while pending:
        alo, ahi, blo, bhi = pending.pop()
        if alo >= ahi or blo >= bhi:
            continue
        i, j, size = _find_longest_block(a, b, alo, ahi, blo, bhi, b2j)
        if size:
            total += size
            pending.append((alo, i, blo, j))
            pending.append((i + size, ahi, j + size, bhi))
    return total


def gestalt_similarity(a: str, b: str) -> float:
    """Similarity in [0, 1]; both strings empty counts as a perfect match."""
    if not a and not b:
        return 1.0
    return 2.0 * matched_length(a, b) / (len(a) + len(b))


@dataclass(frozen=True)
class NameRef:
    """One side of a candidate link: a named author on one source."""

    source: str
    source_id: str
    name: str


@dataclass(frozen=True)
class AlignmentCandidate:
    left: NameRef  # knowledge-graph side (wikidata author)
    right: NameRef  # platform side
    similarity: float
    heuristic: str
    accepted: bool = False

    def __post_init__(self):
        if self.heuristic not in HEURISTICS:
            raise ConfigError(f"unknown alignment heuristic: {self.heuristic!r}")


def _kg_ref(author) -> "NameRef":
    return NameRef("wikidata", author.source_id, normalize_name(author.name))


def _candidate(author, source: str, source_id: str, name: str, heuristic: str) -> AlignmentCandidate:
    left = _kg_ref(author)
    right = NameRef(source, source_id, normalize_name(name))
    return AlignmentCandidate(
        left=left,
        right=right,
        similarity=gestalt_similarity(left.name, right.name),
        heuristic=heuristic,
    )


def preexisting_link_candidates(
    kg_authors: Iterable, target: str, name_of: Callable[[str], str | None]
) -> list[AlignmentCandidate]:
    """Score the target-platform ids the source dump already asserts.

    ``name_of`` resolves a platform id to a display name; links whose
    name cannot be resolved are skipped with a warning since there is
    nothing to score.
    """
    out = []
    for author in kg_authors:
        ext_id = author.external_ids.get(target)
        if not ext_id:
            continue
        name = name_of(ext_id)
        if name is None:
            log.warning("no display name for preexisting %s id %s; link skipped", target, ext_id)
            continue
        out.append(_candidate(author, target, ext_id, name, PREEXISTING_LINK))
    return out


def exact_match_candidates(
    kg_authors: Iterable, target: str, search_hits: dict[str, list[tuple[str, str, int | None]]]
) -> list[AlignmentCandidate]:
    """Link on byte-identical normalized names plus equal birth years.

    ``search_hits`` maps a knowledge-graph author id to that author's
    platform search results as (platform_id, name, birth_year) rows. A
    hit without a birth year never becomes a candidate.
    """
    out = []
    for author in kg_authors:
        if author.birth_year is None:
            continue
        kg_name = normalize_name(author.name)
        for hit_id, hit_name, hit_year in search_hits.get(author.source_id, []):
            if hit_year is None or hit_year != author.birth_year:
                continue
            if normalize_name(hit_name) != kg_name:
                continue
            out.append(_candidate(author, target, hit_id, hit_name, EXACT_NAME_BIRTHYEAR))
    return out


def sitemap_match_candidates(
    kg_authors: Iterable, target: str, entries: Sequence[tuple[str, str]]
) -> list[AlignmentCandidate]:
    """Link on names that are unique in the platform's sitemap.

    Names occurring more than once in the sitemap are homonyms and are
    dropped entirely; remaining names match by normalized equality.
    """
    counts: dict[str, int] = {}
    for _, name in entries:
        key = normalize_name(name)
        counts[key] = counts.get(key, 0) + 1
    unique = {}
    for entry_id, name in entries:
        key = normalize_name(name)
        if counts[key] == 1:
            unique[key] = (entry_id, name)
    out = []
    for author in kg_authors:
        hit = unique.get(normalize_name(author.name))
        if hit:
            out.append(_candidate(author, target, hit[0], hit[1], SITEMAP_NAME_MATCH))
    return out


def isbn_bridge_candidates(
    kg_authors: Iterable,
    target: str,
    isbns_of: dict[str, list[str]],
    lookup: Callable[[str], str | None],
    name_of: Callable[[str], str | None],
) -> list[AlignmentCandidate]:
    """Link through ISBNs: an authority-file ISBN list is resolved to
    platform author ids; every distinct id becomes one scored candidate.
    """
    out = []
    for author in kg_authors:
        found: set[str] = set()
        for isbn in isbns_of.get(author.source_id, []):
            hit = lookup(isbn)
            if hit:
                found.add(hit)
        for platform_id in sorted(found):
            name = name_of(platform_id)
            if name is None:
                log.warning("isbn bridge hit %s:%s has no display name; skipped", target, platform_id)
                continue
            out.append(_candidate(author, target, platform_id, name, ISBN_BRIDGE))
    return out


def apply_threshold(
    candidates: Iterable[AlignmentCandidate], threshold: float = DEFAULT_THRESHOLD
) -> list[AlignmentCandidate]:
    """Mark candidates accepted.

    A candidate is accepted when its similarity reaches the threshold
    (inclusive); exact name-and-birth-year candidates are accepted
    regardless of score.
    """
    if not (0.0 <= threshold <= 1.0):
        raise ConfigError(f"similarity threshold must be within [0, 1], got {threshold}")
    out = []
    for cand in candidates:
        accepted = cand.heuristic == EXACT_NAME_BIRTHYEAR or cand.similarity >= threshold
        out.append(replace(cand, accepted=accepted))
    return out


def resolve_conflicts(candidates: Sequence[AlignmentCandidate]) -> list[AlignmentCandidate]:
    """Keep at most one accepted link per (author, platform).

    The highest similarity wins; ties go to the lexicographically
    smallest platform id, then to the earliest heuristic in the fixed
    heuristic order. Losing candidates stay in the list unaccepted.
    """
    groups: dict[tuple[str, str], list[AlignmentCandidate]] = {}
    for cand in candidates:
        if cand.accepted:
            key = (cand.left.source_id, cand.right.source)
            groups.setdefault(key, []).append(cand)
    winners = set()
    for key, group in groups.items():
        best = sorted(
            group,
            key=lambda c: (-c.similarity, c.right.source_id, HEURISTICS.index(c.heuristic)),
        )[0]
        winners.add((best.left.source_id, best.right.source, best.right.source_id, best.heuristic))
    out = []
    for cand in candidates:
        if cand.accepted:
            key = (cand.left.source_id, cand.right.source, cand.right.source_id, cand.heuristic)
            out.append(replace(cand, accepted=key in winners))
        else:
            out.append(cand)
    return out


def accepted_links(candidates: Iterable[AlignmentCandidate]) -> dict[str, dict[str, str]]:
    """Collapse accepted candidates to {author_id: {platform: platform_id}}."""
    links: dict[str, dict[str, str]] = {}
    for cand in candidates:
        if cand.accepted:
            links.setdefault(cand.left.source_id, {})[cand.right.source] = cand.right.source_id
    return links


_CSV_FIELDS = (
    "bucket",
    "left_source",
    "left_id",
    "left_name",
    "right_source",
    "right_id",
    "right_name",
    "similarity",
    "heuristic",
    "correct",
)


@dataclass(frozen=True)
class QaRow:
    bucket: tuple[float, float]
    candidate: AlignmentCandidate
    correct: str = ""  # "", "yes", or "no"


def _bucket_of(similarity: float) -> tuple[float, float] | None:
    if similarity >= QA_BUCKETS[-1][1]:
        return None
    index = min(int(similarity * 10), len(QA_BUCKETS) - 1)
    low, high = QA_BUCKETS[index]
    # guard against float edge cases straddling a boundary
    if similarity < low:
        index -= 1
    elif similarity >= high:
        index += 1
    if 0 <= index < len(QA_BUCKETS):
        return QA_BUCKETS[index]
    return None


def qa_sample(
    candidates: Sequence[AlignmentCandidate], seed: int, per_bucket: int = QA_BUCKET_SIZE
) -> list[QaRow]:
    """Draw a reproducible manual-validation sample.

    Candidates below the acceptance zone are grouped into seven
    tenth-wide buckets and up to ``per_bucket`` are drawn from each with
    one seeded generator, consumed bucket by bucket in ascending order.
    Candidates are pre-sorted so the draw never depends on input order.
    """
    if per_bucket < 1:
        raise ConfigError(f"per-bucket sample size must be positive, got {per_bucket}")
    buckets: dict[tuple[float, float], list[AlignmentCandidate]] = {b: [] for b in QA_BUCKETS}
    ordered = sorted(
        set(candidates),
        key=lambda c: (c.left.source_id, c.right.source, c.right.source_id, c.heuristic),
    )
    for cand in ordered:
        bucket = _bucket_of(cand.similarity)
        if bucket is not None:
            buckets[bucket].append(cand)
    rng = random.Random(seed)
    rows = []
    for bucket in QA_BUCKETS:
        population = buckets[bucket]
        if len(population) > per_bucket:
            chosen = rng.sample(population, per_bucket)
        else:
            chosen = list(population)
        chosen.sort(key=lambda c: (c.left.source_id, c.right.source, c.right.source_id, c.heuristic))
        rows.extend(QaRow(bucket, cand) for cand in chosen)
    return rows


def write_worksheet(rows: Iterable[QaRow], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fp:
        writer = csv.DictWriter(fp, fieldnames=_CSV_FIELDS)
        writer.writeheader()
        for row in rows:
            cand = row.candidate
            writer.writerow(
                {
                    "bucket": f"{row.bucket[0]:.1f}-{row.bucket[1]:.1f}",
                    "left_source": cand.left.source,
                    "left_id": cand.left.source_id,
                    "left_name": cand.left.name,
                    "right_source": cand.right.source,
                    "right_id": cand.right.source_id,
                    "right_name": cand.right.name,
                    "similarity": repr(cand.similarity),
                    "heuristic": cand.heuristic,
                    "correct": row.correct,
                }
            )


def read_worksheet(path: str | Path) -> list[QaRow]:
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fp:
        reader = csv.DictReader(fp)
        missing = set(_CSV_FIELDS) - set(reader.fieldnames or ())
        if missing:
            raise QaValidationError(f"worksheet is missing columns: {sorted(missing)}")
        for line_no, record in enumerate(reader, start=2):
            try:
                low, high = record["bucket"].split("-")
                bucket = (float(low), float(high))
                cand = AlignmentCandidate(
                    left=NameRef(record["left_source"], record["left_id"], record["left_name"]),
                    right=NameRef(record["right_source"], record["right_id"], record["right_name"]),
                    similarity=float(record["similarity"]),
                    heuristic=record["heuristic"],
                )
            except (KeyError, ValueError, TypeError) as exc:
                raise QaValidationError(f"worksheet row {line_no} is malformed: {exc}") from exc
            rows.append(QaRow(bucket, cand, (record["correct"] or "").strip().lower()))
    return rows


@dataclass(frozen=True)
class BucketScore:
    low: float
    high: float
    total: int
    correct: int

    @property
    def accuracy(self) -> float | None:
        return self.correct / self.total if self.total else None


def qa_score(rows: Sequence[QaRow]) -> list[BucketScore]:
    """Per-bucket accuracy over an annotated worksheet.

    Every row must be annotated yes or no; anything else fails with the
    offending worksheet row numbers (header is row 1).
    """
    bad = [i + 2 for i, row in enumerate(rows) if row.correct not in ("yes", "no")]
    if bad:
        raise QaValidationError(f"unannotated or invalid rows: {bad}", offending_rows=bad)
    scores = []
    for low, high in QA_BUCKETS:
        group = [r for r in rows if r.bucket == (low, high)]
        scores.append(
            BucketScore(low, high, len(group), sum(1 for r in group if r.correct == "yes"))
        )
    return scores
