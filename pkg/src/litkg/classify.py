"""Role classification for authors.

The one role computed here, "Transnational", captures writers from
formerly colonized regions (by birth country and a region-specific
start year) and minority-group writers born in western countries. The
region and minority tables ship as editable package data.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import ClassificationError
from .ingest import normalize_name

TRANSNATIONAL = "Transnational"

LATIN_AMERICA_CARIBBEAN = "latin_america_caribbean"
AFRICA_ASIA_FORMER_COLONY = "africa_asia_former_colony"
WESTERN = "western"
OTHER = "other"
REGIONS = (LATIN_AMERICA_CARIBBEAN, AFRICA_ASIA_FORMER_COLONY, WESTERN, OTHER)

# Independence-era cutoffs: the year from which a birth in the region
# counts toward the role.
LATIN_AMERICA_SINCE = 1808
AFRICA_ASIA_SINCE = 1917


@dataclass(frozen=True)
class RegionTable:
    regions: dict[str, str]
    minority_groups: frozenset[str]

    def region_of(self, country: str) -> str:
        try:
            return self.regions[country]
        except KeyError:
            raise ClassificationError(f"country {country!r} is not in the region table") from None


def load_region_table(
    regions_path: str | Path | None = None, minorities_path: str | Path | None = None
) -> RegionTable:
    """Load the region and minority tables, defaulting to package data."""
    if regions_path is None:
        regions_text = resources.files("litkg.data").joinpath("regions.csv").read_text("utf-8")
    else:
        regions_text = Path(regions_path).read_text("utf-8")
    regions: dict[str, str] = {}
    reader = csv.DictReader(regions_text.splitlines())
    if not reader.fieldnames or {"country", "region"} - set(reader.fieldnames):
        raise ClassificationError("region table needs 'country' and 'region' columns")
    for row in reader:
        region = row["region"].strip()
        if region not in REGIONS:
            raise ClassificationError(f"unknown region {region!r} for country {row['country']!r}")
        regions[row["country"].strip()] = region

    if minorities_path is None:
        minorities_text = (
            resources.files("litkg.data").joinpath("minority_groups.txt").read_text("utf-8")
        )
    else:
        minorities_text = Path(minorities_path).read_text("utf-8")
    groups = set()
    for line in minorities_text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            groups.add(normalize_name(line))
    return RegionTable(regions=regions, minority_groups=frozenset(groups))


def classify_transnational(
    birth_country: str,
    birth_year: int,
    ethnic_group: str | None,
    table: RegionTable,
) -> bool:
    """Decide the Transnational role from birth facts alone.

    Citizenship deliberately plays no part: the role tracks where and
    when a writer was born, or a minority identity inside the western
    region, never later naturalization.
    """
    region = table.region_of(birth_country)
    if region == LATIN_AMERICA_CARIBBEAN and birth_year >= LATIN_AMERICA_SINCE:
        return True
    if region == AFRICA_ASIA_FORMER_COLONY and birth_year >= AFRICA_ASIA_SINCE:
        return True
    if region == WESTERN and ethnic_group is not None:
        return normalize_name(ethnic_group) in table.minority_groups
    return False


def roles_for(author, table: RegionTable) -> tuple[str, ...]:
    """All computed roles for an author-shaped record, sorted."""
    roles = []
    if classify_transnational(author.birth_country, author.birth_year, author.ethnic_group, table):
        roles.append(TRANSNATIONAL)
    return tuple(sorted(roles))
