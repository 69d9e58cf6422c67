"""Country and institution extraction from bibliographic address strings.

A Web of Science address entry looks like

    [Smith, J.; Doe, A.] Tsinghua Univ, Dept Comp Sci, Beijing, Peoples R China.

The country is the segment after the final comma; the institution is the
first segment (after dropping the bracketed author list). Country names
are normalized through an editable alias table shipped with the package
(data/country_aliases.csv), e.g. "Peoples R China" -> "China". US
addresses end in "<STATE> <ZIP> USA" and are folded to "USA". "England",
"Scotland" and "Wales" are kept distinct rather than folded into "UK".
"""

from __future__ import annotations

import csv
import re
from importlib import resources
from typing import Callable

_AUTHOR_PREFIX = re.compile(r"^\s*\[[^\]]*\]\s*")
_USA_SUFFIX = re.compile(r"(^|\s)usa$")

WarningSink = Callable[[str], None] | None

_alias_cache: dict[str, str] | None = None


def load_alias_table(path: str | None = None) -> dict[str, str]:
    """Load the alias table: lower-cased alias -> canonical country name.

    Without a path the packaged default table is used (and cached).
    Lines starting with '#' and blank lines are ignored.
    """
    global _alias_cache
    if path is None and _alias_cache is not None:
        return _alias_cache
    if path is None:
        text = resources.files("fieldscope.data").joinpath("country_aliases.csv").read_text("utf-8")
        lines = text.splitlines()
    else:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    table: dict[str, str] = {}
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        row = next(csv.reader([line]))
        if len(row) != 2:
            continue
        alias, canonical = row[0].strip().lower(), row[1].strip()
        if alias:
            table[alias] = canonical
    if path is None:
        _alias_cache = table
    return table


def extract_countries(
    addresses: list[str],
    aliases: dict[str, str] | None = None,
    on_warning: WarningSink = None,
) -> list[str]:
    """Derive normalized country names from address entries.

    Takes the segment after the final comma of each entry, trims it,
    strips trailing periods, and maps it through the alias table.
    Duplicates are dropped, keeping first-occurrence order. Entries
    that yield no recognizable country are skipped with a warning.
    """
    if aliases is None:
        aliases = load_alias_table()
    seen: list[str] = []
    for entry in addresses:
        country = _country_of(entry, aliases)
        if country is None:
            if on_warning is not None:
                on_warning(f"no country recognized in address: {entry!r}")
            continue
        if country not in seen:
            seen.append(country)
    return seen


def _country_of(entry: str, aliases: dict[str, str]) -> str | None:
    segment = entry.rsplit(",", 1)[-1].strip().rstrip(".").strip()
    if not segment:
        return None
    key = segment.lower()
    if key in aliases:
        return aliases[key]
    if _USA_SUFFIX.search(key):
        # state + zip prefix, e.g. "MA 02139 USA"
        return aliases.get("usa", "USA")
    if any(ch.isdigit() for ch in segment):
        # a bare postal code is not a country
        return None
    return segment


def extract_institutions(addresses: list[str]) -> list[str]:
    """First comma-separated segment of each entry, deduplicated.

    The bracketed author list WoS prepends to grouped addresses is
    dropped first. No disambiguation beyond exact-string dedup.
    """
    seen: list[str] = []
    for entry in addresses:
        body = _AUTHOR_PREFIX.sub("", entry)
        segment = body.split(",", 1)[0].strip().rstrip(".").strip()
        if segment and segment not in seen:
            seen.append(segment)
    return seen
