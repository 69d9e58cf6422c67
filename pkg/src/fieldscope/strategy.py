"""Strategy files: named bundles of queries, evaluated as a union.

File format (UTF-8 text): one ``[name]`` section header per query, the
query text on the following lines (joined with spaces), full-line ``#``
comments and blank lines ignored.

The package ships the published search strategies under
``fieldscope/data/strategies/``; load them with :func:`bundled_strategy`.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable

from .errors import ConfigError
from .query import PreparedRecord, Query, match_prepared, parse_query
from .records import Record

BUNDLED = (
    "liu_core",
    "liu_expanded1",
    "liu_expanded2",
    "tang_lexical",
    "core_final",
    "citation_topics",
    "wos_category",
)


@dataclass(frozen=True)
class Strategy:
    """A named list of queries; its result set is the union of theirs."""

    name: str
    queries: tuple[tuple[str, Query], ...]

    def __iter__(self):
        return iter(self.queries)

    def __len__(self) -> int:
        return len(self.queries)


def parse_strategy(text: str, name: str) -> Strategy:
    sections: list[tuple[str, list[str]]] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.startswith("[") and stripped.endswith("]"):
            sections.append((stripped[1:-1].strip(), []))
            continue
        if not sections:
            raise ConfigError(f"{name}: query text before any [section] header (line {line_no})")
        sections[-1][1].append(stripped)
    queries = []
    for section_name, lines in sections:
        if not lines:
            raise ConfigError(f"{name}: section [{section_name}] has no query text")
        queries.append((section_name, parse_query(" ".join(lines))))
    return Strategy(name=name, queries=tuple(queries))


def load_strategy(path: str | Path) -> Strategy:
    path = Path(path)
    return parse_strategy(path.read_text("utf-8"), path.stem)


def bundled_strategy(name: str) -> Strategy:
    if name not in BUNDLED:
        raise ConfigError(f"no bundled strategy {name!r}; have {', '.join(BUNDLED)}")
    text = (
        resources.files("fieldscope.data")
        .joinpath(f"strategies/{name}.strategy")
        .read_text("utf-8")
    )
    return parse_strategy(text, name)


def combine(name: str, strategies: Iterable[Strategy]) -> Strategy:
    """Merge several strategies into one (query names prefixed per source)."""
    queries: list[tuple[str, Query]] = []
    for strat in strategies:
        for query_name, query in strat:
            queries.append((f"{strat.name}/{query_name}", query))
    return Strategy(name=name, queries=tuple(queries))


def run_strategy(strategy: Strategy, records: Iterable[Record]) -> set[str]:
    """Union of the strategy's query match sets over the corpus.

    Streams the records once; memory is bounded by the result set.
    """
    matched: set[str] = set()
    for record in records:
        prep = PreparedRecord(record)
        for _, query in strategy:
            if match_prepared(query, prep):
                matched.add(record.ut)
                break
    return matched


def run_queries(strategy: Strategy, records: Iterable[Record]) -> dict[str, set[str]]:
    """Per-query match sets (for overlap/Venn comparisons)."""
    results: dict[str, set[str]] = {name: set() for name, _ in strategy}
    for record in records:
        prep = PreparedRecord(record)
        for name, query in strategy:
            if match_prepared(query, prep):
                results[name].add(record.ut)
    return results
