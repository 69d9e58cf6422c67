"""The bibliographic Record value type.

Records are immutable; parsers and the corpus store construct them, every
other module only reads them, so they can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .countries import extract_countries, extract_institutions

YEAR_MIN = 1900
YEAR_MAX = 2100

_JSON_FIELDS = (
    "ut",
    "title",
    "abstract",
    "author_keywords",
    "keywords_plus",
    "categories",
    "citation_topic",
    "year",
    "citation_count",
    "addresses",
    "countries",
    "institutions",
)


@dataclass(frozen=True)
class Record:
    """One bibliographic document.

    ``countries`` and ``institutions`` are derived from ``addresses``;
    use :meth:`from_fields` to construct records from parsed export data
    so the derivation stays consistent.
    """

    ut: str
    title: str = ""
    abstract: str = ""
    author_keywords: tuple[str, ...] = ()
    keywords_plus: tuple[str, ...] = ()
    categories: tuple[str, ...] = ()
    citation_topic: str | None = None
    year: int | None = None
    citation_count: int = 0
    addresses: tuple[str, ...] = ()
    countries: tuple[str, ...] = ()
    institutions: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.ut:
            raise ValueError("record requires a nonempty ut")
        if self.year is not None and not (YEAR_MIN <= self.year <= YEAR_MAX):
            raise ValueError(f"year {self.year} outside [{YEAR_MIN}, {YEAR_MAX}]")
        if self.citation_count < 0:
            raise ValueError("citation_count must be >= 0")
        if len(set(self.countries)) != len(self.countries):
            raise ValueError("countries must not contain duplicates")

    @classmethod
    def from_fields(
        cls,
        ut: str,
        title: str = "",
        abstract: str = "",
        author_keywords: tuple[str, ...] | list[str] = (),
        keywords_plus: tuple[str, ...] | list[str] = (),
        categories: tuple[str, ...] | list[str] = (),
        citation_topic: str | None = None,
        year: int | None = None,
        citation_count: int = 0,
        addresses: tuple[str, ...] | list[str] = (),
    ) -> "Record":
        """Build a record, deriving countries and institutions from addresses."""
        addresses = tuple(addresses)
        return cls(
            ut=ut,
            title=title,
            abstract=abstract,
            author_keywords=tuple(author_keywords),
            keywords_plus=tuple(keywords_plus),
            categories=tuple(categories),
            citation_topic=citation_topic,
            year=year,
            citation_count=citation_count,
            addresses=addresses,
            countries=tuple(extract_countries(list(addresses))),
            institutions=tuple(extract_institutions(list(addresses))),
        )

    def with_topic(self, topic: str | None) -> "Record":
        return replace(self, citation_topic=topic)

    def to_json_dict(self) -> dict:
        """Serialize with a fixed field order for byte-stable persistence."""
        out: dict = {}
        for name in _JSON_FIELDS:
            value = getattr(self, name)
            out[name] = list(value) if isinstance(value, tuple) else value
        return out

    @classmethod
    def from_json_dict(cls, data: dict) -> "Record":
        kwargs = {}
        for name in _JSON_FIELDS:
            value = data.get(name)
            if name in ("ut", "title", "abstract"):
                kwargs[name] = value or ("" if name != "ut" else value)
            elif name in ("citation_topic", "year"):
                kwargs[name] = value
            elif name == "citation_count":
                kwargs[name] = int(value or 0)
            else:
                kwargs[name] = tuple(value or ())
        return cls(**kwargs)


@dataclass(frozen=True)
class CorpusHandle:
    """Summary of a stored corpus."""

    name: str
    record_count: int
    source_files: tuple[str, ...] = field(default_factory=tuple)
