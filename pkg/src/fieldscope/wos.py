"""Codecs for the two Web of Science export flavors.

Tagged format ("Full records" plain text):

    FN Clarivate Analytics Web of Science
    VR 1.0
    PT J
    UT WOS:000001
    TI A very long title
       that continues on the next line
    DE Machine learning; Robotics
    ER
    EF

Field tags are two characters at the start of a line; continuation lines
carry exactly three leading spaces and are joined to the previous value
with a single space. Exception: each continuation line of C1 is its own
address entry (that is how WoS lists multiple addresses). DE/ID/WC values
split on "; ". A PT..ER block missing its ER raises MalformedBlock; a
block without UT is skipped with a warning. EF terminates the file.

Tabular format: one tab-separated header row of field tags (UT required),
one row per record, list values joined with "; ". Unknown columns are
ignored; rows with the wrong cell count are skipped with a warning.

Both flavors carry the same field content; parsing the same document from
either yields field-identical Records.
"""

from __future__ import annotations

import io
import logging
from typing import IO, Callable, Iterable

from .errors import HeaderMissingUT, MalformedBlock
from .records import YEAR_MAX, YEAR_MIN, Record

log = logging.getLogger(__name__)

WarningSink = Callable[[str], None] | None

LIST_TAGS = {"DE", "ID", "WC"}
SCALAR_TAGS = {"UT", "TI", "AB", "PY", "TC", "PT"}
KNOWN_TAGS = LIST_TAGS | SCALAR_TAGS | {"C1"}

TABULAR_COLUMNS = ("UT", "TI", "AB", "DE", "ID", "WC", "PY", "TC", "C1")


def _as_lines(stream: IO[bytes] | IO[str] | str) -> list[str]:
    if isinstance(stream, str):
        return stream.splitlines()
    data = stream.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return data.splitlines()


def _warn(on_warning: WarningSink, message: str) -> None:
    if on_warning is None:
        log.warning(message)
    else:
        on_warning(message)


def _parse_year(text: str, ut: str, on_warning: WarningSink) -> int | None:
    text = text.strip()
    if not text:
        return None
    try:
        year = int(text)
    except ValueError:
        _warn(on_warning, f"{ut}: unreadable year {text!r}, dropped")
        return None
    if not (YEAR_MIN <= year <= YEAR_MAX):
        _warn(on_warning, f"{ut}: year {year} outside [{YEAR_MIN}, {YEAR_MAX}], dropped")
        return None
    return year


def _parse_citations(text: str, ut: str, on_warning: WarningSink) -> int:
    text = text.strip()
    if not text:
        return 0
    try:
        count = int(text)
    except ValueError:
        _warn(on_warning, f"{ut}: unreadable citation count {text!r}, set to 0")
        return 0
    if count < 0:
        _warn(on_warning, f"{ut}: negative citation count {count}, set to 0")
        return 0
    return count


def _split_list(value: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in value.split("; ") if part.strip())


def _record_from_fields(fields: dict[str, object], on_warning: WarningSink) -> Record | None:
    ut = str(fields.get("UT", "")).strip()
    year = _parse_year(str(fields.get("PY", "")), ut, on_warning)
    citations = _parse_citations(str(fields.get("TC", "")), ut, on_warning)
    return Record.from_fields(
        ut=ut,
        title=str(fields.get("TI", "")).strip(),
        abstract=str(fields.get("AB", "")).strip(),
        author_keywords=_split_list(str(fields.get("DE", ""))),
        keywords_plus=_split_list(str(fields.get("ID", ""))),
        categories=_split_list(str(fields.get("WC", ""))),
        year=year,
        citation_count=citations,
        addresses=tuple(fields.get("C1", ()) or ()),  # type: ignore[arg-type]
    )


def parse_tagged(stream: IO[bytes] | IO[str] | str, on_warning: WarningSink = None) -> list[Record]:
    """Parse a tagged export into Records."""
    lines = _as_lines(stream)
    if not lines or not lines[0].startswith("FN"):
        raise MalformedBlock("missing FN header", 1)

    records: list[Record] = []
    in_block = False
    block_start = 0
    current_tag = ""
    fields: dict[str, object] = {}

    def close_block() -> None:
        nonlocal in_block, fields, current_tag
        ut = str(fields.get("UT", "")).strip()
        if not ut:
            _warn(on_warning, f"block starting at line {block_start} has no UT, skipped")
        else:
            records.append(_record_from_fields(fields, on_warning))
        in_block = False
        current_tag = ""
        fields = {}

    for line_no, line in enumerate(lines, start=1):
        if line.startswith("EF"):
            if in_block:
                raise MalformedBlock("EF inside an unterminated block", block_start)
            break
        if not in_block:
            if line.startswith("PT"):
                in_block = True
                block_start = line_no
                fields = {"PT": line[3:].strip()}
                current_tag = "PT"
            continue
        if line.startswith("ER"):
            close_block()
            continue
        if line.startswith("   ") and current_tag:
            value = line[3:].strip()
            if current_tag == "C1":
                fields.setdefault("C1", []).append(value)  # type: ignore[union-attr]
            elif current_tag in fields:
                fields[current_tag] = f"{fields[current_tag]} {value}"
            continue
        tag, _, value = line.partition(" ")
        if len(tag) == 2 and tag.isalnum():
            current_tag = tag
            if tag == "C1":
                fields.setdefault("C1", []).append(value.strip())  # type: ignore[union-attr]
            else:
                fields[tag] = value.strip()
    if in_block:
        raise MalformedBlock("file ended inside a block (missing ER)", block_start)
    return records


def write_tagged(records: Iterable[Record], stream: IO[str]) -> None:
    """Write records in the tagged export format (inverse of parse_tagged)."""

    def clean(text: str) -> str:
        return " ".join(text.split())

    stream.write("FN fieldscope Web of Science export\n")
    stream.write("VR 1.0\n")
    for record in records:
        stream.write("PT J\n")
        stream.write(f"UT {clean(record.ut)}\n")
        if record.title:
            stream.write(f"TI {clean(record.title)}\n")
        if record.abstract:
            stream.write(f"AB {clean(record.abstract)}\n")
        if record.author_keywords:
            stream.write(f"DE {'; '.join(clean(k) for k in record.author_keywords)}\n")
        if record.keywords_plus:
            stream.write(f"ID {'; '.join(clean(k) for k in record.keywords_plus)}\n")
        if record.categories:
            stream.write(f"WC {'; '.join(clean(c) for c in record.categories)}\n")
        if record.year is not None:
            stream.write(f"PY {record.year}\n")
        stream.write(f"TC {record.citation_count}\n")
        for i, address in enumerate(record.addresses):
            prefix = "C1 " if i == 0 else "   "
            stream.write(f"{prefix}{clean(address)}\n")
        stream.write("ER\n\n")
    stream.write("EF\n")


def tagged_bytes(records: Iterable[Record]) -> bytes:
    buffer = io.StringIO()
    write_tagged(records, buffer)
    return buffer.getvalue().encode("utf-8")


def parse_tabular(stream: IO[bytes] | IO[str] | str, on_warning: WarningSink = None) -> list[Record]:
    """Parse a tab-delimited export with a tag header row into Records."""
    lines = _as_lines(stream)
    if not lines:
        raise HeaderMissingUT("empty tabular export")
    header = lines[0].split("\t")
    tags = [tag.strip() for tag in header]
    if "UT" not in tags:
        raise HeaderMissingUT(f"tabular header lacks UT: {header!r}")

    records: list[Record] = []
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = line.split("\t")
        if len(cells) != len(tags):
            _warn(
                on_warning,
                f"row {line_no}: {len(cells)} cells for {len(tags)} columns, skipped",
            )
            continue
        fields: dict[str, object] = {}
        for tag, cell in zip(tags, cells):
            if tag not in KNOWN_TAGS:
                continue
            if tag == "C1":
                fields["C1"] = _split_list(cell)
            else:
                fields[tag] = cell
        ut = str(fields.get("UT", "")).strip()
        if not ut:
            _warn(on_warning, f"row {line_no} has no UT, skipped")
            continue
        records.append(_record_from_fields(fields, on_warning))
    return records


def write_tabular(records: Iterable[Record], stream: IO[str]) -> None:
    """Write records as a tab-delimited export (inverse of parse_tabular)."""

    def clean(text: str) -> str:
        return " ".join(text.replace("\t", " ").split())

    stream.write("\t".join(TABULAR_COLUMNS) + "\n")
    for record in records:
        row = (
            clean(record.ut),
            clean(record.title),
            clean(record.abstract),
            "; ".join(clean(k) for k in record.author_keywords),
            "; ".join(clean(k) for k in record.keywords_plus),
            "; ".join(clean(c) for c in record.categories),
            "" if record.year is None else str(record.year),
            str(record.citation_count),
            "; ".join(clean(a) for a in record.addresses),
        )
        stream.write("\t".join(row) + "\n")
