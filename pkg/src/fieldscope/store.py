"""Line-delimited corpus persistence.

A corpus is a directory:

    {name}/records.ndrec   one self-describing JSON record per line, ut-sorted
    {name}/index           "ut<TAB>byte-offset" lines into records.ndrec
    {name}/meta            corpus name, record count, source files (JSON)

No external database: desk-scale corpora, zero-dependency reproducibility.
Reads are safe from any number of threads (every iterator opens its own
handle); writes to one corpus must come from a single writer.
"""

from __future__ import annotations

import csv
import json
import os
from pathlib import Path
from typing import Iterable, Iterator

from .errors import StorageError
from .records import CorpusHandle, Record

RECORDS_FILE = "records.ndrec"
INDEX_FILE = "index"
META_FILE = "meta"


class CorpusStore:
    """Read/write access to one corpus directory."""

    def __init__(self, directory: str | Path, name: str, source_files: list[str]):
        self.directory = Path(directory)
        self.name = name
        self.source_files = source_files
        self._offsets: dict[str, int] = {}
        self._load_index()

    # --- lifecycle ---

    @classmethod
    def create(cls, directory: str | Path, name: str | None = None) -> "CorpusStore":
        directory = Path(directory)
        try:
            directory.mkdir(parents=True, exist_ok=True)
            (directory / RECORDS_FILE).touch()
            (directory / INDEX_FILE).touch()
        except OSError as exc:
            raise StorageError(f"cannot create corpus at {directory}: {exc}") from exc
        store = cls(directory, name or directory.name, [])
        store._write_meta()
        return store

    @classmethod
    def open(cls, directory: str | Path) -> "CorpusStore":
        directory = Path(directory)
        meta_path = directory / META_FILE
        if not meta_path.exists():
            raise StorageError(f"no corpus at {directory} (missing {META_FILE})")
        try:
            meta = json.loads(meta_path.read_text("utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise StorageError(f"unreadable corpus meta at {meta_path}: {exc}") from exc
        return cls(directory, meta.get("name", directory.name), list(meta.get("source_files", [])))

    # --- reading ---

    def _load_index(self) -> None:
        index_path = self.directory / INDEX_FILE
        if not index_path.exists():
            raise StorageError(f"no corpus index at {index_path}")
        self._offsets = {}
        with open(index_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if not line:
                    continue
                ut, _, offset = line.partition("\t")
                self._offsets[ut] = int(offset)

    def __len__(self) -> int:
        return len(self._offsets)

    def __contains__(self, ut: str) -> bool:
        return ut in self._offsets

    def uts(self) -> list[str]:
        return sorted(self._offsets)

    def get(self, ut: str) -> Record:
        if ut not in self._offsets:
            raise KeyError(ut)
        with open(self.directory / RECORDS_FILE, "rb") as fh:
            fh.seek(self._offsets[ut])
            line = fh.readline().decode("utf-8")
        return Record.from_json_dict(json.loads(line))

    def __iter__(self) -> Iterator[Record]:
        """Stream records in ut order without loading the whole corpus."""
        path = self.directory / RECORDS_FILE
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    yield Record.from_json_dict(json.loads(line))

    def get_many(self, uts: Iterable[str]) -> list[Record]:
        return [self.get(ut) for ut in uts]

    @property
    def handle(self) -> CorpusHandle:
        return CorpusHandle(
            name=self.name,
            record_count=len(self._offsets),
            source_files=tuple(self.source_files),
        )

    # --- writing ---

    def add_records(self, records: Iterable[Record], source: str | None = None) -> CorpusHandle:
        """Upsert records keyed by ut and persist; idempotent per ut."""
        merged: dict[str, Record] = {ut: self.get(ut) for ut in self._offsets}
        for record in records:
            merged[record.ut] = record
        if source and source not in self.source_files:
            self.source_files.append(source)
        self._rewrite(merged)
        return self.handle

    def apply_topics(self, topics: dict[str, str]) -> int:
        """Attach citation-topic ids from a ut->topic mapping; returns hits."""
        merged: dict[str, Record] = {}
        hits = 0
        for record in self:
            topic = topics.get(record.ut)
            if topic is not None:
                record = record.with_topic(topic)
                hits += 1
            merged[record.ut] = record
        self._rewrite(merged)
        return hits

    def _rewrite(self, records_by_ut: dict[str, Record]) -> None:
        records_path = self.directory / RECORDS_FILE
        index_path = self.directory / INDEX_FILE
        tmp_records = records_path.with_suffix(".ndrec.tmp")
        try:
            offsets: dict[str, int] = {}
            with open(tmp_records, "w", encoding="utf-8", newline="\n") as fh:
                position = 0
                for ut in sorted(records_by_ut):
                    line = json.dumps(records_by_ut[ut].to_json_dict(), ensure_ascii=False)
                    offsets[ut] = position
                    fh.write(line + "\n")
                    position += len(line.encode("utf-8")) + 1
            os.replace(tmp_records, records_path)
            with open(index_path, "w", encoding="utf-8", newline="\n") as fh:
                for ut in sorted(offsets):
                    fh.write(f"{ut}\t{offsets[ut]}\n")
            self._offsets = offsets
            self._write_meta()
        except OSError as exc:
            raise StorageError(f"write failed under {self.directory}: {exc}") from exc

    def _write_meta(self) -> None:
        meta = {
            "name": self.name,
            "record_count": len(self._offsets),
            "source_files": self.source_files,
        }
        try:
            (self.directory / META_FILE).write_text(
                json.dumps(meta, ensure_ascii=False, indent=2) + "\n", "utf-8"
            )
        except OSError as exc:
            raise StorageError(f"write failed under {self.directory}: {exc}") from exc


def load_topics_csv(path: str | Path) -> dict[str, str]:
    """Read the optional ut->citation-topic side file (CSV ``ut,topic``)."""
    topics: dict[str, str] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().startswith("#"):
                continue
            if row[0].strip().lower() == "ut":
                continue
            if len(row) >= 2 and row[0].strip():
                topics[row[0].strip()] = row[1].strip()
    return topics


def materialize_subset(
    source: CorpusStore, uts: Iterable[str], directory: str | Path, name: str
) -> CorpusStore:
    """Persist a subset of a corpus as its own named corpus."""
    subset = CorpusStore.create(directory, name)
    subset.add_records(source.get(ut) for ut in sorted(set(uts)))
    return subset
