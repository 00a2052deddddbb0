"""Append-only store of (RunRecord, MetricReport) pairs.

Layout on disk, under one root directory:

* ``runs.log``   -- one frame per record: an ASCII header line
  ``!<payload-bytes>:<crc32-hex>\\n`` followed by the JSON payload and a
  newline.  Frames are only ever appended.
* ``index.json`` -- sidecar cache (run_id, offsets, params, report summary)
  keyed to the log's byte length; rebuilt by a full scan whenever stale.

A write interrupted mid-frame leaves a partial tail; reopening the store
moves those bytes to a ``runs.quarantine`` file and resumes from the last
complete frame, so all previously acknowledged records survive.

Single writer, any number of concurrent readers.
"""

from __future__ import annotations

import json
import logging
import os
import re
import zlib
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .errors import ConflictError, FormatError, ValidationError
from .interchange import RunParams, RunRecord, TopicRecord, _check_run_internal, run_to_json
from .metrics import MetricReport
from .stats import unique_counts

logger = logging.getLogger(__name__)

_HEADER_RE = re.compile(rb"^!(\d+):([0-9a-f]{8})\n$")

LOG_NAME = "runs.log"
INDEX_NAME = "index.json"
QUARANTINE_NAME = "runs.quarantine"


@dataclass
class IndexEntry:
    run_id: str
    offset: int
    corpus_id: str
    source: str
    params: dict[str, Any]
    report: dict[str, Any]


def _encode_record(run: RunRecord, report: MetricReport) -> bytes:
    payload = json.dumps(
        {"run": json.loads(run_to_json(run)), "report": report.to_json_dict()},
        ensure_ascii=False,
        separators=(",", ":"),
    ).encode("utf-8")
    header = f"!{len(payload)}:{zlib.crc32(payload):08x}\n".encode("ascii")
    return header + payload + b"\n"


def _run_from_json_dict(data: dict) -> RunRecord:
    topics = [
        TopicRecord(
            topic_id=int(t["topic_id"]),
            size=int(t["size"]),
            ngrams=[(g, float(s)) for g, s in t["ngrams"]],
        )
        for t in data["topics"]
    ]
    return RunRecord(
        run_id=str(data["run_id"]),
        corpus_id=str(data["corpus_id"]),
        source=str(data["source"]),
        params=RunParams.from_json_dict(data["params"]),
        assignments=[int(a) for a in data["assignments"]],
        topics=topics,
    )


class RunStore:
    """Append-only run database rooted at a directory."""

    def __init__(self, root: str | Path, create: bool = True) -> None:
        self.root = Path(root)
        if create:
            self.root.mkdir(parents=True, exist_ok=True)
        elif not self.root.is_dir():
            raise FormatError(f"store root {self.root} does not exist")
        self.log_path = self.root / LOG_NAME
        self.index_path = self.root / INDEX_NAME
        if not self.log_path.exists():
            self.log_path.touch()
        self._entries: list[IndexEntry] = []
        self._by_id: dict[str, IndexEntry] = {}
        self._load_index()

    # -- index handling -----------------------------------------------------

    def _load_index(self) -> None:
        size = self.log_path.stat().st_size
        if self.index_path.exists():
            try:
                data = json.loads(self.index_path.read_text(encoding="utf-8"))
                if data.get("store_bytes") == size:
                    self._entries = [IndexEntry(**item) for item in data["records"]]
                    self._by_id = {e.run_id: e for e in self._entries}
                    return
                logger.info("index stale (log is %d bytes, index says %s); rebuilding",
                            size, data.get("store_bytes"))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                logger.warning("unreadable index (%s); rebuilding", exc)
        self._rebuild_index()

    def _rebuild_index(self) -> None:
        self._entries = []
        self._by_id = {}
        good_end = 0
        with open(self.log_path, "rb") as fh:
            while True:
                offset = fh.tell()
                header = fh.readline()
                if not header:
                    good_end = offset
                    break
                match = _HEADER_RE.match(header)
                if match is None:
                    good_end = offset
                    self._quarantine_tail(offset)
                    break
                length = int(match.group(1))
                crc_expected = int(match.group(2), 16)
                payload = fh.read(length)
                trailer = fh.read(1)
                if (
                    len(payload) != length
                    or trailer != b"\n"
                    or zlib.crc32(payload) != crc_expected
                ):
                    good_end = offset
                    self._quarantine_tail(offset)
                    break
                record = json.loads(payload.decode("utf-8"))
                report = record["report"]
                run = record["run"]
                self._append_index_entry(
                    IndexEntry(
                        run_id=run["run_id"],
                        offset=offset,
                        corpus_id=run["corpus_id"],
                        source=run["source"],
                        params=run["params"],
                        report=report,
                    )
                )
        self._write_index(store_bytes=good_end)

    def _quarantine_tail(self, offset: int) -> None:
        """Move a partial trailing frame out of the log and truncate to offset."""
        with open(self.log_path, "rb") as fh:
            fh.seek(offset)
            tail = fh.read()
        quarantine = self.root / QUARANTINE_NAME
        with open(quarantine, "ab") as fh:
            fh.write(tail)
        with open(self.log_path, "r+b") as fh:
            fh.truncate(offset)
        logger.warning(
            "quarantined %d bytes of partial record to %s", len(tail), quarantine
        )

    def _append_index_entry(self, entry: IndexEntry) -> None:
        self._entries.append(entry)
        self._by_id[entry.run_id] = entry

    def _write_index(self, store_bytes: int | None = None) -> None:
        size = self.log_path.stat().st_size if store_bytes is None else store_bytes
        data = {
            "store_bytes": size,
            "records": [vars(e) for e in self._entries],
        }
        tmp = self.index_path.with_suffix(".json.tmp")
        tmp.write_text(
            json.dumps(data, ensure_ascii=False, separators=(",", ":")) + "\n",
            encoding="utf-8",
        )
        os.replace(tmp, self.index_path)

    # -- public operations ----------------------------------------------------

    def __len__(self) -> int:
        return len(self._entries)

    def run_ids(self) -> list[str]:
        return [e.run_id for e in self._entries]

    def append_run(self, run: RunRecord, report: MetricReport) -> str:
        """Durably append one record; rejects duplicates and invalid runs."""
        if run.run_id in self._by_id:
            raise ConflictError(f"run_id {run.run_id!r} already stored")
        if run.run_id != report.run_id:
            raise ValidationError(
                f"report is for {report.run_id!r}, run is {run.run_id!r}"
            )
        _check_run_internal(run, f"append {run.run_id}")
        frame = _encode_record(run, report)
        with open(self.log_path, "ab") as fh:
            offset = fh.tell()
            fh.write(frame)
            fh.flush()
            os.fsync(fh.fileno())
        self._append_index_entry(
            IndexEntry(
                run_id=run.run_id,
                offset=offset,
                corpus_id=run.corpus_id,
                source=run.source,
                params=run.params.to_json_dict(),
                report=report.to_json_dict(),
            )
        )
        self._write_index()
        return run.run_id

    def get(self, run_id: str) -> tuple[RunRecord, MetricReport]:
        """Fetch one stored record by id (reads back from the log)."""
        entry = self._by_id.get(run_id)
        if entry is None:
            raise KeyError(run_id)
        with open(self.log_path, "rb") as fh:
            fh.seek(entry.offset)
            header = fh.readline()
            match = _HEADER_RE.match(header)
            if match is None:
                raise FormatError(f"corrupt frame header at offset {entry.offset}")
            payload = fh.read(int(match.group(1)))
            if zlib.crc32(payload) != int(match.group(2), 16):
                raise FormatError(f"checksum mismatch for {run_id!r}")
        record = json.loads(payload.decode("utf-8"))
        return _run_from_json_dict(record["run"]), MetricReport.from_json_dict(record["report"])

    def query(
        self,
        corpus_id: str | None = None,
        source: str | None = None,
        param_ranges: dict[str, tuple[float, float]] | None = None,
    ) -> list[MetricReport]:
        """All matching reports in insertion order; every filter is optional.

        param_ranges maps a params field name to an inclusive (lo, hi)
        interval; records missing that parameter do not match.
        """
        out = []
        for entry in self._entries:
            if corpus_id is not None and entry.corpus_id != corpus_id:
                continue
            if source is not None and entry.source != source:
                continue
            if param_ranges:
                ok = True
                for name, (lo, hi) in param_ranges.items():
                    value = entry.params.get(name)
                    if value is None or not (lo <= value <= hi):
                        ok = False
                        break
                if not ok:
                    continue
            out.append(MetricReport.from_json_dict(entry.report))
        return out

    def table6(
        self,
        group_keys: tuple[str, ...] = ("corpus_id", "source"),
        metric: str = "nuv",
        precision: int = 2,
    ) -> list[tuple[tuple[str, ...], int, int, float]]:
        """Unique-value rows (group, total, unique, pct) over a grouped metric."""
        for key in group_keys:
            if key not in ("corpus_id", "source"):
                raise ValidationError(f"unsupported group key {key!r}")
        groups: dict[tuple[str, ...], list[float]] = {}
        for entry in self._entries:
            group = tuple(getattr(entry, key) for key in group_keys)
            groups.setdefault(group, []).append(float(entry.report[metric]))
        rows = []
        for group in sorted(groups):
            total, unique, pct = unique_counts(groups[group], precision)
            rows.append((group, total, unique, pct))
        return rows
