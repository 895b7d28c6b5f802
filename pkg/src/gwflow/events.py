"""Durable command log, denial audit stream and snapshot files.

Every successful mutation appends exactly one JSON line to the event log:
``{"args": ..., "op": ..., "seq": n, "user": uid}`` with keys sorted, seq
dense from 1. Appends are flushed and fsynced before the caller sees the
sequence number. A torn final line (a crash mid-write) is detected on
open and truncated away, so the log is always a dense, parseable prefix.

Denied attempts never touch the event log; they go to a separate audit
stream with its own numbering.

A snapshot file is the state text prefixed by a ``seq|N`` header line and
a digest line, written atomically via a temp file and rename.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os

from .errors import MalformedInput, StorageFailure

log = logging.getLogger(__name__)


def encode_event(seq: int, op: str, user: int, args: dict) -> str:
    return json.dumps({"args": args, "op": op, "seq": seq, "user": user},
                      sort_keys=True, separators=(",", ":"))


def _scan_lines(path: str) -> tuple[list[dict], int]:
    """Parse JSON lines; returns (records, byte length of the valid prefix)."""
    records: list[dict] = []
    good = 0
    try:
        with open(path, "rb") as f:
            data = f.read()
    except FileNotFoundError:
        return records, 0
    pos = 0
    while pos < len(data):
        nl = data.find(b"\n", pos)
        if nl < 0:
            break  # no terminator: torn tail
        chunk = data[pos:nl]
        try:
            rec = json.loads(chunk.decode("utf-8"))
        except (ValueError, UnicodeDecodeError):
            break  # damaged line, everything after is suspect
        if not isinstance(rec, dict):
            break
        records.append(rec)
        pos = nl + 1
        good = pos
    if good < len(data):
        log.warning("dropping %d torn bytes at end of %s", len(data) - good, path)
    return records, good


class FileEventLog:
    """Append-only command log backed by one file."""

    def __init__(self, path: str, base_seq: int = 0):
        self.path = path
        records, good = _scan_lines(path)
        if os.path.exists(path) and good < os.path.getsize(path):
            with open(path, "ab") as f:
                f.truncate(good)
        expected = base_seq
        for rec in records:
            if rec.get("seq") != expected + 1:
                raise MalformedInput(
                    f"event log {path} is not dense: saw seq {rec.get('seq')} "
                    f"after {expected}")
            expected += 1
        self._records = records
        self.base_seq = base_seq
        self.last_seq = expected
        self._fh = open(path, "ab")

    def append(self, op: str, user: int, args: dict) -> int:
        seq = self.last_seq + 1
        line = encode_event(seq, op, user, args) + "\n"
        try:
            self._fh.write(line.encode("utf-8"))
            self._fh.flush()
            os.fsync(self._fh.fileno())
        except OSError as exc:
            raise StorageFailure(f"append to {self.path}: {exc}") from exc
        self._records.append(json.loads(line))
        self.last_seq = seq
        return seq

    def events(self) -> list[dict]:
        return list(self._records)

    def rewrite(self, records: list[dict], base_seq: int) -> None:
        """Atomically replace the log contents (compaction)."""
        tmp = self.path + ".tmp"
        with open(tmp, "wb") as f:
            for rec in records:
                f.write((json.dumps(rec, sort_keys=True,
                                    separators=(",", ":")) + "\n").encode("utf-8"))
            f.flush()
            os.fsync(f.fileno())
        self._fh.close()
        os.replace(tmp, self.path)
        _fsync_dir(os.path.dirname(os.path.abspath(self.path)))
        self._fh = open(self.path, "ab")
        self._records = list(records)
        self.base_seq = base_seq
        self.last_seq = records[-1]["seq"] if records else base_seq

    def close(self) -> None:
        self._fh.close()


class MemoryEventLog:
    """Drop-in stand-in for tests that do not care about disk."""

    def __init__(self, base_seq: int = 0):
        self._records: list[dict] = []
        self.base_seq = base_seq
        self.last_seq = base_seq

    def append(self, op: str, user: int, args: dict) -> int:
        seq = self.last_seq + 1
        self._records.append(json.loads(encode_event(seq, op, user, args)))
        self.last_seq = seq
        return seq

    def events(self) -> list[dict]:
        return list(self._records)

    def rewrite(self, records: list[dict], base_seq: int) -> None:
        self._records = list(records)
        self.base_seq = base_seq
        self.last_seq = records[-1]["seq"] if records else base_seq

    def close(self) -> None:
        pass


class AuditLog:
    """Denial stream: one JSON line per refused attempt, own dense numbering."""

    def __init__(self, path: str):
        self.path = path
        records, good = _scan_lines(path)
        if os.path.exists(path) and good < os.path.getsize(path):
            with open(path, "ab") as f:
                f.truncate(good)
        self._records = records
        self.last_seq = records[-1]["seq"] if records else 0
        self._fh = open(path, "ab")

    def record(self, user: int, action: str, target: str, reason: str,
               detail: str = "") -> int:
        seq = self.last_seq + 1
        rec = {"action": action, "detail": detail, "reason": reason,
               "seq": seq, "target": target, "user": user}
        line = json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n"
        try:
            self._fh.write(line.encode("utf-8"))
            self._fh.flush()
            os.fsync(self._fh.fileno())
        except OSError as exc:
            raise StorageFailure(f"append to {self.path}: {exc}") from exc
        self._records.append(rec)
        self.last_seq = seq
        return seq

    def tail(self, n: int = 20) -> list[dict]:
        return self._records[-n:] if n > 0 else []

    def entries(self) -> list[dict]:
        return list(self._records)

    def close(self) -> None:
        self._fh.close()


def write_snapshot(path: str, seq: int, state_text: str) -> str:
    """Write header + digest + state text atomically; returns the digest."""
    digest = hashlib.sha256(state_text.encode("utf-8")).hexdigest()
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as f:
        f.write(f"seq|{seq}\n")
        f.write(f"digest|{digest}\n")
        f.write(state_text)
        f.flush()
        os.fsync(f.fileno())
    os.replace(tmp, path)
    _fsync_dir(os.path.dirname(os.path.abspath(path)))
    return digest


def read_snapshot(path: str) -> tuple[int, str, str]:
    """Returns (seq, digest, state text); verifies the digest."""
    with open(path, encoding="utf-8") as f:
        raw = f.read()
    head, _, rest = raw.partition("\n")
    if not head.startswith("seq|"):
        raise MalformedInput(f"snapshot {path} lacks a seq header")
    dline, _, body = rest.partition("\n")
    if not dline.startswith("digest|"):
        raise MalformedInput(f"snapshot {path} lacks a digest header")
    seq = int(head.split("|", 1)[1])
    digest = dline.split("|", 1)[1]
    actual = hashlib.sha256(body.encode("utf-8")).hexdigest()
    if actual != digest:
        raise MalformedInput(f"snapshot {path} digest mismatch")
    return seq, digest, body


def _fsync_dir(dirpath: str) -> None:
    try:
        fd = os.open(dirpath, os.O_RDONLY)
    except OSError:
        return  # platform without directory fds
    try:
        os.fsync(fd)
    finally:
        os.close(fd)
