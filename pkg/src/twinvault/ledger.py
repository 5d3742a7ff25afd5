"""Append-only hash-linked evidence registry.

A minimal private chain standing in for a single-operator blockchain:
each block holds exactly one evidence registration, blocks are hash-linked,
and the persisted log is never rewritten. No consensus or proof-of-work --
the forensic property actually relied on is tamper evidence, which the
hash links provide on their own.

One registration per block keeps block-number lookup unambiguous: the
retrieval protocol addresses evidence by block number alone.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterator

from .cas import ContentId
from .core import (
    Digest,
    EvidenceMeta,
    HashAlgorithm,
    is_evidence_id,
    parse_timestamp,
    render_timestamp,
)

GENESIS_PREV_HASH = "0" * 64


class NoRegistration(Exception):
    """Block exists but carries no registration (genesis)."""


class OutOfRange(Exception):
    """Block number at or beyond the chain length."""


class RegistrationNotFound(Exception):
    """No block registers the requested evidence id."""


class LedgerWriteError(Exception):
    """Persistence failure; the chain is unchanged in memory and on disk."""


class LedgerCorrupt(Exception):
    """An existing log failed validation on load."""

    def __init__(self, report: "ValidationReport"):
        super().__init__(f"ledger log invalid at block {report.first_bad_index}: {report.reason}")
        self.report = report


@dataclass(frozen=True)
class EvidenceRegistration:
    """One evidence item as registered on-chain: id, content address, MD5, metadata."""

    evidence_id: str
    content_id: ContentId
    md5: Digest
    meta: EvidenceMeta

    def __post_init__(self) -> None:
        if self.md5.algorithm is not HashAlgorithm.MD5:
            raise ValueError("registration fingerprint must be MD5")
        if not is_evidence_id(self.evidence_id):
            raise ValueError(f"malformed evidence id {self.evidence_id!r}")


@dataclass(frozen=True)
class BlockHeader:
    index: int
    prev_hash: str
    tx_digest: str
    timestamp: int


@dataclass(frozen=True)
class Block:
    header: BlockHeader
    registration: EvidenceRegistration | None
    block_hash: str


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    first_bad_index: int | None
    reason: str


def block_hash_of(header: BlockHeader) -> str:
    """SHA-256 over the canonical ASCII preimage ``index|prev_hash|tx_digest|timestamp``."""
    preimage = f"{header.index}|{header.prev_hash}|{header.tx_digest}|{header.timestamp}"
    return hashlib.sha256(preimage.encode("ascii")).hexdigest()


def canonical_registration_bytes(reg: EvidenceRegistration) -> bytes:
    """Bit-exact registration encoding: sorted keys, no insignificant whitespace, UTF-8."""
    return _canonical(_registration_to_dict(reg))


def tx_digest_of(reg: EvidenceRegistration | None) -> str:
    """SHA-256 of the canonical registration encoding; genesis digests the empty byte string."""
    if reg is None:
        return hashlib.sha256(b"").hexdigest()
    return hashlib.sha256(canonical_registration_bytes(reg)).hexdigest()


def genesis(timestamp: int) -> Block:
    """Chain bootstrap block: index 0, all-zero prev hash, no registration."""
    header = BlockHeader(
        index=0, prev_hash=GENESIS_PREV_HASH, tx_digest=tx_digest_of(None), timestamp=timestamp
    )
    return Block(header=header, registration=None, block_hash=block_hash_of(header))


def _canonical(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True).encode("utf-8")


def _registration_to_dict(reg: EvidenceRegistration) -> dict:
    return {
        "evidence_id": reg.evidence_id,
        "content_id": reg.content_id.render(),
        "md5": reg.md5.render(),
        "meta": {
            "case_id": reg.meta.case_id,
            "filename": reg.meta.filename,
            "media_type": reg.meta.media_type,
            "size_bytes": reg.meta.size_bytes,
            "submitted_at": render_timestamp(reg.meta.submitted_at),
            "submitter": reg.meta.submitter,
        },
    }


class MalformedRecord(ValueError):
    pass


def _expect_keys(d: dict, keys: set[str], what: str) -> None:
    if not isinstance(d, dict) or set(d.keys()) != keys:
        raise MalformedRecord(f"{what} must have exactly keys {sorted(keys)}")


def _expect_str(value, what: str) -> str:
    if not isinstance(value, str):
        raise MalformedRecord(f"{what} must be a string")
    return value


def _expect_int(value, what: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise MalformedRecord(f"{what} must be an integer")
    return value


def _registration_from_dict(d: dict) -> EvidenceRegistration:
    _expect_keys(d, {"evidence_id", "content_id", "md5", "meta"}, "registration")
    meta = d["meta"]
    _expect_keys(
        meta,
        {"case_id", "filename", "media_type", "size_bytes", "submitted_at", "submitter"},
        "registration meta",
    )
    try:
        return EvidenceRegistration(
            evidence_id=_expect_str(d["evidence_id"], "evidence_id"),
            content_id=ContentId.parse(_expect_str(d["content_id"], "content_id")),
            md5=Digest.parse(_expect_str(d["md5"], "md5")),
            meta=EvidenceMeta(
                case_id=_expect_str(meta["case_id"], "case_id"),
                filename=_expect_str(meta["filename"], "filename"),
                media_type=_expect_str(meta["media_type"], "media_type"),
                size_bytes=_expect_int(meta["size_bytes"], "size_bytes"),
                submitted_at=parse_timestamp(_expect_str(meta["submitted_at"], "submitted_at")),
                submitter=_expect_str(meta["submitter"], "submitter"),
            ),
        )
    except ValueError as exc:
        raise MalformedRecord(str(exc)) from exc


def block_to_line(block: Block) -> str:
    """Canonical one-line JSON encoding used in the persistent log."""
    doc = {
        "header": {
            "index": block.header.index,
            "prev_hash": block.header.prev_hash,
            "tx_digest": block.header.tx_digest,
            "timestamp": block.header.timestamp,
        },
        "registration": None if block.registration is None else _registration_to_dict(block.registration),
        "block_hash": block.block_hash,
    }
    return _canonical(doc).decode("ascii")


def _block_from_line(line: str) -> Block:
    try:
        doc = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedRecord(f"unparseable block record: {exc}") from exc
    _expect_keys(doc, {"header", "registration", "block_hash"}, "block record")
    header_doc = doc["header"]
    _expect_keys(header_doc, {"index", "prev_hash", "tx_digest", "timestamp"}, "block header")
    header = BlockHeader(
        index=_expect_int(header_doc["index"], "index"),
        prev_hash=_expect_str(header_doc["prev_hash"], "prev_hash"),
        tx_digest=_expect_str(header_doc["tx_digest"], "tx_digest"),
        timestamp=_expect_int(header_doc["timestamp"], "timestamp"),
    )
    registration = None if doc["registration"] is None else _registration_from_dict(doc["registration"])
    return Block(header=header, registration=registration, block_hash=_expect_str(doc["block_hash"], "block_hash"))


def _check_blocks(blocks: list[Block]) -> ValidationReport:
    """Recompute every hash, link, and tx digest; report the smallest offending index."""
    if not blocks:
        return ValidationReport(False, 0, "empty log: genesis block missing")
    for i, block in enumerate(blocks):
        header = block.header
        if header.index != i:
            return ValidationReport(False, i, f"block number {header.index} at position {i}")
        if i == 0:
            if header.prev_hash != GENESIS_PREV_HASH:
                return ValidationReport(False, 0, "genesis prev_hash is not all zeros")
            if block.registration is not None:
                return ValidationReport(False, 0, "genesis must not carry a registration")
        else:
            if block.registration is None:
                return ValidationReport(False, i, "non-genesis block missing its registration")
            if header.prev_hash != blocks[i - 1].block_hash:
                return ValidationReport(False, i, "prev_hash does not link to the preceding block")
        if header.tx_digest != tx_digest_of(block.registration):
            return ValidationReport(False, i, "tx_digest does not match the stored registration")
        if block.block_hash != block_hash_of(header):
            return ValidationReport(False, i, "block_hash does not match the header")
    return ValidationReport(True, None, "chain intact")


def validate_chain(chain: "Chain") -> ValidationReport:
    """Full in-memory revalidation of a chain (corruption is a report, not an error)."""
    return _check_blocks(list(chain.blocks))


def validate_log(path: str | Path) -> ValidationReport:
    """Validate a persisted log byte-for-byte.

    Any unparseable, non-canonical, or malformed line invalidates the log at
    that index; tampering can never surface as a crash here.
    """
    path = Path(path)
    if not path.exists():
        return ValidationReport(False, 0, "log file missing")
    blocks: list[Block] = []
    raw_lines = path.read_bytes().split(b"\n")
    if raw_lines and raw_lines[-1] == b"":
        raw_lines.pop()
    for i, raw in enumerate(raw_lines):
        try:
            line = raw.decode("utf-8")
            block = _block_from_line(line)
        except (UnicodeDecodeError, MalformedRecord) as exc:
            return ValidationReport(False, i, f"record {i} unreadable: {exc}")
        # Canonical re-encoding equality: any byte of drift from the
        # append-time encoding counts as tampering.
        if block_to_line(block) != line:
            return ValidationReport(False, i, f"record {i} is not in canonical form")
        blocks.append(block)
    return _check_blocks(blocks)


class Chain:
    """The evidence registry: an append-only, hash-linked, persisted block list.

    Appends are strictly single-writer (serialized by an internal lock);
    reads observe only fully appended blocks. The log is one canonical JSON
    line per block; recovery reads it linearly and validates before serving.

    The clock is injected so tests can fix timestamps for deterministic
    hashes; it must return Unix seconds.
    """

    def __init__(self, log_path: str | Path, clock: Callable[[], int] | None = None):
        self.path = Path(log_path)
        self._clock = clock or (lambda: int(time.time()))
        self._lock = threading.Lock()
        self._blocks: list[Block] = []
        if self.path.exists() and self.path.stat().st_size > 0:
            report = validate_log(self.path)
            if not report.valid:
                raise LedgerCorrupt(report)
            for raw in self.path.read_text().splitlines():
                self._blocks.append(_block_from_line(raw))
        else:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            block = genesis(self._clock())
            self._persist(block)
            self._blocks.append(block)

    @property
    def blocks(self) -> list[Block]:
        return list(self._blocks)

    def __len__(self) -> int:
        return len(self._blocks)

    def append_registration(self, reg: EvidenceRegistration) -> int:
        """Append one block holding ``reg``; returns its block number.

        The block is durably on disk before this returns. On a persistence
        failure the partial write is rolled back and the chain is unchanged.
        """
        with self._lock:
            prev = self._blocks[-1]
            header = BlockHeader(
                index=len(self._blocks),
                prev_hash=prev.block_hash,
                tx_digest=tx_digest_of(reg),
                timestamp=self._clock(),
            )
            block = Block(header=header, registration=reg, block_hash=block_hash_of(header))
            self._persist(block)
            self._blocks.append(block)
            return header.index

    def lookup_by_block_number(self, n: int) -> EvidenceRegistration:
        if n == 0:
            raise NoRegistration("genesis carries no registration")
        if n < 0 or n >= len(self._blocks):
            raise OutOfRange(f"block {n} beyond chain length {len(self._blocks)}")
        reg = self._blocks[n].registration
        assert reg is not None
        return reg

    def lookup_by_evidence_id(self, evidence_id: str) -> tuple[int, EvidenceRegistration]:
        """Earliest block registering the id wins (re-submissions keep history)."""
        for block in self._blocks[1:]:
            reg = block.registration
            if reg is not None and reg.evidence_id == evidence_id:
                return block.header.index, reg
        raise RegistrationNotFound(evidence_id)

    def registrations(self) -> Iterator[tuple[int, EvidenceRegistration]]:
        for block in self._blocks[1:]:
            if block.registration is not None:
                yield block.header.index, block.registration

    def _persist(self, block: Block) -> None:
        line = block_to_line(block) + "\n"
        try:
            with open(self.path, "ab") as log:
                offset = log.tell()
                try:
                    log.write(line.encode("ascii"))
                    log.flush()
                    os.fsync(log.fileno())
                except OSError:
                    log.truncate(offset)
                    raise
        except OSError as exc:
            raise LedgerWriteError(str(exc)) from exc
