"""Content-addressed chunk store: the off-chain home of digital twin payloads.

Payloads are split into fixed-size chunks and addressed by the root of a
binary Merkle tree over the chunks, so retrieval is self-verifying: the
address recomputes from the bytes. Emulates an IPFS-style pinned store on
the local filesystem with no networking.

Deliberately NOT wire-compatible with real IPFS CIDs; the ``twin-cas-v1``
scheme string makes that explicit.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import tempfile
import threading
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

from .core import render_timestamp, utc_now_seconds

CID_SCHEME = "twin-cas-v1"

# 256 KiB, matching common content-addressed-store practice. A store is
# created with one fixed chunk size (recorded in store metadata); the CID
# embeds no chunk-size tag, so changing it requires a new store.
CHUNK_SIZE = 262_144

_LEAF_PREFIX = b"\x00"
_NODE_PREFIX = b"\x01"

_ROOT_RE = re.compile(r"^[0-9a-f]{64}$")


class UnknownContent(Exception):
    """Raised when a ContentId has no stored object behind it."""


class IntegrityViolation(Exception):
    """Stored bytes no longer match their content address.

    chunk_index is the first offending chunk, or None when the damage is
    only attributable to the object manifest as a whole.
    """

    def __init__(self, content_id: "ContentId", chunk_index: int | None, detail: str):
        super().__init__(f"{content_id.render()}: {detail}")
        self.content_id = content_id
        self.chunk_index = chunk_index
        self.detail = detail


class CasWriteError(Exception):
    """I/O failure while persisting content; carries the failed ContentId."""

    def __init__(self, content_id: "ContentId", cause: BaseException):
        super().__init__(f"failed to persist {content_id.render()}: {cause}")
        self.content_id = content_id
        self.cause = cause


@dataclass(frozen=True)
class ContentId:
    """Merkle-root content identifier, rendered as ``twin-cas-v1:<64 hex>``."""

    root: str

    def __post_init__(self) -> None:
        if not _ROOT_RE.match(self.root):
            raise ValueError(f"content root must be 64 lowercase hex chars, got {self.root!r}")

    def render(self) -> str:
        return f"{CID_SCHEME}:{self.root}"

    @classmethod
    def parse(cls, rendered: str) -> "ContentId":
        scheme, _, root = rendered.partition(":")
        if scheme != CID_SCHEME:
            raise ValueError(f"expected {CID_SCHEME} content id, got {rendered!r}")
        return cls(root)


@dataclass(frozen=True)
class Chunk:
    index: int
    bytes: bytes


@dataclass
class PinRecord:
    content_id: ContentId
    pinned_at: datetime
    ref_count: int


def chunk_payload(payload: bytes, chunk_size: int = CHUNK_SIZE) -> list[Chunk]:
    """Split a payload into fixed-size chunks.

    Every chunk except the last has exactly chunk_size bytes. An empty
    payload yields a single zero-length chunk, so even empty evidence has
    an addressable leaf.
    """
    if not payload:
        return [Chunk(0, b"")]
    return [
        Chunk(i, payload[off : off + chunk_size])
        for i, off in enumerate(range(0, len(payload), chunk_size))
    ]


def _leaf_hash(chunk_bytes: bytes) -> str:
    return hashlib.sha256(_LEAF_PREFIX + chunk_bytes).hexdigest()


def _node_hash(left_hex: str, right_hex: str) -> str:
    return hashlib.sha256(_NODE_PREFIX + bytes.fromhex(left_hex) + bytes.fromhex(right_hex)).hexdigest()


def merkle_root(leaf_hashes: list[str]) -> str:
    """Fold leaf hashes pairwise up to a single root.

    Leaf/internal domain separation (0x00/0x01 prefixes) prevents
    second-preimage tree-shape attacks. An odd node at any level is
    promoted unchanged, and a single leaf is its own root.
    """
    if not leaf_hashes:
        raise ValueError("merkle_root requires at least one leaf")
    level = leaf_hashes
    while len(level) > 1:
        level = [
            _node_hash(level[i], level[i + 1]) if i + 1 < len(level) else level[i]
            for i in range(0, len(level), 2)
        ]
    return level[0]


def content_id(payload: bytes, chunk_size: int = CHUNK_SIZE) -> ContentId:
    """Pure content address of a payload: deterministic across runs and platforms."""
    leaves = [_leaf_hash(c.bytes) for c in chunk_payload(payload, chunk_size)]
    return ContentId(merkle_root(leaves))


class CasStore:
    """Filesystem-backed content-addressed store with pin accounting.

    Layout under the store root:
      store.json            store metadata (scheme, chunk size)
      chunks/<2ch>/<hash>   raw chunk bytes, named by leaf hash
      objects/<2ch>/<root>.json   ordered chunk-hash manifest per object
      pins.json             pin index (the only mutable file)

    The manifest is written last (atomic rename), so a reader racing a put
    observes the object only as absent, never as corrupt data. Evidence is
    never deleted: there is no unpin API.
    """

    def __init__(self, root_dir: str | Path, chunk_size: int = CHUNK_SIZE):
        self.root = Path(root_dir)
        self._lock = threading.Lock()
        self.root.mkdir(parents=True, exist_ok=True)
        meta_path = self.root / "store.json"
        if meta_path.exists():
            meta = json.loads(meta_path.read_text())
            if meta.get("scheme") != CID_SCHEME:
                raise ValueError(f"store at {self.root} uses scheme {meta.get('scheme')!r}")
            self.chunk_size = int(meta["chunk_size"])
        else:
            self.chunk_size = chunk_size
            _atomic_write(meta_path, json.dumps({"scheme": CID_SCHEME, "chunk_size": chunk_size}).encode())
        (self.root / "chunks").mkdir(exist_ok=True)
        (self.root / "objects").mkdir(exist_ok=True)

    # -- paths ----------------------------------------------------------

    def _chunk_path(self, leaf_hex: str) -> Path:
        return self.root / "chunks" / leaf_hex[:2] / leaf_hex

    def _manifest_path(self, cid: ContentId) -> Path:
        return self.root / "objects" / cid.root[:2] / f"{cid.root}.json"

    @property
    def _pins_path(self) -> Path:
        return self.root / "pins.json"

    # -- operations -----------------------------------------------------

    def put(self, payload: bytes) -> ContentId:
        """Persist a payload and pin it; returns its content address.

        Re-putting identical content stores no duplicate bytes and bumps
        the pin ref_count instead.
        """
        chunks = chunk_payload(payload, self.chunk_size)
        leaves = [_leaf_hash(c.bytes) for c in chunks]
        cid = ContentId(merkle_root(leaves))
        try:
            with self._lock:
                for chunk, leaf in zip(chunks, leaves):
                    path = self._chunk_path(leaf)
                    if not path.exists():
                        path.parent.mkdir(parents=True, exist_ok=True)
                        _atomic_write(path, chunk.bytes)
                manifest_path = self._manifest_path(cid)
                if not manifest_path.exists():
                    manifest_path.parent.mkdir(parents=True, exist_ok=True)
                    manifest = {"cid": cid.render(), "size": len(payload), "chunks": leaves}
                    _atomic_write(manifest_path, json.dumps(manifest).encode())
                self._pin(cid)
        except OSError as exc:
            raise CasWriteError(cid, exc) from exc
        return cid

    def get(self, cid: ContentId) -> bytes:
        """Retrieve and self-verify a payload.

        Every chunk is checked against its recorded leaf hash and the
        Merkle root is recomputed against the address, so corrupted bytes
        can never be returned silently.
        """
        payload, leaves = self._read_object(cid, verify=True)
        if merkle_root(leaves) != cid.root:
            raise IntegrityViolation(cid, None, "manifest does not reproduce the content root")
        return payload

    def get_unverified(self, cid: ContentId) -> bytes:
        """Raw read without Merkle verification.

        Exists so an integrity audit can fingerprint whatever bytes are
        actually on disk; normal retrieval must use get().
        """
        payload, _ = self._read_object(cid, verify=False)
        return payload

    def has(self, cid: ContentId) -> bool:
        return self._manifest_path(cid).exists()

    def pins(self) -> list[PinRecord]:
        from .core import parse_timestamp

        doc = self._load_pins()
        return [
            PinRecord(ContentId.parse(p["cid"]), parse_timestamp(p["pinned_at"]), int(p["ref_count"]))
            for p in doc["pins"]
        ]

    def stored_chunk_bytes(self) -> int:
        """Total bytes across all persisted chunk files (dedup audit)."""
        return sum(p.stat().st_size for p in (self.root / "chunks").glob("*/*"))

    # -- internals ------------------------------------------------------

    def _read_object(self, cid: ContentId, verify: bool) -> tuple[bytes, list[str]]:
        manifest_path = self._manifest_path(cid)
        if not manifest_path.exists():
            raise UnknownContent(cid.render())
        manifest = json.loads(manifest_path.read_text())
        leaves = list(manifest["chunks"])
        parts: list[bytes] = []
        for index, leaf in enumerate(leaves):
            path = self._chunk_path(leaf)
            if not path.exists():
                raise IntegrityViolation(cid, index, f"chunk {index} missing from store")
            data = path.read_bytes()
            if verify and _leaf_hash(data) != leaf:
                raise IntegrityViolation(cid, index, f"chunk {index} bytes do not match leaf hash")
            parts.append(data)
        return b"".join(parts), leaves

    def _load_pins(self) -> dict:
        if not self._pins_path.exists():
            return {"pins": []}
        return json.loads(self._pins_path.read_text())

    def _pin(self, cid: ContentId) -> None:
        doc = self._load_pins()
        for entry in doc["pins"]:
            if entry["cid"] == cid.render():
                entry["ref_count"] += 1
                break
        else:
            doc["pins"].append(
                {"cid": cid.render(), "pinned_at": render_timestamp(utc_now_seconds()), "ref_count": 1}
            )
        _atomic_write(self._pins_path, json.dumps(doc, indent=2).encode())


def _atomic_write(path: Path, data: bytes) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
