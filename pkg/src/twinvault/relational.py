"""Relational BLOB storage backend: payload bytes live in the database row.

The logical schema is engine-agnostic (SQLAlchemy Core); the reference
configuration is an embedded SQLite file so everything runs with no external
service, and the connection URL is the hook for pointing the same schema at
a hosted MySQL server instead.

Inserts are fail-fast: an evidence row whose recorded hashes do not match
its payload is refused, because a forensic store must not accept mislabeled
evidence.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime

import sqlalchemy as sa
from sqlalchemy.dialects.mysql import LONGBLOB

from .core import EvidenceMeta, compute_md5, compute_sha256, parse_timestamp, render_timestamp

DEFAULT_PAYLOAD_CAP = 256 * 1024 * 1024  # covers 200 MB evidence files with headroom
DEFAULT_TIMEOUT_S = 10.0


class ConnectionFailed(Exception):
    pass


class SchemaMismatch(Exception):
    pass


class DuplicateKey(Exception):
    pass


class IntegrityRejected(Exception):
    """Row refused at insert: recorded hashes or size do not match the payload."""


class RowNotFound(Exception):
    pass


class PayloadTooLarge(Exception):
    pass


@dataclass(frozen=True)
class RelationalConfig:
    """Connection settings. url is any SQLAlchemy URL, e.g.
    ``sqlite:///path/evidence.db`` or ``mysql+pymysql://user:pw@host/db``."""

    url: str
    connect_timeout_s: float = DEFAULT_TIMEOUT_S
    read_timeout_s: float = DEFAULT_TIMEOUT_S
    write_timeout_s: float = DEFAULT_TIMEOUT_S
    payload_cap_bytes: int = DEFAULT_PAYLOAD_CAP


@dataclass(frozen=True)
class EvidenceRow:
    evidence_id: str
    case_id: str
    filename: str
    media_type: str
    size_bytes: int
    md5_hex: str
    sha256_hex: str
    created_at: datetime
    submitter: str
    payload: bytes

    @classmethod
    def build(cls, evidence_id: str, payload: bytes, meta: EvidenceMeta) -> "EvidenceRow":
        """Construct a row whose hash columns are computed from the payload."""
        return cls(
            evidence_id=evidence_id,
            case_id=meta.case_id,
            filename=meta.filename,
            media_type=meta.media_type,
            size_bytes=len(payload),
            md5_hex=compute_md5(payload).hex,
            sha256_hex=compute_sha256(payload).hex,
            created_at=meta.submitted_at,
            submitter=meta.submitter,
            payload=payload,
        )

    def meta(self) -> EvidenceMeta:
        return EvidenceMeta(
            case_id=self.case_id,
            filename=self.filename,
            media_type=self.media_type,
            size_bytes=self.size_bytes,
            submitted_at=self.created_at,
            submitter=self.submitter,
        )


@dataclass(frozen=True)
class EvidenceListing:
    """One listing entry; payload bytes are never part of a listing."""

    evidence_id: str
    meta: EvidenceMeta
    md5_hex: str


_metadata = sa.MetaData()

# created_at is stored as the canonical second-resolution UTC string, which
# sorts chronologically and round-trips identically on every dialect.
EVIDENCE_TABLE = sa.Table(
    "evidence",
    _metadata,
    sa.Column("evidence_id", sa.String(32), primary_key=True),
    sa.Column("case_id", sa.String(255), nullable=False, index=True),
    sa.Column("filename", sa.String(1024), nullable=False),
    sa.Column("media_type", sa.String(255), nullable=False),
    sa.Column("size_bytes", sa.BigInteger, nullable=False),
    sa.Column("md5_hex", sa.String(32), nullable=False),
    sa.Column("sha256_hex", sa.String(64), nullable=False),
    sa.Column("created_at", sa.String(20), nullable=False),
    sa.Column("submitter", sa.String(255), nullable=False),
    sa.Column("payload", sa.LargeBinary().with_variant(LONGBLOB(), "mysql"), nullable=False),
)

_COLUMN_NAMES = {c.name for c in EVIDENCE_TABLE.columns}

_LISTING_COLUMNS = [
    EVIDENCE_TABLE.c.evidence_id,
    EVIDENCE_TABLE.c.case_id,
    EVIDENCE_TABLE.c.filename,
    EVIDENCE_TABLE.c.media_type,
    EVIDENCE_TABLE.c.size_bytes,
    EVIDENCE_TABLE.c.md5_hex,
    EVIDENCE_TABLE.c.created_at,
    EVIDENCE_TABLE.c.submitter,
]


def _connect_args(config: RelationalConfig) -> dict:
    if config.url.startswith("sqlite"):
        return {"timeout": config.connect_timeout_s}
    if config.url.startswith("mysql"):
        return {
            "connect_timeout": int(config.connect_timeout_s),
            "read_timeout": int(config.read_timeout_s),
            "write_timeout": int(config.write_timeout_s),
        }
    return {}


class RelationalStore:
    """Evidence-as-BLOB store over a relational engine.

    Writes are serialized per store handle; readers never observe a
    partially inserted row (each insert is one transaction). There is no
    deletion API: evidence retention is forever.
    """

    def __init__(self, config: RelationalConfig):
        self.config = config
        try:
            self.engine = sa.create_engine(config.url, connect_args=_connect_args(config))
            with self.engine.connect():
                pass
        except sa.exc.SQLAlchemyError as exc:
            raise ConnectionFailed(str(exc)) from exc

    @classmethod
    def open(cls, config: RelationalConfig) -> "RelationalStore":
        store = cls(config)
        store.init_schema()
        return store

    def init_schema(self) -> None:
        """Create the evidence table if absent; a no-op when it already matches.

        An existing table with different columns is a SchemaMismatch, never
        silently adapted.
        """
        inspector = sa.inspect(self.engine)
        if inspector.has_table(EVIDENCE_TABLE.name):
            existing = {c["name"] for c in inspector.get_columns(EVIDENCE_TABLE.name)}
            if existing != _COLUMN_NAMES:
                missing = sorted(_COLUMN_NAMES - existing)
                extra = sorted(existing - _COLUMN_NAMES)
                raise SchemaMismatch(f"evidence table incompatible (missing={missing}, extra={extra})")
            return
        try:
            _metadata.create_all(self.engine, checkfirst=True)
        except sa.exc.SQLAlchemyError as exc:
            raise ConnectionFailed(str(exc)) from exc

    def insert_evidence(self, row: EvidenceRow) -> str:
        if len(row.payload) > self.config.payload_cap_bytes:
            raise PayloadTooLarge(
                f"payload of {len(row.payload)} bytes exceeds cap {self.config.payload_cap_bytes}"
            )
        if row.size_bytes != len(row.payload):
            raise IntegrityRejected("size_bytes does not match payload length")
        if row.md5_hex != compute_md5(row.payload).hex:
            raise IntegrityRejected("md5_hex does not match payload")
        if row.sha256_hex != compute_sha256(row.payload).hex:
            raise IntegrityRejected("sha256_hex does not match payload")
        values = {
            "evidence_id": row.evidence_id,
            "case_id": row.case_id,
            "filename": row.filename,
            "media_type": row.media_type,
            "size_bytes": row.size_bytes,
            "md5_hex": row.md5_hex,
            "sha256_hex": row.sha256_hex,
            "created_at": render_timestamp(row.created_at),
            "submitter": row.submitter,
            "payload": row.payload,
        }
        try:
            with self.engine.begin() as conn:
                conn.execute(EVIDENCE_TABLE.insert().values(**values))
        except sa.exc.IntegrityError as exc:
            raise DuplicateKey(row.evidence_id) from exc
        return row.evidence_id

    def select_evidence(self, evidence_id: str) -> EvidenceRow:
        with self.engine.connect() as conn:
            record = conn.execute(
                sa.select(EVIDENCE_TABLE).where(EVIDENCE_TABLE.c.evidence_id == evidence_id)
            ).mappings().first()
        if record is None:
            raise RowNotFound(evidence_id)
        return EvidenceRow(
            evidence_id=record["evidence_id"],
            case_id=record["case_id"],
            filename=record["filename"],
            media_type=record["media_type"],
            size_bytes=record["size_bytes"],
            md5_hex=record["md5_hex"],
            sha256_hex=record["sha256_hex"],
            created_at=parse_timestamp(record["created_at"]),
            submitter=record["submitter"],
            payload=bytes(record["payload"]),
        )

    def list_evidence(self, case_filter: str | None = None) -> list[EvidenceListing]:
        """Listing without payloads, ordered by created_at ascending.

        Only the listing columns are selected, so payload bytes never leave
        the database for this query.
        """
        query = sa.select(*_LISTING_COLUMNS).order_by(EVIDENCE_TABLE.c.created_at.asc())
        if case_filter is not None:
            query = query.where(EVIDENCE_TABLE.c.case_id == case_filter)
        with self.engine.connect() as conn:
            records = conn.execute(query).mappings().all()
        return [
            EvidenceListing(
                evidence_id=r["evidence_id"],
                meta=EvidenceMeta(
                    case_id=r["case_id"],
                    filename=r["filename"],
                    media_type=r["media_type"],
                    size_bytes=r["size_bytes"],
                    submitted_at=parse_timestamp(r["created_at"]),
                    submitter=r["submitter"],
                ),
                md5_hex=r["md5_hex"],
            )
            for r in records
        ]

    def verify_all(self) -> list[tuple[str, bool]]:
        """Full-table sweep: recompute MD5 over every payload against md5_hex."""
        results = []
        with self.engine.connect() as conn:
            ids = [r[0] for r in conn.execute(sa.select(EVIDENCE_TABLE.c.evidence_id))]
        for evidence_id in ids:
            row = self.select_evidence(evidence_id)
            results.append((evidence_id, compute_md5(row.payload).hex == row.md5_hex))
        return results
