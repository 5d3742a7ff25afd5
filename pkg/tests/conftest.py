import json

import pytest
import sqlalchemy as sa

from twinvault.backends import UnifiedStore
from twinvault.cas import CasStore
from twinvault.core import EvidenceMeta, utc_now_seconds
from twinvault.ledger import Chain
from twinvault.relational import RelationalConfig, RelationalStore


def make_meta(payload: bytes, case_id="case-001", filename="twin.bin",
              media_type="application/octet-stream", submitter="tester") -> EvidenceMeta:
    return EvidenceMeta(
        case_id=case_id,
        filename=filename,
        media_type=media_type,
        size_bytes=len(payload),
        submitted_at=utc_now_seconds(),
        submitter=submitter,
    )


def make_unified(root, **kwargs) -> UnifiedStore:
    cas = CasStore(root / "cas")
    chain = Chain(root / "ledger.log")
    relational = RelationalStore.open(RelationalConfig(url=f"sqlite:///{root / 'evidence.db'}"))
    return UnifiedStore(cas, chain, relational, **kwargs)


@pytest.fixture
def unified(tmp_path) -> UnifiedStore:
    return make_unified(tmp_path)


def corrupt_cas_chunk(unified: UnifiedStore, cid, chunk_index: int = 0) -> None:
    """Flip one byte of a persisted chunk file, out of band."""
    manifest = json.loads(
        (unified.cas.root / "objects" / cid.root[:2] / f"{cid.root}.json").read_text()
    )
    leaf = manifest["chunks"][chunk_index]
    path = unified.cas.root / "chunks" / leaf[:2] / leaf
    raw = bytearray(path.read_bytes())
    raw[0] ^= 0x55
    path.write_bytes(bytes(raw))


def corrupt_relational_payload(unified: UnifiedStore, evidence_id: str, position: int = 0) -> None:
    """Flip one byte of a stored BLOB via direct SQL, out of band."""
    with unified.relational.engine.begin() as conn:
        payload = conn.execute(
            sa.text("SELECT payload FROM evidence WHERE evidence_id = :e"), {"e": evidence_id}
        ).scalar_one()
        tampered = bytearray(payload)
        tampered[position] ^= 0x55
        conn.execute(
            sa.text("UPDATE evidence SET payload = :p WHERE evidence_id = :e"),
            {"p": bytes(tampered), "e": evidence_id},
        )
