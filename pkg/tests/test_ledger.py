import hashlib
import random

import pytest

from twinvault.cas import content_id
from twinvault.core import EvidenceMeta, compute_md5, new_evidence_id, parse_timestamp
from twinvault.ledger import (
    Block,
    BlockHeader,
    Chain,
    EvidenceRegistration,
    GENESIS_PREV_HASH,
    LedgerCorrupt,
    LedgerWriteError,
    NoRegistration,
    OutOfRange,
    RegistrationNotFound,
    block_hash_of,
    block_to_line,
    canonical_registration_bytes,
    genesis,
    tx_digest_of,
    validate_chain,
    validate_log,
)

FIXED_CLOCK = lambda: 1_700_000_000


def make_registration(payload: bytes = b"twin payload", case_id: str = "case-7") -> EvidenceRegistration:
    return EvidenceRegistration(
        evidence_id=new_evidence_id(),
        content_id=content_id(payload),
        md5=compute_md5(payload),
        meta=EvidenceMeta(
            case_id=case_id,
            filename="model.glb",
            media_type="model/gltf-binary",
            size_bytes=len(payload),
            submitted_at=parse_timestamp("2026-01-15T10:30:00Z"),
            submitter="tester",
        ),
    )


def test_genesis_conventions():
    block = genesis(FIXED_CLOCK())
    assert block.header.index == 0
    assert block.header.prev_hash == GENESIS_PREV_HASH == "0" * 64
    assert block.registration is None
    assert block.header.tx_digest == hashlib.sha256(b"").hexdigest()
    assert genesis(FIXED_CLOCK()).block_hash == block.block_hash


def test_block_hash_definition():
    header = BlockHeader(index=1, prev_hash="a" * 64, tx_digest="b" * 64, timestamp=1_700_000_000)
    preimage = f"1|{'a' * 64}|{'b' * 64}|1700000000".encode("ascii")
    assert block_hash_of(header) == hashlib.sha256(preimage).hexdigest()


def test_block_hash_changes_with_any_field():
    rng = random.Random(17)
    for _ in range(50):
        header = BlockHeader(
            index=rng.randrange(1, 10_000),
            prev_hash=rng.randbytes(32).hex(),
            tx_digest=rng.randbytes(32).hex(),
            timestamp=rng.randrange(1, 2_000_000_000),
        )
        # independent recomputation of the preimage
        oracle = hashlib.sha256(
            f"{header.index}|{header.prev_hash}|{header.tx_digest}|{header.timestamp}".encode()
        ).hexdigest()
        assert block_hash_of(header) == oracle
        variants = [
            BlockHeader(header.index + 1, header.prev_hash, header.tx_digest, header.timestamp),
            BlockHeader(header.index, rng.randbytes(32).hex(), header.tx_digest, header.timestamp),
            BlockHeader(header.index, header.prev_hash, rng.randbytes(32).hex(), header.timestamp),
            BlockHeader(header.index, header.prev_hash, header.tx_digest, header.timestamp + 1),
        ]
        for variant in variants:
            assert block_hash_of(variant) != block_hash_of(header)


def test_append_links_and_returns_block_number(tmp_path):
    chain = Chain(tmp_path / "ledger.log", clock=FIXED_CLOCK)
    reg = make_registration()
    number = chain.append_registration(reg)
    assert number == 1
    assert chain.blocks[1].header.prev_hash == chain.blocks[0].block_hash
    assert chain.lookup_by_block_number(number) == reg


def test_chain_length_counts_appends(tmp_path):
    chain = Chain(tmp_path / "ledger.log", clock=FIXED_CLOCK)
    for i in range(5):
        chain.append_registration(make_registration(payload=bytes([i])))
    assert len(chain) == 6


def test_lookup_boundaries(tmp_path):
    chain = Chain(tmp_path / "ledger.log", clock=FIXED_CLOCK)
    chain.append_registration(make_registration())
    with pytest.raises(NoRegistration):
        chain.lookup_by_block_number(0)
    with pytest.raises(OutOfRange):
        chain.lookup_by_block_number(len(chain))


def test_lookup_by_evidence_id(tmp_path):
    chain = Chain(tmp_path / "ledger.log", clock=FIXED_CLOCK)
    reg = make_registration()
    number = chain.append_registration(reg)
    assert chain.lookup_by_evidence_id(reg.evidence_id) == (number, reg)
    with pytest.raises(RegistrationNotFound):
        chain.lookup_by_evidence_id("f" * 32)


def test_resubmission_earliest_block_wins(tmp_path):
    chain = Chain(tmp_path / "ledger.log", clock=FIXED_CLOCK)
    reg = make_registration()
    first = chain.append_registration(reg)
    chain.append_registration(reg)
    number, _ = chain.lookup_by_evidence_id(reg.evidence_id)
    assert number == first


def test_fresh_chain_validates(tmp_path):
    chain = Chain(tmp_path / "ledger.log", clock=FIXED_CLOCK)
    for i in range(4):
        chain.append_registration(make_registration(payload=bytes([i])))
        report = validate_chain(chain)
        assert report.valid, report.reason
    assert validate_log(chain.path).valid


def test_reload_from_disk_preserves_blocks(tmp_path):
    path = tmp_path / "ledger.log"
    chain = Chain(path, clock=FIXED_CLOCK)
    regs = [make_registration(payload=bytes([i])) for i in range(3)]
    for reg in regs:
        chain.append_registration(reg)
    reopened = Chain(path, clock=FIXED_CLOCK)
    assert reopened.blocks == chain.blocks
    # re-reading yields byte-identical canonical encodings
    assert [block_to_line(b) for b in reopened.blocks] == [block_to_line(b) for b in chain.blocks]


def test_canonical_registration_encoding_is_stable():
    reg = make_registration()
    assert canonical_registration_bytes(reg) == canonical_registration_bytes(reg)
    assert tx_digest_of(reg) == hashlib.sha256(canonical_registration_bytes(reg)).hexdigest()


def test_single_bit_mutations_always_detected(tmp_path):
    path = tmp_path / "ledger.log"
    chain = Chain(path, clock=FIXED_CLOCK)
    for i in range(5):
        chain.append_registration(make_registration(payload=bytes([i]), case_id=f"case-{i}"))
    original = path.read_bytes()
    rng = random.Random(0xBEEF)
    for trial in range(120):
        mutated = bytearray(original)
        position = rng.randrange(len(mutated))
        mutated[position] ^= 1 << rng.randrange(8)
        path.write_bytes(bytes(mutated))
        report = validate_log(path)
        assert not report.valid, f"trial {trial}: bit flip at {position} went undetected"
        assert report.first_bad_index is not None
    path.write_bytes(original)
    assert validate_log(path).valid


def test_swapped_blocks_detected(tmp_path):
    path = tmp_path / "ledger.log"
    chain = Chain(path, clock=FIXED_CLOCK)
    for i in range(4):
        chain.append_registration(make_registration(payload=bytes([i])))
    lines = path.read_text().splitlines()
    lines[2], lines[3] = lines[3], lines[2]
    path.write_text("\n".join(lines) + "\n")
    report = validate_log(path)
    assert not report.valid
    assert report.first_bad_index == 2


def test_corrupt_log_refuses_to_open(tmp_path):
    path = tmp_path / "ledger.log"
    chain = Chain(path, clock=FIXED_CLOCK)
    chain.append_registration(make_registration())
    raw = bytearray(path.read_bytes())
    raw[10] ^= 0x04
    path.write_bytes(bytes(raw))
    with pytest.raises(LedgerCorrupt):
        Chain(path)


def test_failed_persist_leaves_chain_unchanged(tmp_path):
    chain = Chain(tmp_path / "ledger.log", clock=FIXED_CLOCK)
    chain.append_registration(make_registration())
    before = chain.blocks
    log_bytes = chain.path.read_bytes()
    chain.path = tmp_path / "no-such-dir" / "ledger.log"
    with pytest.raises(LedgerWriteError):
        chain.append_registration(make_registration(payload=b"next"))
    assert chain.blocks == before
    assert (tmp_path / "ledger.log").read_bytes() == log_bytes


def test_validation_of_missing_and_empty_logs(tmp_path):
    assert not validate_log(tmp_path / "absent.log").valid
    empty = tmp_path / "empty.log"
    empty.write_text("")
    assert not validate_log(empty).valid
