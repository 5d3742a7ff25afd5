"""One POST/GET contract over both storage paradigms.

Evidence goes in through post_evidence and comes back through get_evidence
regardless of whether it lives as hash-on-ledger + content-addressed chunks
or as a relational BLOB row. Every operation is timed with a monotonic
clock (wall-clock adjustments must never corrupt measurements), and an
optional latency model injects sleeps inside the timed window to reproduce
controlled network conditions on a single machine.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum

from .cas import CasStore, ContentId, IntegrityViolation, UnknownContent, CasWriteError
from .core import (
    Digest,
    EvidenceMeta,
    HashAlgorithm,
    VerificationResult,
    compute_md5,
    new_evidence_id,
    verify_integrity,
)
from .ledger import (
    Chain,
    EvidenceRegistration,
    LedgerWriteError,
    NoRegistration,
    OutOfRange,
    RegistrationNotFound,
)
from .relational import (
    ConnectionFailed,
    DuplicateKey,
    EvidenceRow,
    PayloadTooLarge,
    RelationalStore,
    RowNotFound,
)

DEFAULT_PAYLOAD_CAP = 256 * 1024 * 1024


class BackendKind(Enum):
    """The two storage paradigms under comparison. Values are the wire names."""

    LEDGER_CAS = "ledger"
    RELATIONAL = "sql"

    @classmethod
    def parse(cls, name: str) -> "BackendKind":
        for kind in cls:
            if kind.value == name:
                return kind
        raise ValueError(f"unknown backend {name!r}")


class EvidenceNotFound(Exception):
    pass


class DanglingRegistration(Exception):
    """The ledger says the evidence exists but the content store cannot produce it.

    Kept distinct from plain not-found because it is forensically meaningful.
    """


class StoreFailed(Exception):
    def __init__(self, kind: "BackendKind", cause: BaseException):
        super().__init__(f"{kind.value} backend failure: {cause}")
        self.kind = kind
        self.cause = cause


@dataclass(frozen=True)
class Locator:
    """Backend-qualified address of one stored evidence item.

    Ledger items are addressed by block number (the registry's native key);
    the evidence id rides along for listings and the unified API. Relational
    items are addressed by evidence id alone.
    """

    kind: BackendKind
    evidence_id: str
    block_number: int | None = None

    def __post_init__(self) -> None:
        if self.kind is BackendKind.LEDGER_CAS and self.block_number is None:
            raise ValueError("ledger locators must carry a block number")
        if self.kind is BackendKind.RELATIONAL and self.block_number is not None:
            raise ValueError("relational locators carry an evidence id only")


@dataclass(frozen=True)
class TimedResult:
    """One measured operation on the monotonic clock: seconds = ended - started."""

    started_at: float
    ended_at: float
    seconds: float

    @classmethod
    def between(cls, started_at: float, ended_at: float) -> "TimedResult":
        return cls(started_at=started_at, ended_at=ended_at, seconds=ended_at - started_at)


@dataclass(frozen=True)
class LatencyModel:
    """Fixed-delay-plus-bandwidth network simulation; disabled contributes zero."""

    enabled: bool = False
    base_seconds: float = 0.0
    bandwidth_bytes_per_second: float = float("inf")

    def __post_init__(self) -> None:
        if self.base_seconds < 0:
            raise ValueError("base_seconds must be non-negative")
        if self.bandwidth_bytes_per_second <= 0:
            raise ValueError("bandwidth must be positive")


DISABLED_LATENCY = LatencyModel()


def simulated_delay(model: LatencyModel, transfer_bytes: int) -> float:
    """Seconds of injected delay for a transfer of the given size."""
    if not model.enabled:
        return 0.0
    return model.base_seconds + transfer_bytes / model.bandwidth_bytes_per_second


@dataclass(frozen=True)
class StoreReceipt:
    locator: Locator
    content_id: ContentId | None
    md5: Digest
    timing: TimedResult


@dataclass(frozen=True)
class RetrievedEvidence:
    payload: bytes
    registered_md5: Digest
    timing: TimedResult
    meta: EvidenceMeta


@dataclass(frozen=True)
class ListedEvidence:
    """Merged-listing entry, tagged by backend; never carries payload bytes."""

    backend: BackendKind
    evidence_id: str
    meta: EvidenceMeta
    md5_hex: str
    block_number: int | None


class UnifiedStore:
    """The standardized storage and retrieval surface over both backends."""

    def __init__(
        self,
        cas: CasStore,
        chain: Chain,
        relational: RelationalStore,
        payload_cap_bytes: int = DEFAULT_PAYLOAD_CAP,
        latency: LatencyModel = DISABLED_LATENCY,
        latency_overrides: dict[BackendKind, LatencyModel] | None = None,
    ):
        self.cas = cas
        self.chain = chain
        self.relational = relational
        self.payload_cap_bytes = payload_cap_bytes
        self._latency = latency
        self._latency_overrides = latency_overrides or {}

    def latency_for(self, kind: BackendKind) -> LatencyModel:
        return self._latency_overrides.get(kind, self._latency)

    # -- POST -------------------------------------------------------------

    def post_evidence(self, kind: BackendKind, payload: bytes, meta: EvidenceMeta) -> StoreReceipt:
        """Store a payload on one backend; timing runs to durable commit.

        Ledger path: content-store put, then registry append of
        (evidence id, content id, MD5, metadata). Relational path: one row
        insert carrying payload, hashes, and metadata.
        """
        if len(payload) > self.payload_cap_bytes:
            raise PayloadTooLarge(f"payload of {len(payload)} bytes exceeds cap {self.payload_cap_bytes}")
        if meta.size_bytes != len(payload):
            raise ValueError(f"meta.size_bytes={meta.size_bytes} but payload has {len(payload)} bytes")
        md5 = compute_md5(payload)
        evidence_id = new_evidence_id()
        delay = simulated_delay(self.latency_for(kind), len(payload))

        started = time.perf_counter()
        if delay:
            time.sleep(delay)
        try:
            if kind is BackendKind.LEDGER_CAS:
                cid = self.cas.put(payload)
                reg = EvidenceRegistration(evidence_id=evidence_id, content_id=cid, md5=md5, meta=meta)
                block_number = self.chain.append_registration(reg)
                locator = Locator(kind, evidence_id, block_number)
                content = cid
            else:
                self.relational.insert_evidence(EvidenceRow.build(evidence_id, payload, meta))
                locator = Locator(kind, evidence_id)
                content = None
        except (CasWriteError, LedgerWriteError, ConnectionFailed, DuplicateKey) as exc:
            raise StoreFailed(kind, exc) from exc
        ended = time.perf_counter()
        return StoreReceipt(locator=locator, content_id=content, md5=md5, timing=TimedResult.between(started, ended))

    # -- GET --------------------------------------------------------------

    def get_evidence(self, locator: Locator) -> RetrievedEvidence:
        """Retrieve a payload; timing covers lookup through last payload byte.

        Hash re-verification is deliberately outside the timed window (it is
        a separate, separately timeable operation: verify_evidence).
        """
        started = time.perf_counter()
        if locator.kind is BackendKind.LEDGER_CAS:
            reg = self._lookup_registration(locator)
            try:
                payload = self.cas.get(reg.content_id)
            except UnknownContent as exc:
                raise DanglingRegistration(
                    f"block {locator.block_number} registers {reg.content_id.render()} "
                    "but the content store cannot produce it"
                ) from exc
            registered_md5, meta = reg.md5, reg.meta
        else:
            try:
                row = self.relational.select_evidence(locator.evidence_id)
            except RowNotFound as exc:
                raise EvidenceNotFound(locator.evidence_id) from exc
            payload = row.payload
            registered_md5, meta = Digest(HashAlgorithm.MD5, row.md5_hex), row.meta()
        delay = simulated_delay(self.latency_for(locator.kind), len(payload))
        if delay:
            time.sleep(delay)
        ended = time.perf_counter()
        return RetrievedEvidence(
            payload=payload, registered_md5=registered_md5, timing=TimedResult.between(started, ended), meta=meta
        )

    # -- verification -------------------------------------------------------

    def verify_evidence(self, locator: Locator) -> VerificationResult:
        """Recompute MD5 over whatever bytes the backend actually holds.

        Reads are deliberately unverified at the storage layer so that
        tampered bytes produce a Fail verdict instead of a storage error;
        a verdict comes back for every locator ever issued.
        """
        if locator.kind is BackendKind.LEDGER_CAS:
            reg = self._lookup_registration(locator)
            try:
                payload = self.cas.get_unverified(reg.content_id)
            except (UnknownContent, IntegrityViolation) as exc:
                raise DanglingRegistration(str(exc)) from exc
            expected = reg.md5
        else:
            try:
                row = self.relational.select_evidence(locator.evidence_id)
            except RowNotFound as exc:
                raise EvidenceNotFound(locator.evidence_id) from exc
            payload, expected = row.payload, Digest(HashAlgorithm.MD5, row.md5_hex)
        return verify_integrity(payload, expected)

    # -- addressing and listing ----------------------------------------------

    def resolve_locator(
        self, kind: BackendKind, evidence_id: str | None = None, block_number: int | None = None
    ) -> Locator:
        """Build a full locator from whichever key the caller has."""
        if kind is BackendKind.RELATIONAL:
            if evidence_id is None:
                raise ValueError("relational evidence is addressed by evidence id")
            return Locator(kind, evidence_id)
        if block_number is not None:
            try:
                reg = self.chain.lookup_by_block_number(block_number)
            except (NoRegistration, OutOfRange) as exc:
                raise EvidenceNotFound(f"block {block_number}") from exc
            return Locator(kind, reg.evidence_id, block_number)
        if evidence_id is None:
            raise ValueError("ledger evidence needs an evidence id or block number")
        try:
            number, _ = self.chain.lookup_by_evidence_id(evidence_id)
        except RegistrationNotFound as exc:
            raise EvidenceNotFound(evidence_id) from exc
        return Locator(kind, evidence_id, number)

    def list_evidence(self, case_filter: str | None = None) -> list[ListedEvidence]:
        """Both backends merged, tagged, ordered by submission time; no payloads."""
        entries = [
            ListedEvidence(
                backend=BackendKind.RELATIONAL,
                evidence_id=listing.evidence_id,
                meta=listing.meta,
                md5_hex=listing.md5_hex,
                block_number=None,
            )
            for listing in self.relational.list_evidence(case_filter)
        ]
        for number, reg in self.chain.registrations():
            if case_filter is not None and reg.meta.case_id != case_filter:
                continue
            entries.append(
                ListedEvidence(
                    backend=BackendKind.LEDGER_CAS,
                    evidence_id=reg.evidence_id,
                    meta=reg.meta,
                    md5_hex=reg.md5.hex,
                    block_number=number,
                )
            )
        entries.sort(key=lambda e: e.meta.submitted_at)
        return entries

    def _lookup_registration(self, locator: Locator) -> EvidenceRegistration:
        assert locator.block_number is not None
        try:
            return self.chain.lookup_by_block_number(locator.block_number)
        except (NoRegistration, OutOfRange) as exc:
            raise EvidenceNotFound(f"block {locator.block_number}") from exc
