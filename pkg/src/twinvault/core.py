"""Domain types and cryptographic fingerprinting shared by every storage backend.

Every piece of evidence is fingerprinted with MD5 (the primary verdict
fingerprint) and SHA-256 (recorded alongside because MD5 is collision-broken
and a forensic store should not rely on it alone).
"""

from __future__ import annotations

import hashlib
import re
import secrets
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum

_HEX_RE = re.compile(r"^[0-9a-f]+$")


class HashAlgorithm(Enum):
    MD5 = "md5"
    SHA256 = "sha256"


_HEX_LENGTH = {HashAlgorithm.MD5: 32, HashAlgorithm.SHA256: 64}


class UnsupportedAlgorithm(Exception):
    """Raised when a digest names an algorithm this store cannot recompute."""


@dataclass(frozen=True)
class Digest:
    """A cryptographic fingerprint: algorithm plus lowercase hex."""

    algorithm: HashAlgorithm
    hex: str

    def __post_init__(self) -> None:
        expected = _HEX_LENGTH[self.algorithm]
        if len(self.hex) != expected or not _HEX_RE.match(self.hex):
            raise ValueError(
                f"{self.algorithm.value} digest must be {expected} lowercase hex chars, "
                f"got {self.hex!r}"
            )

    def render(self) -> str:
        """Wire form used in every file format and API: ``md5:<hex>`` / ``sha256:<hex>``."""
        return f"{self.algorithm.value}:{self.hex}"

    @classmethod
    def parse(cls, rendered: str) -> "Digest":
        prefix, _, hexpart = rendered.partition(":")
        for algo in HashAlgorithm:
            if algo.value == prefix:
                return cls(algo, hexpart)
        raise ValueError(f"unknown digest prefix in {rendered!r}")


def new_evidence_id() -> str:
    """128-bit random identifier as 32 lowercase hex chars.

    Random (not sequential) so identifiers leak no ordering information
    across backends.
    """
    return secrets.token_hex(16)


_EVIDENCE_ID_RE = re.compile(r"^[0-9a-f]{32}$")


def is_evidence_id(value: str) -> bool:
    return bool(_EVIDENCE_ID_RE.match(value))


def utc_now_seconds() -> datetime:
    """Current UTC time truncated to whole seconds (metadata resolution)."""
    return datetime.now(timezone.utc).replace(microsecond=0)


def render_timestamp(ts: datetime) -> str:
    """Canonical second-resolution UTC rendering: ``YYYY-MM-DDTHH:MM:SSZ``."""
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def parse_timestamp(rendered: str) -> datetime:
    return datetime.strptime(rendered, "%Y-%m-%dT%H:%M:%SZ").replace(tzinfo=timezone.utc)


@dataclass(frozen=True)
class EvidenceMeta:
    """Descriptive metadata submitted alongside a payload.

    size_bytes must equal the actual payload length at submission; the
    unified interface enforces this before any backend write.
    """

    case_id: str
    filename: str
    media_type: str
    size_bytes: int
    submitted_at: datetime
    submitter: str

    def __post_init__(self) -> None:
        if self.size_bytes < 0:
            raise ValueError("size_bytes must be non-negative")


class Verdict(Enum):
    PASS = "Pass"
    FAIL = "Fail"


@dataclass(frozen=True)
class VerificationResult:
    """Binary integrity outcome plus both digests for the audit trail."""

    verdict: Verdict
    expected: Digest
    actual: Digest


def compute_md5(payload: bytes) -> Digest:
    """MD5 fingerprint of a payload (empty payload allowed)."""
    return Digest(HashAlgorithm.MD5, hashlib.md5(payload).hexdigest())


def compute_sha256(payload: bytes) -> Digest:
    """SHA-256 fingerprint of a payload."""
    return Digest(HashAlgorithm.SHA256, hashlib.sha256(payload).hexdigest())


_COMPUTE = {HashAlgorithm.MD5: compute_md5, HashAlgorithm.SHA256: compute_sha256}


def verify_integrity(payload: bytes, expected: Digest) -> VerificationResult:
    """Recompute the payload's digest and compare against the expected one.

    Pass iff the recomputed digest equals ``expected`` byte for byte.
    Raises UnsupportedAlgorithm on a digest this build cannot recompute
    (a configuration fault, not a Fail verdict).
    """
    compute = _COMPUTE.get(expected.algorithm)
    if compute is None:
        raise UnsupportedAlgorithm(f"cannot recompute {expected.algorithm!r}")
    actual = compute(payload)
    verdict = Verdict.PASS if actual == expected else Verdict.FAIL
    return VerificationResult(verdict=verdict, expected=expected, actual=actual)
