"""The append-only evidence registry and its tamper evidence.

Each registration lands in its own hash-linked block. Mutating any byte of
the persisted log, anywhere, makes revalidation report exactly where the
chain broke.
"""

import os
import random
import tempfile

from twinvault import Chain, EvidenceMeta, EvidenceRegistration, validate_log
from twinvault import compute_md5, content_id, new_evidence_id
from twinvault.core import utc_now_seconds

workdir = tempfile.mkdtemp(prefix="twinvault-demo-")
log_path = os.path.join(workdir, "ledger.log")
chain = Chain(log_path)

for i in range(4):
    payload = f"twin model {i}".encode()
    registration = EvidenceRegistration(
        evidence_id=new_evidence_id(),
        content_id=content_id(payload),
        md5=compute_md5(payload),
        meta=EvidenceMeta(
            case_id="case-2026-017",
            filename=f"scene-{i}.glb",
            media_type="model/gltf-binary",
            size_bytes=len(payload),
            submitted_at=utc_now_seconds(),
            submitter="demo",
        ),
    )
    number = chain.append_registration(registration)
    print(f"registered evidence in block {number}")

report = validate_log(log_path)
print("\nfresh log valid:", report.valid)

raw = bytearray(open(log_path, "rb").read())
position = random.randrange(len(raw) - 1)
raw[position] ^= 0x08
open(log_path, "wb").write(bytes(raw))

report = validate_log(log_path)
print(f"\nafter flipping one bit at byte {position}:")
print("  valid          :", report.valid)
print("  first bad block:", report.first_bad_index)
print("  reason         :", report.reason)
