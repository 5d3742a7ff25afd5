"""One POST/GET surface over both storage paradigms.

The same payload goes to the ledger-plus-content-store backend and the
relational BLOB backend; both hand back byte-identical evidence with the
same fingerprint, each with its own timing measurement.
"""

import os
import tempfile

from twinvault import BackendKind, CasStore, Chain, RelationalConfig, RelationalStore, UnifiedStore
from twinvault import EvidenceMeta
from twinvault.core import utc_now_seconds

workdir = tempfile.mkdtemp(prefix="twinvault-demo-")
unified = UnifiedStore(
    cas=CasStore(os.path.join(workdir, "cas")),
    chain=Chain(os.path.join(workdir, "ledger.log")),
    relational=RelationalStore.open(RelationalConfig(url=f"sqlite:///{workdir}/evidence.db")),
)

payload = os.urandom(2_000_000)
meta = EvidenceMeta(
    case_id="case-2026-017",
    filename="vehicle.glb",
    media_type="model/gltf-binary",
    size_bytes=len(payload),
    submitted_at=utc_now_seconds(),
    submitter="demo",
)

for kind in BackendKind:
    receipt = unified.post_evidence(kind, payload, meta)
    retrieved = unified.get_evidence(receipt.locator)
    verdict = unified.verify_evidence(receipt.locator)
    print(f"backend={kind.value}")
    print(f"  locator      : evidence_id={receipt.locator.evidence_id}"
          + (f" block={receipt.locator.block_number}" if receipt.locator.block_number else ""))
    if receipt.content_id:
        print(f"  content id   : {receipt.content_id.render()}")
    print(f"  md5          : {receipt.md5.render()}")
    print(f"  post seconds : {receipt.timing.seconds:.6f}")
    print(f"  get seconds  : {retrieved.timing.seconds:.6f}")
    print(f"  round trip   : {retrieved.payload == payload}")
    print(f"  verdict      : {verdict.verdict.value}")
    print()

print("merged listing:")
for entry in unified.list_evidence():
    print(f"  [{entry.backend.value:>6}] {entry.meta.filename} "
          f"{entry.meta.size_bytes}B md5:{entry.md5_hex[:12]}…")
