"""The content-addressed store: self-verifying, deduplicating retrieval.

A payload's address is the Merkle root of its chunks, so the same bytes
always live at the same address, storing a file twice costs nothing, and a
corrupted chunk can never be returned silently.
"""

import os
import tempfile

from twinvault import CasStore, IntegrityViolation, content_id

workdir = tempfile.mkdtemp(prefix="twinvault-demo-")
store = CasStore(os.path.join(workdir, "cas"))

payload = os.urandom(600_000)  # spans multiple 256 KiB chunks
cid = store.put(payload)
print("content id       :", cid.render())
print("pure recompute   :", content_id(payload).render())
print("round trip equal :", store.get(cid) == payload)

footprint = store.stored_chunk_bytes()
store.put(payload)  # same bytes again
print("\nsecond put of identical bytes:")
print("  stored bytes unchanged:", store.stored_chunk_bytes() == footprint)
print("  pin ref_count         :", store.pins()[0].ref_count)

# corrupt one persisted chunk out-of-band and watch retrieval refuse
manifest_dir = os.path.join(workdir, "cas", "objects", cid.root[:2])
import json

manifest = json.load(open(os.path.join(manifest_dir, cid.root + ".json")))
victim = manifest["chunks"][1]
chunk_file = os.path.join(workdir, "cas", "chunks", victim[:2], victim)
raw = bytearray(open(chunk_file, "rb").read())
raw[0] ^= 0xFF
open(chunk_file, "wb").write(bytes(raw))

try:
    store.get(cid)
except IntegrityViolation as violation:
    print("\nafter corrupting a chunk on disk:")
    print("  retrieval refused, bad chunk index", violation.chunk_index)
