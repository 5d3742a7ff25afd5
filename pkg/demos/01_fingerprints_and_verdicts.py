"""Fingerprinting evidence and reading the Pass/Fail verdict.

Every payload entering the vault is fingerprinted with MD5 (the verdict
fingerprint) and SHA-256 (the collision-resistant companion). Verification
recomputes the digest and compares: any change to the bytes flips the
verdict to Fail.
"""

from twinvault import compute_md5, compute_sha256, verify_integrity

payload = b"crime scene reconstruction, north wall, 2026-02-11"

md5 = compute_md5(payload)
sha = compute_sha256(payload)
print("payload bytes :", len(payload))
print("md5           :", md5.render())
print("sha256        :", sha.render())

result = verify_integrity(payload, md5)
print("\nuntouched payload  ->", result.verdict.value)

tampered = bytearray(payload)
tampered[10] ^= 0x01  # a single flipped bit
result = verify_integrity(bytes(tampered), md5)
print("one bit flipped    ->", result.verdict.value)
print("  expected:", result.expected.render())
print("  actual  :", result.actual.render())
