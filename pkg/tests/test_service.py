import random

import pytest
from fastapi.testclient import TestClient

from twinvault.service import create_app
from conftest import corrupt_cas_chunk, corrupt_relational_payload, make_unified


@pytest.fixture
def store(tmp_path):
    return make_unified(tmp_path)


@pytest.fixture
def client(store):
    return TestClient(create_app(store))


def upload(client, payload: bytes, backend: str, case_id="case-1", filename="model.glb",
           media_type="model/gltf-binary"):
    return client.post(
        "/api/evidence",
        files={"file": (filename, payload, media_type)},
        data={"backend": backend, "case_id": case_id, "description": "uploaded in test"},
    )


def test_upload_to_ledger(client):
    response = upload(client, b"gltf bytes", "ledger")
    assert response.status_code == 201
    body = response.json()
    assert body["locator"]["backend"] == "ledger"
    assert body["locator"]["block_number"] >= 1
    assert body["content_id"].startswith("twin-cas-v1:")
    assert body["md5"].startswith("md5:")
    assert body["timing_seconds"] >= 0


def test_upload_to_sql(client):
    response = upload(client, b"gltf bytes", "sql")
    assert response.status_code == 201
    body = response.json()
    assert body["locator"]["block_number"] is None
    assert body["content_id"] is None


def test_unknown_backend_is_400(client):
    assert upload(client, b"x", "granite").status_code == 400


def test_oversize_upload_is_413(tmp_path):
    client = TestClient(create_app(make_unified(tmp_path, payload_cap_bytes=64)))
    assert upload(client, bytes(100), "sql").status_code == 413


def test_download_round_trip_with_headers(client):
    payload = random.Random(3).randbytes(300_000)
    body = upload(client, payload, "ledger").json()
    evidence_id = body["locator"]["evidence_id"]
    response = client.get(f"/api/evidence/{evidence_id}", params={"backend": "ledger"})
    assert response.status_code == 200
    assert response.content == payload
    assert response.headers["X-MD5"] == body["md5"]
    assert float(response.headers["X-Timing-Seconds"]) >= 0
    assert response.headers["content-type"] == "model/gltf-binary"


def test_fetch_by_block_matches_fetch_by_id(client):
    payload = b"block addressable"
    body = upload(client, payload, "ledger").json()
    evidence_id = body["locator"]["evidence_id"]
    block = body["locator"]["block_number"]
    by_id = client.get(f"/api/evidence/{evidence_id}", params={"backend": "ledger"})
    by_block = client.get(f"/api/evidence/{evidence_id}", params={"backend": "ledger", "block": block})
    assert by_id.content == by_block.content == payload


def test_unknown_evidence_is_404(client):
    assert client.get("/api/evidence/" + "0" * 32, params={"backend": "sql"}).status_code == 404
    assert client.get("/api/evidence/" + "0" * 32, params={"backend": "ledger"}).status_code == 404


def test_verify_pass_fail_and_404(client, store):
    payload = b"evidence under audit"
    sql_body = upload(client, payload, "sql").json()
    sql_id = sql_body["locator"]["evidence_id"]
    response = client.get(f"/api/evidence/{sql_id}/verify", params={"backend": "sql"})
    assert response.status_code == 200
    assert response.json()["verdict"] == "Pass"
    assert response.json()["expected"] == sql_body["md5"]

    corrupt_relational_payload(store, sql_id)
    tampered = client.get(f"/api/evidence/{sql_id}/verify", params={"backend": "sql"}).json()
    assert tampered["verdict"] == "Fail"
    assert tampered["expected"] != tampered["actual"]

    missing = client.get("/api/evidence/" + "0" * 32 + "/verify", params={"backend": "sql"})
    assert missing.status_code == 404


def test_verify_fail_after_cas_tamper(client, store):
    payload = random.Random(5).randbytes(50_000)
    body = upload(client, payload, "ledger").json()
    from twinvault.cas import ContentId

    corrupt_cas_chunk(store, ContentId.parse(body["content_id"]))
    response = client.get(
        f"/api/evidence/{body['locator']['evidence_id']}/verify", params={"backend": "ledger"}
    )
    assert response.json()["verdict"] == "Fail"


def test_dangling_registration_is_409(client, store):
    body = upload(client, b"registered then lost", "ledger").json()
    from twinvault.cas import ContentId

    cid = ContentId.parse(body["content_id"])
    (store.cas.root / "objects" / cid.root[:2] / f"{cid.root}.json").unlink()
    response = client.get(f"/api/evidence/{body['locator']['evidence_id']}", params={"backend": "ledger"})
    assert response.status_code == 409
    assert "forensic" in response.json()["detail"]


def test_listing_merges_backends(client):
    assert client.get("/api/evidence").json() == []
    upload(client, b"ledger item", "ledger", case_id="case-A")
    upload(client, b"sql item", "sql", case_id="case-B")
    listing = client.get("/api/evidence").json()
    assert len(listing) == 2
    assert {entry["backend"] for entry in listing} == {"ledger", "sql"}
    for entry in listing:
        assert set(entry.keys()) == {
            "evidence_id", "backend", "case_id", "filename", "media_type",
            "size_bytes", "md5", "created_at", "block_number",
        }
        assert "payload" not in entry
    filtered = client.get("/api/evidence", params={"case_id": "case-A"}).json()
    assert len(filtered) == 1 and filtered[0]["case_id"] == "case-A"


def test_empty_payload_round_trip(client):
    body = upload(client, b"", "sql").json()
    response = client.get(f"/api/evidence/{body['locator']['evidence_id']}", params={"backend": "sql"})
    assert response.status_code == 200
    assert response.content == b""


def test_static_ui_serving(tmp_path, store):
    static = tmp_path / "ui"
    static.mkdir()
    (static / "index.html").write_text("<html><body>evidence browser</body></html>")
    client = TestClient(create_app(store, static_dir=static))
    response = client.get("/")
    assert response.status_code == 200
    assert "evidence browser" in response.text
    # API routes still take precedence over the static mount
    assert client.get("/api/evidence").json() == []
