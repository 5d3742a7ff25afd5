"""HTTP surface for investigator workflows and the web UI.

Evidence upload is a multipart form; retrieval streams the payload with the
registered fingerprint and the measured retrieval seconds in headers, so the
UI displays the same quantity the benchmark defines. Listings never include
payload bytes. The ledger is only ever written through the registry append
path; there are no hidden write paths.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterator

from fastapi import FastAPI, Form, Request, UploadFile
from fastapi.responses import JSONResponse, StreamingResponse
from fastapi.staticfiles import StaticFiles

from .backends import (
    BackendKind,
    DanglingRegistration,
    EvidenceNotFound,
    ListedEvidence,
    StoreFailed,
    UnifiedStore,
)
from .cas import CasStore, IntegrityViolation
from .config import ServiceConfig
from .core import EvidenceMeta, render_timestamp, utc_now_seconds
from .ledger import Chain
from .relational import PayloadTooLarge, RelationalStore

_STREAM_CHUNK = 256 * 1024


def build_store(config: ServiceConfig) -> UnifiedStore:
    config.cas_path.parent.mkdir(parents=True, exist_ok=True)
    config.ledger_path.parent.mkdir(parents=True, exist_ok=True)
    return UnifiedStore(
        cas=CasStore(config.cas_path),
        chain=Chain(config.ledger_path),
        relational=RelationalStore.open(config.relational),
        payload_cap_bytes=config.payload_cap_bytes,
        latency=config.latency,
        latency_overrides=config.latency_overrides,
    )


def _listing_json(entry: ListedEvidence) -> dict:
    return {
        "evidence_id": entry.evidence_id,
        "backend": entry.backend.value,
        "case_id": entry.meta.case_id,
        "filename": entry.meta.filename,
        "media_type": entry.meta.media_type,
        "size_bytes": entry.meta.size_bytes,
        "md5": f"md5:{entry.md5_hex}",
        "created_at": render_timestamp(entry.meta.submitted_at),
        "block_number": entry.block_number,
    }


def _stream(payload: bytes) -> Iterator[bytes]:
    for offset in range(0, len(payload), _STREAM_CHUNK):
        yield payload[offset : offset + _STREAM_CHUNK]
    if not payload:
        yield b""


def create_app(store: UnifiedStore, static_dir: Path | None = None) -> FastAPI:
    app = FastAPI(title="twinvault", docs_url=None, redoc_url=None)

    @app.exception_handler(EvidenceNotFound)
    async def _not_found(request: Request, exc: EvidenceNotFound):
        return JSONResponse(status_code=404, content={"detail": f"evidence not found: {exc}"})

    @app.exception_handler(DanglingRegistration)
    async def _dangling(request: Request, exc: DanglingRegistration):
        return JSONResponse(
            status_code=409,
            content={"detail": f"dangling registration (forensic inconsistency): {exc}"},
        )

    @app.exception_handler(IntegrityViolation)
    async def _integrity(request: Request, exc: IntegrityViolation):
        return JSONResponse(
            status_code=409,
            content={"detail": f"stored content failed self-verification: {exc}"},
        )

    @app.exception_handler(PayloadTooLarge)
    async def _too_large(request: Request, exc: PayloadTooLarge):
        return JSONResponse(status_code=413, content={"detail": str(exc)})

    @app.exception_handler(StoreFailed)
    async def _store_failed(request: Request, exc: StoreFailed):
        return JSONResponse(status_code=502, content={"detail": str(exc)})

    @app.post("/api/evidence", status_code=201)
    async def post_evidence(
        file: UploadFile,
        backend: str = Form(""),
        case_id: str = Form(...),
        description: str = Form(""),
        submitter: str = Form("web-upload"),
    ):
        try:
            kind = BackendKind.parse(backend)
        except ValueError:
            return JSONResponse(status_code=400, content={"detail": f"unknown backend {backend!r}"})
        payload = await file.read()
        meta = EvidenceMeta(
            case_id=case_id,
            filename=file.filename or "unnamed",
            media_type=file.content_type or "application/octet-stream",
            size_bytes=len(payload),
            submitted_at=utc_now_seconds(),
            submitter=submitter,
        )
        receipt = store.post_evidence(kind, payload, meta)
        return JSONResponse(
            status_code=201,
            content={
                "locator": {
                    "backend": receipt.locator.kind.value,
                    "evidence_id": receipt.locator.evidence_id,
                    "block_number": receipt.locator.block_number,
                },
                "content_id": receipt.content_id.render() if receipt.content_id else None,
                "md5": receipt.md5.render(),
                "timing_seconds": receipt.timing.seconds,
            },
        )

    @app.get("/api/evidence")
    async def list_evidence(case_id: str | None = None):
        return [_listing_json(entry) for entry in store.list_evidence(case_id)]

    @app.get("/api/evidence/{evidence_id}")
    async def get_evidence(evidence_id: str, backend: str, block: int | None = None):
        try:
            kind = BackendKind.parse(backend)
        except ValueError:
            return JSONResponse(status_code=400, content={"detail": f"unknown backend {backend!r}"})
        locator = store.resolve_locator(kind, evidence_id=evidence_id, block_number=block)
        retrieved = store.get_evidence(locator)
        return StreamingResponse(
            _stream(retrieved.payload),
            media_type=retrieved.meta.media_type,
            headers={
                "X-MD5": retrieved.registered_md5.render(),
                "X-Timing-Seconds": repr(retrieved.timing.seconds),
                "Content-Disposition": f'attachment; filename="{retrieved.meta.filename}"',
                "Content-Length": str(len(retrieved.payload)),
            },
        )

    @app.get("/api/evidence/{evidence_id}/verify")
    async def verify_evidence(evidence_id: str, backend: str, block: int | None = None):
        try:
            kind = BackendKind.parse(backend)
        except ValueError:
            return JSONResponse(status_code=400, content={"detail": f"unknown backend {backend!r}"})
        locator = store.resolve_locator(kind, evidence_id=evidence_id, block_number=block)
        result = store.verify_evidence(locator)
        return {
            "verdict": result.verdict.value,
            "expected": result.expected.render(),
            "actual": result.actual.render(),
        }

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app


def serve(config: ServiceConfig) -> None:
    import uvicorn

    app = create_app(build_store(config), static_dir=config.static_dir)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
