"""Service configuration: one JSON file, environment overrides for credentials.

Relative paths inside the file resolve against the file's own directory, so
a config travels with its data. TWINVAULT_DB_URL overrides the relational
URL so credentials can stay out of the file.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .backends import BackendKind, DEFAULT_PAYLOAD_CAP, DISABLED_LATENCY, LatencyModel
from .relational import RelationalConfig

DB_URL_ENV = "TWINVAULT_DB_URL"


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8400
    cas_path: Path = Path("twinvault-data/cas")
    ledger_path: Path = Path("twinvault-data/ledger.log")
    relational: RelationalConfig = field(
        default_factory=lambda: RelationalConfig(url="sqlite:///twinvault-data/evidence.db")
    )
    payload_cap_bytes: int = DEFAULT_PAYLOAD_CAP
    latency: LatencyModel = DISABLED_LATENCY
    latency_overrides: dict = field(default_factory=dict)
    report_dir: Path = Path("twinvault-data/reports")
    static_dir: Path | None = None

    def __post_init__(self) -> None:
        if self.payload_cap_bytes <= 0:
            raise ValueError("payload cap must be positive")


def _parse_latency(doc: dict) -> LatencyModel:
    bandwidth = doc.get("bandwidth_bytes_per_second")
    return LatencyModel(
        enabled=doc.get("enabled", False),
        base_seconds=doc.get("base_seconds", 0.0),
        bandwidth_bytes_per_second=float("inf") if bandwidth is None else float(bandwidth),
    )


def load_config(path: str | Path) -> ServiceConfig:
    path = Path(path)
    doc = json.loads(path.read_text())
    base = path.resolve().parent

    def resolve(p: str) -> Path:
        candidate = Path(p)
        return candidate if candidate.is_absolute() else base / candidate

    listen = doc.get("listen", {})
    rel_doc = doc.get("relational", {})
    url = os.environ.get(DB_URL_ENV) or rel_doc.get("url")
    if url is None:
        sqlite_path = resolve(rel_doc.get("sqlite_path", "twinvault-data/evidence.db"))
        url = f"sqlite:///{sqlite_path}"
    relational = RelationalConfig(
        url=url,
        connect_timeout_s=rel_doc.get("connect_timeout_s", 10.0),
        read_timeout_s=rel_doc.get("read_timeout_s", 10.0),
        write_timeout_s=rel_doc.get("write_timeout_s", 10.0),
        payload_cap_bytes=doc.get("payload_cap_bytes", DEFAULT_PAYLOAD_CAP),
    )
    overrides = {
        BackendKind.parse(name): _parse_latency(model_doc)
        for name, model_doc in doc.get("latency_overrides", {}).items()
    }
    static = doc.get("static_dir")
    return ServiceConfig(
        host=listen.get("host", "127.0.0.1"),
        port=listen.get("port", 8400),
        cas_path=resolve(doc.get("cas_path", "twinvault-data/cas")),
        ledger_path=resolve(doc.get("ledger_path", "twinvault-data/ledger.log")),
        relational=relational,
        payload_cap_bytes=doc.get("payload_cap_bytes", DEFAULT_PAYLOAD_CAP),
        latency=_parse_latency(doc.get("latency", {})),
        latency_overrides=overrides,
        report_dir=resolve(doc.get("report_dir", "twinvault-data/reports")),
        static_dir=resolve(static) if static else None,
    )


def default_config(data_dir: str | Path = "twinvault-data") -> ServiceConfig:
    """Config used when no file is given: everything under one data directory."""
    root = Path(data_dir)
    url = os.environ.get(DB_URL_ENV) or f"sqlite:///{root / 'evidence.db'}"
    return ServiceConfig(
        cas_path=root / "cas",
        ledger_path=root / "ledger.log",
        relational=RelationalConfig(url=url),
        report_dir=root / "reports",
    )
