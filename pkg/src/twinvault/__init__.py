"""twinvault: digital twin evidence management with two storage paradigms.

A hash-on-ledger content-addressed store and a relational BLOB store behind
one POST/GET interface, plus the benchmark and statistics engine for
comparing them and an HTTP service for investigator workflows.
"""

from .backends import (
    BackendKind,
    DanglingRegistration,
    EvidenceNotFound,
    LatencyModel,
    Locator,
    StoreReceipt,
    TimedResult,
    UnifiedStore,
    simulated_delay,
)
from .bench import (
    BenchReport,
    Operation,
    RunRecord,
    WorkloadSpec,
    build_report,
    emit_report,
    generate_workload,
    load_report,
    make_workspace_store,
    run_benchmark,
)
from .cas import CasStore, Chunk, ContentId, IntegrityViolation, UnknownContent, chunk_payload, content_id
from .core import (
    Digest,
    EvidenceMeta,
    HashAlgorithm,
    Verdict,
    VerificationResult,
    compute_md5,
    compute_sha256,
    new_evidence_id,
    verify_integrity,
)
from .ledger import (
    Block,
    BlockHeader,
    Chain,
    EvidenceRegistration,
    ValidationReport,
    block_hash_of,
    genesis,
    validate_chain,
    validate_log,
)
from .relational import EvidenceRow, RelationalConfig, RelationalStore
from .stats import (
    DescriptiveStats,
    EffectSize,
    RegressionFit,
    cohens_d,
    descriptive,
    linear_fit,
    mean_time,
    pct_difference,
)

__version__ = "0.1.0"
