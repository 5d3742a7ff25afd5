// REST client for the evidence service. Every displayed fact in the UI
// originates from one of these responses; the UI holds no evidence state
// of its own.

export type BackendName = "ledger" | "sql";

export interface LocatorInfo {
  backend: BackendName;
  evidence_id: string;
  block_number: number | null;
}

export interface StoreReceipt {
  locator: LocatorInfo;
  content_id: string | null;
  md5: string;
  timing_seconds: number;
}

// Mirrors the listing endpoint's response exactly; payload bytes are never
// part of a listing.
export interface EvidenceListItem {
  evidence_id: string;
  backend: BackendName;
  case_id: string;
  filename: string;
  media_type: string;
  size_bytes: number;
  md5: string;
  created_at: string;
  block_number: number | null;
}

export interface VerifyResponse {
  verdict: "Pass" | "Fail";
  expected: string;
  actual: string;
}

export interface RetrievedPayload {
  bytes: ArrayBuffer;
  mediaType: string;
  md5: string;
  timingSeconds: number;
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

async function errorDetail(response: Response): Promise<string> {
  try {
    const body = await response.json();
    if (body && typeof body.detail === "string") return body.detail;
  } catch {
    // non-JSON error body, fall through
  }
  return `${response.status} ${response.statusText}`;
}

export class EvidenceApi {
  constructor(private readonly baseUrl: string = "") {}

  async upload(
    file: Blob,
    filename: string,
    backend: BackendName,
    caseId: string,
    description = "",
  ): Promise<StoreReceipt> {
    const form = new FormData();
    form.append("file", file, filename);
    form.append("backend", backend);
    form.append("case_id", caseId);
    form.append("description", description);
    const response = await fetch(`${this.baseUrl}/api/evidence`, { method: "POST", body: form });
    if (response.status !== 201) {
      throw new ApiError(response.status, await errorDetail(response));
    }
    return (await response.json()) as StoreReceipt;
  }

  async list(caseId?: string): Promise<EvidenceListItem[]> {
    const query = caseId ? `?case_id=${encodeURIComponent(caseId)}` : "";
    const response = await fetch(`${this.baseUrl}/api/evidence${query}`);
    if (!response.ok) {
      throw new ApiError(response.status, await errorDetail(response));
    }
    return (await response.json()) as EvidenceListItem[];
  }

  async download(locator: LocatorInfo): Promise<RetrievedPayload> {
    const response = await fetch(this.evidenceUrl(locator));
    if (!response.ok) {
      throw new ApiError(response.status, await errorDetail(response));
    }
    const bytes = await response.arrayBuffer();
    return {
      bytes,
      mediaType: response.headers.get("content-type") ?? "application/octet-stream",
      md5: response.headers.get("x-md5") ?? "",
      // server-measured retrieval seconds: the same quantity the benchmark defines
      timingSeconds: Number(response.headers.get("x-timing-seconds") ?? "NaN"),
    };
  }

  async verify(locator: LocatorInfo): Promise<VerifyResponse> {
    const params = new URLSearchParams({ backend: locator.backend });
    if (locator.block_number !== null) params.set("block", String(locator.block_number));
    const url = `${this.baseUrl}/api/evidence/${locator.evidence_id}/verify?${params}`;
    const response = await fetch(url);
    if (!response.ok) {
      throw new ApiError(response.status, await errorDetail(response));
    }
    return (await response.json()) as VerifyResponse;
  }

  evidenceUrl(locator: LocatorInfo): string {
    const params = new URLSearchParams({ backend: locator.backend });
    if (locator.block_number !== null) params.set("block", String(locator.block_number));
    return `${this.baseUrl}/api/evidence/${locator.evidence_id}?${params}`;
  }
}

export function locatorOf(item: EvidenceListItem): LocatorInfo {
  return { backend: item.backend, evidence_id: item.evidence_id, block_number: item.block_number };
}
