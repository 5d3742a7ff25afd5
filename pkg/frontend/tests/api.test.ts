import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiError, EvidenceApi, locatorOf } from "../src/api.js";

const RECEIPT = {
  locator: { backend: "ledger", evidence_id: "a".repeat(32), block_number: 3 },
  content_id: "twin-cas-v1:" + "b".repeat(64),
  md5: "md5:" + "c".repeat(32),
  timing_seconds: 0.125,
};

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

afterEach(() => vi.unstubAllGlobals());

describe("EvidenceApi.upload", () => {
  it("posts a multipart form with the explicit backend field", async () => {
    const fetchMock = vi.fn().mockResolvedValue(jsonResponse(201, RECEIPT));
    vi.stubGlobal("fetch", fetchMock);

    const api = new EvidenceApi();
    const receipt = await api.upload(new Blob([new Uint8Array([1, 2, 3])]), "scene.glb", "ledger", "case-9");

    expect(receipt).toEqual(RECEIPT);
    const [url, init] = fetchMock.mock.calls[0];
    expect(url).toBe("/api/evidence");
    expect(init.method).toBe("POST");
    const form = init.body as FormData;
    expect(form.get("backend")).toBe("ledger");
    expect(form.get("case_id")).toBe("case-9");
    expect((form.get("file") as File).name).toBe("scene.glb");
  });

  it("surfaces the server diagnostic on rejection", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn().mockResolvedValue(jsonResponse(413, { detail: "payload of 999 bytes exceeds cap" })),
    );
    const api = new EvidenceApi();
    await expect(api.upload(new Blob([]), "big.bin", "sql", "case-9")).rejects.toMatchObject({
      status: 413,
      message: "payload of 999 bytes exceeds cap",
    });
  });
});

describe("EvidenceApi.download", () => {
  it("returns bytes plus the server-measured headers", async () => {
    const body = new Uint8Array([7, 8, 9]);
    vi.stubGlobal(
      "fetch",
      vi.fn().mockResolvedValue(
        new Response(body, {
          status: 200,
          headers: {
            "content-type": "model/gltf-binary",
            "x-md5": "md5:" + "d".repeat(32),
            "x-timing-seconds": "0.25",
          },
        }),
      ),
    );
    const api = new EvidenceApi();
    const payload = await api.download({ backend: "sql", evidence_id: "e".repeat(32), block_number: null });
    expect(new Uint8Array(payload.bytes)).toEqual(body);
    expect(payload.mediaType).toBe("model/gltf-binary");
    expect(payload.timingSeconds).toBe(0.25);
  });

  it("maps 404 to an ApiError", async () => {
    vi.stubGlobal("fetch", vi.fn().mockResolvedValue(jsonResponse(404, { detail: "evidence not found" })));
    const api = new EvidenceApi();
    await expect(
      api.download({ backend: "sql", evidence_id: "0".repeat(32), block_number: null }),
    ).rejects.toBeInstanceOf(ApiError);
  });
});

describe("EvidenceApi.verify", () => {
  it("adds the block number for ledger locators", async () => {
    const fetchMock = vi
      .fn()
      .mockResolvedValue(jsonResponse(200, { verdict: "Pass", expected: "md5:x", actual: "md5:x" }));
    vi.stubGlobal("fetch", fetchMock);
    const api = new EvidenceApi();
    await api.verify({ backend: "ledger", evidence_id: "f".repeat(32), block_number: 7 });
    expect(fetchMock.mock.calls[0][0]).toContain("/verify?backend=ledger&block=7");
  });
});

describe("locatorOf", () => {
  it("strips listing fields down to the address", () => {
    expect(
      locatorOf({
        evidence_id: "a".repeat(32),
        backend: "ledger",
        case_id: "c",
        filename: "f.glb",
        media_type: "model/gltf-binary",
        size_bytes: 10,
        md5: "md5:" + "c".repeat(32),
        created_at: "2026-01-01T00:00:00Z",
        block_number: 2,
      }),
    ).toEqual({ backend: "ledger", evidence_id: "a".repeat(32), block_number: 2 });
  });
});
