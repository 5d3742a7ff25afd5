import { describe, expect, it } from "vitest";

import { ApiError, EvidenceApi, EvidenceListItem } from "../src/api.js";
import { SceneEngine, ViewerController, isRenderable } from "../src/state.js";

function listItem(overrides: Partial<EvidenceListItem> = {}): EvidenceListItem {
  return {
    evidence_id: "a".repeat(32),
    backend: "ledger",
    case_id: "case-1",
    filename: "scene.glb",
    media_type: "model/gltf-binary",
    size_bytes: 1234,
    md5: "md5:" + "c".repeat(32),
    created_at: "2026-01-01T00:00:00Z",
    block_number: 1,
    ...overrides,
  };
}

class FakeEngine implements SceneEngine {
  displayed: string[] = [];
  cleared = 0;
  failNext = false;

  async display(_bytes: ArrayBuffer, filename: string): Promise<void> {
    if (this.failNext) throw new Error("malformed model");
    this.displayed.push(filename);
  }

  clear(): void {
    this.cleared += 1;
  }
}

function fakeApi(overrides: Partial<EvidenceApi>): EvidenceApi {
  const base = {
    download: async () => ({
      bytes: new ArrayBuffer(8),
      mediaType: "model/gltf-binary",
      md5: "md5:" + "c".repeat(32),
      timingSeconds: 0.125,
    }),
    verify: async () => ({ verdict: "Pass", expected: "md5:x", actual: "md5:x" }),
  };
  return { ...base, ...overrides } as unknown as EvidenceApi;
}

describe("isRenderable", () => {
  it("accepts the glTF family by media type or extension", () => {
    expect(isRenderable("model/gltf-binary", "x.bin")).toBe(true);
    expect(isRenderable("model/gltf+json", "x.bin")).toBe(true);
    expect(isRenderable("application/octet-stream", "scan.GLB")).toBe(true);
    expect(isRenderable("application/octet-stream", "scan.gltf")).toBe(true);
    expect(isRenderable("application/pdf", "report.pdf")).toBe(false);
  });
});

describe("ViewerController.open", () => {
  it("reaches Rendered only after the engine displayed the full bytes", async () => {
    const engine = new FakeEngine();
    const controller = new ViewerController(fakeApi({}), engine);
    const state = await controller.open(listItem());
    expect(state.status).toBe("Rendered");
    expect(state.lastRetrievalSeconds).toBe(0.125);
    expect(engine.displayed).toEqual(["scene.glb"]);
    expect(state.badge).toBe("Unknown"); // no verify response yet
  });

  it("degrades to a download affordance for non-3D evidence", async () => {
    const engine = new FakeEngine();
    const api = fakeApi({
      download: async () => ({
        bytes: new ArrayBuffer(4),
        mediaType: "application/pdf",
        md5: "md5:x",
        timingSeconds: 0.05,
      }),
    } as Partial<EvidenceApi>);
    const controller = new ViewerController(api, engine);
    const state = await controller.open(listItem({ filename: "report.pdf", media_type: "application/pdf" }));
    expect(state.downloadOnly).toBe(true);
    expect(state.status).not.toBe("Rendered");
    expect(engine.displayed).toEqual([]); // no render attempt
  });

  it("maps 404 to the evidence-not-found error state", async () => {
    const api = fakeApi({
      download: async () => {
        throw new ApiError(404, "evidence not found: nope");
      },
    } as Partial<EvidenceApi>);
    const controller = new ViewerController(api, new FakeEngine());
    const state = await controller.open(listItem());
    expect(state.status).toBe("Error");
    expect(state.statusDetail).toBe("evidence not found");
  });

  it("reports engine failures as render errors", async () => {
    const engine = new FakeEngine();
    engine.failNext = true;
    const controller = new ViewerController(fakeApi({}), engine);
    const state = await controller.open(listItem());
    expect(state.status).toBe("Error");
    expect(state.statusDetail).toContain("render failed");
  });
});

describe("ViewerController.refreshBadge", () => {
  it("is Pass or Fail only after a verify response arrives", async () => {
    const controller = new ViewerController(
      fakeApi({
        verify: async () => ({ verdict: "Fail", expected: "md5:a", actual: "md5:b" }),
      } as Partial<EvidenceApi>),
      new FakeEngine(),
    );
    await controller.open(listItem());
    expect(controller.state.badge).toBe("Unknown");
    const state = await controller.refreshBadge();
    expect(state.badge).toBe("Fail");
    expect(state.badgeDetail).toEqual({ verdict: "Fail", expected: "md5:a", actual: "md5:b" });
  });

  it("keeps the badge Unknown with a notice on 404", async () => {
    const controller = new ViewerController(
      fakeApi({
        verify: async () => {
          throw new ApiError(404, "gone");
        },
      } as Partial<EvidenceApi>),
      new FakeEngine(),
    );
    await controller.open(listItem());
    const state = await controller.refreshBadge();
    expect(state.badge).toBe("Unknown");
    expect(state.badgeNotice).toBe("evidence not found");
  });

  it("keeps the badge Unknown with a retry notice on network failure", async () => {
    const controller = new ViewerController(
      fakeApi({
        verify: async () => {
          throw new TypeError("fetch failed");
        },
      } as Partial<EvidenceApi>),
      new FakeEngine(),
    );
    await controller.open(listItem());
    const state = await controller.refreshBadge();
    expect(state.badge).toBe("Unknown");
    expect(state.badgeNotice).toContain("retry");
  });
});
