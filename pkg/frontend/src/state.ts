// Viewer state machine. Transitions enforce the two hard rules:
// Rendered only after the model bytes were fully received and handed to the
// scene engine, and the badge is Pass/Fail only once a verify response has
// actually arrived.

import {
  ApiError,
  EvidenceApi,
  EvidenceListItem,
  LocatorInfo,
  VerifyResponse,
  locatorOf,
} from "./api.js";

export type LoadStatus = "Idle" | "Loading" | "Rendered" | "Error";
export type BadgeState = "Unknown" | "Pass" | "Fail";

export interface ViewerState {
  locator: LocatorInfo | null;
  status: LoadStatus;
  /** set when status is Error, or when the item is viewable only as a download */
  statusDetail: string;
  downloadOnly: boolean;
  badge: BadgeState;
  badgeDetail: VerifyResponse | null;
  badgeNotice: string;
  lastRetrievalSeconds: number | null;
}

export function initialViewerState(): ViewerState {
  return {
    locator: null,
    status: "Idle",
    statusDetail: "",
    downloadOnly: false,
    badge: "Unknown",
    badgeDetail: null,
    badgeNotice: "",
    lastRetrievalSeconds: null,
  };
}

// The scene engine is the only piece that touches WebGL; everything above
// it stays testable without a browser.
export interface SceneEngine {
  /** Parse and display model bytes; resolves once the scene is live. */
  display(bytes: ArrayBuffer, filename: string): Promise<void>;
  clear(): void;
}

const RENDERABLE_MEDIA_TYPES = new Set(["model/gltf-binary", "model/gltf+json"]);

export function isRenderable(mediaType: string, filename: string): boolean {
  if (RENDERABLE_MEDIA_TYPES.has(mediaType.split(";")[0]!.trim())) return true;
  const lower = filename.toLowerCase();
  return lower.endsWith(".glb") || lower.endsWith(".gltf");
}

export class ViewerController {
  state: ViewerState = initialViewerState();

  constructor(
    private readonly api: EvidenceApi,
    private readonly engine: SceneEngine,
    private readonly onChange: (state: ViewerState) => void = () => {},
  ) {}

  private update(patch: Partial<ViewerState>): void {
    this.state = { ...this.state, ...patch };
    this.onChange(this.state);
  }

  /** Retrieve an item and place it in the scene (or offer a download). */
  async open(item: EvidenceListItem): Promise<ViewerState> {
    const locator = locatorOf(item);
    this.engine.clear();
    this.update({
      ...initialViewerState(),
      locator,
      status: "Loading",
    });
    let payload;
    try {
      payload = await this.api.download(locator);
    } catch (error) {
      const detail =
        error instanceof ApiError && error.status === 404
          ? "evidence not found"
          : `retrieval failed: ${(error as Error).message}`;
      this.update({ status: "Error", statusDetail: detail });
      return this.state;
    }
    this.update({ lastRetrievalSeconds: payload.timingSeconds });
    if (!isRenderable(payload.mediaType, item.filename)) {
      // not a 3D model: degrade to a download affordance, no render attempt
      this.update({ status: "Idle", downloadOnly: true, statusDetail: "not a 3D model" });
      return this.state;
    }
    try {
      await this.engine.display(payload.bytes, item.filename);
    } catch (error) {
      this.update({ status: "Error", statusDetail: `render failed: ${(error as Error).message}` });
      return this.state;
    }
    this.update({ status: "Rendered" });
    return this.state;
  }

  /** Ask the service to re-verify the current item and update the badge. */
  async refreshBadge(): Promise<ViewerState> {
    const locator = this.state.locator;
    if (!locator) return this.state;
    try {
      const result = await this.api.verify(locator);
      this.update({ badge: result.verdict, badgeDetail: result, badgeNotice: "" });
    } catch (error) {
      if (error instanceof ApiError && error.status === 404) {
        this.update({ badge: "Unknown", badgeDetail: null, badgeNotice: "evidence not found" });
      } else {
        this.update({
          badge: "Unknown",
          badgeDetail: null,
          badgeNotice: `verification unavailable, retry: ${(error as Error).message}`,
        });
      }
    }
    return this.state;
  }
}
