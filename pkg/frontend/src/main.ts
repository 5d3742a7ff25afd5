// Application bootstrap: wires the upload form, evidence table, viewer pane,
// and verification badge together. Reloading the page rebuilds everything
// from the API alone.

import { ApiError, BackendName, EvidenceApi, EvidenceListItem, locatorOf } from "./api.js";
import { badgeClass, badgeLabel, badgeTitle } from "./badge.js";
import { renderListing } from "./listing.js";
import { ViewerController, ViewerState } from "./state.js";
import { UploadQueue, receiptSummary, runUpload } from "./upload.js";
import { ThreeSceneEngine } from "./viewer.js";

const api = new EvidenceApi();
const queue = new UploadQueue();

function element<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

const uploadForm = element<HTMLFormElement>("upload-form");
const fileInput = element<HTMLInputElement>("upload-file");
const backendSelect = element<HTMLSelectElement>("upload-backend");
const caseInput = element<HTMLInputElement>("upload-case");
const descriptionInput = element<HTMLInputElement>("upload-description");
const receiptBox = element<HTMLDivElement>("receipt");
const errorBanner = element<HTMLDivElement>("error-banner");
const filterInput = element<HTMLInputElement>("case-filter");
const tableBody = element<HTMLTableSectionElement>("evidence-rows");
const viewerPane = element<HTMLDivElement>("viewer-pane");
const viewerStatus = element<HTMLDivElement>("viewer-status");
const badgeElement = element<HTMLSpanElement>("verify-badge");
const timingElement = element<HTMLSpanElement>("retrieval-seconds");
const downloadFallback = element<HTMLAnchorElement>("download-fallback");

function showError(message: string): void {
  errorBanner.textContent = message;
  errorBanner.hidden = false;
}

function clearError(): void {
  errorBanner.hidden = true;
}

function renderViewerState(state: ViewerState): void {
  viewerStatus.textContent =
    state.status === "Error" ? `Error: ${state.statusDetail}` : state.status;
  badgeElement.className = badgeClass(state.badge);
  badgeElement.textContent = badgeLabel(state.badge) + (state.badgeNotice ? ` (${state.badgeNotice})` : "");
  badgeElement.title = badgeTitle(state.badge, state.badgeDetail);
  timingElement.textContent =
    state.lastRetrievalSeconds !== null && Number.isFinite(state.lastRetrievalSeconds)
      ? `${state.lastRetrievalSeconds.toFixed(3)}s retrieval`
      : "";
  if (state.downloadOnly && state.locator) {
    downloadFallback.hidden = false;
    downloadFallback.href = api.evidenceUrl(state.locator);
  } else {
    downloadFallback.hidden = true;
  }
}

const viewer = new ViewerController(api, new ThreeSceneEngine(viewerPane), renderViewerState);

async function refreshListing(): Promise<void> {
  try {
    const caseFilter = filterInput.value.trim() || undefined;
    const items = await api.list(caseFilter);
    renderListing(tableBody, items, {
      onView: openInViewer,
      onVerify: verifyItem,
      downloadUrl: (item) => api.evidenceUrl(locatorOf(item)),
    });
  } catch (error) {
    showError(`listing failed: ${(error as Error).message}`);
  }
}

async function openInViewer(item: EvidenceListItem): Promise<void> {
  clearError();
  await viewer.open(item);
}

async function verifyItem(item: EvidenceListItem): Promise<void> {
  clearError();
  if (viewer.state.locator?.evidence_id !== item.evidence_id) {
    await viewer.open(item);
  }
  await viewer.refreshBadge();
}

uploadForm.addEventListener("submit", (event) => {
  event.preventDefault();
  clearError();
  const file = fileInput.files?.[0];
  if (!file) {
    showError("choose a file to upload");
    return;
  }
  const request = {
    file,
    filename: file.name,
    backend: backendSelect.value as BackendName,
    caseId: caseInput.value.trim() || "unassigned",
    description: descriptionInput.value,
  };
  receiptBox.textContent = `uploading ${file.name}…`;
  runUpload(api, queue, request)
    .then((receipt) => {
      receiptBox.textContent = receiptSummary(receipt);
      return refreshListing();
    })
    .catch((error) => {
      receiptBox.textContent = "";
      const detail =
        error instanceof ApiError ? `server rejected upload (${error.status}): ${error.message}` : String(error);
      showError(detail);
    });
});

filterInput.addEventListener("change", () => void refreshListing());
element<HTMLButtonElement>("refresh-button").addEventListener("click", () => void refreshListing());

void refreshListing();
