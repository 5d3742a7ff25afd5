// Upload handling. Concurrent uploads from one page are queued so each
// receipt is displayed unambiguously, and the backend choice is an explicit
// form field on every single upload.

import { BackendName, EvidenceApi, StoreReceipt } from "./api.js";

export class UploadQueue {
  private chain: Promise<unknown> = Promise.resolve();

  enqueue<T>(task: () => Promise<T>): Promise<T> {
    const next = this.chain.then(task, task);
    this.chain = next.catch(() => undefined);
    return next;
  }
}

export interface UploadRequest {
  file: Blob;
  filename: string;
  backend: BackendName;
  caseId: string;
  description: string;
}

export function runUpload(
  api: EvidenceApi,
  queue: UploadQueue,
  request: UploadRequest,
): Promise<StoreReceipt> {
  return queue.enqueue(() =>
    api.upload(request.file, request.filename, request.backend, request.caseId, request.description),
  );
}

export function receiptSummary(receipt: StoreReceipt): string {
  const parts = [
    `stored on ${receipt.locator.backend}`,
    receipt.locator.block_number !== null ? `block #${receipt.locator.block_number}` : null,
    receipt.md5,
    `${receipt.timing_seconds.toFixed(3)}s`,
  ];
  return parts.filter((p) => p !== null).join(" · ");
}
