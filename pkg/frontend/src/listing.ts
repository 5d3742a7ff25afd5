// Evidence table formatting helpers (pure, testable) and row rendering.

import { EvidenceListItem } from "./api.js";

export function formatBytes(size: number): string {
  if (size < 1_000) return `${size} B`;
  if (size < 1_000_000) return `${(size / 1_000).toFixed(1)} kB`;
  if (size < 1_000_000_000) return `${(size / 1_000_000).toFixed(1)} MB`;
  return `${(size / 1_000_000_000).toFixed(2)} GB`;
}

export function shortDigest(rendered: string): string {
  const hex = rendered.includes(":") ? rendered.split(":")[1]! : rendered;
  return hex.length > 12 ? `${hex.slice(0, 12)}…` : hex;
}

export function backendTag(item: EvidenceListItem): string {
  return item.backend === "ledger" && item.block_number !== null
    ? `ledger #${item.block_number}`
    : item.backend;
}

export interface RowActions {
  onView: (item: EvidenceListItem) => void;
  onVerify: (item: EvidenceListItem) => void;
  downloadUrl: (item: EvidenceListItem) => string;
}

export function renderListing(
  table: HTMLTableSectionElement,
  items: EvidenceListItem[],
  actions: RowActions,
): void {
  table.replaceChildren();
  for (const item of items) {
    const row = document.createElement("tr");
    const cells = [
      item.filename,
      backendTag(item),
      item.case_id,
      formatBytes(item.size_bytes),
      shortDigest(item.md5),
      item.created_at,
    ];
    for (const text of cells) {
      const cell = document.createElement("td");
      cell.textContent = text;
      row.appendChild(cell);
    }
    const actionCell = document.createElement("td");
    actionCell.className = "actions";

    const view = document.createElement("button");
    view.textContent = "View";
    view.addEventListener("click", () => actions.onView(item));
    actionCell.appendChild(view);

    const verify = document.createElement("button");
    verify.textContent = "Verify";
    verify.addEventListener("click", () => actions.onVerify(item));
    actionCell.appendChild(verify);

    const download = document.createElement("a");
    download.textContent = "Download";
    download.href = actions.downloadUrl(item);
    download.setAttribute("download", item.filename);
    actionCell.appendChild(download);

    row.appendChild(actionCell);
    table.appendChild(row);
  }
}
