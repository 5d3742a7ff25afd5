// Verification badge presentation: class names and label text per state.

import { BadgeState } from "./state.js";
import { VerifyResponse } from "./api.js";

export const BADGE_CLASSES: Record<BadgeState, string> = {
  Unknown: "badge badge-unknown",
  Pass: "badge badge-pass",
  Fail: "badge badge-fail",
};

export function badgeClass(state: BadgeState): string {
  return BADGE_CLASSES[state] ?? BADGE_CLASSES.Unknown;
}

export function badgeLabel(state: BadgeState): string {
  if (state === "Pass") return "Pass";
  if (state === "Fail") return "Fail";
  return "Not verified";
}

export function badgeTitle(state: BadgeState, detail: VerifyResponse | null): string {
  if (state === "Pass" && detail) {
    return `fingerprints match\nexpected ${detail.expected}\nactual   ${detail.actual}`;
  }
  if (state === "Fail" && detail) {
    return `TAMPER WARNING: stored bytes no longer match the registered fingerprint\nexpected ${detail.expected}\nactual   ${detail.actual}`;
  }
  return "run verification to obtain a verdict";
}
